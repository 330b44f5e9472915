#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ceerlab/ceer.hpp"
#include "ceerlab/constructions.hpp"
#include "ceerlab/errors.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/semigroup.hpp"
#include "ceerlab/spec_text.hpp"
#include "ceerlab/transversal.hpp"
#include "ceerlab/words.hpp"

namespace {

using namespace ceerlab;

std::string echo_command(int argc, char** argv) {
  std::string out = "ceerlab";
  for (int i = 1; i < argc; ++i) {
    out.push_back(' ');
    out += argv[i];
  }
  return out;
}

StagedCeer build_from_text(const std::string& text) { return build(parse_spec(text)); }

void emit_warnings(const StagedCeer& r) {
  for (const std::string& d : r.diagnostics()) std::cerr << "warning: " << d << '\n';
}

std::string join_naturals(const std::vector<std::uint64_t>& xs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ' ';
    out << xs[i];
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class TraceFile {
 public:
  explicit TraceFile(const std::string& path) : path_(path) {
    if (!path.empty()) {
      out_.open(path, std::ios::binary);
      if (!out_) throw std::invalid_argument("cannot open trace file: " + path);
    }
  }
  void line(const std::string& s) {
    if (out_.is_open()) out_ << s << '\n';
  }
  const std::string& name() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

struct CommonOpts {
  std::string command_echo;
  std::uint64_t stage = 1000;
  std::uint64_t horizon = 500;
  std::uint64_t cap = 10'000;
};

void cmd_decide(const std::string& spec, std::uint64_t s, std::uint64_t x, std::uint64_t y) {
  StagedCeer r = build_from_text(spec);
  bool v = r.decide_at(s, x, y);
  emit_warnings(r);
  std::cout << (v ? "true" : "false") << '\n';
}

void cmd_classes(const std::string& spec, std::uint64_t s, std::uint64_t n) {
  StagedCeer r = build_from_text(spec);
  for (const auto& block : classes_at(r, s, n)) {
    std::cout << block.front() << ':';
    for (std::uint64_t x : block) std::cout << ' ' << x;
    std::cout << '\n';
  }
  emit_warnings(r);
}

void cmd_principal(const std::string& spec, std::uint64_t s, std::uint64_t n,
                   std::optional<std::uint64_t> nth) {
  StagedCeer r = build_from_text(spec);
  if (nth) {
    std::cout << principal_function_at(r, s, *nth, n) << '\n';
  } else {
    std::cout << join_naturals(principal_at(r, s, n).elements) << '\n';
  }
  emit_warnings(r);
}

void cmd_construct_allhigh(const CommonOpts& common, std::uint64_t stages,
                           const std::string& trace_path) {
  TraceFile trace(trace_path);
  AllhighRun run = allhigh_run(stages);
  std::size_t next_action = 0;
  for (std::uint64_t t = 1; t <= stages; ++t) {
    if (next_action < run.actions.size() && run.actions[next_action].stage == t) {
      trace.line("stage " + std::to_string(t) + ": act " +
                 std::to_string(run.actions[next_action].e));
      ++next_action;
    } else {
      trace.line("stage " + std::to_string(t) + ": idle");
    }
  }

  std::cout << "command: " << common.command_echo << '\n';
  std::cout << "construction: allhigh\n";
  std::cout << "stages: " << stages << '\n';
  std::cout << "horizon: " << stages << '\n';
  std::cout << "actions: " << run.actions.size() << '\n';
  std::cout << "quiescent-since: " << run.quiescent_since << '\n';

  const IntervalPartition& final_state = run.history.back();
  for (std::size_t e = 0; e < final_state.prefix.size(); ++e) {
    Interval iv = final_state.prefix[e];
    std::uint64_t next_lo = final_state.interval(e + 1).lo;
    std::uint64_t f = run.final_f[e];
    std::cout << "requirement " << e << ": interval [" << iv.lo << ", " << iv.hi << "], f = " << f
              << (f < next_lo ? ", dominated" : ", active") << '\n';
  }

  bool tiling = true;
  bool finite = true;
  for (const IntervalPartition& p : run.history) {
    std::uint64_t expect = 0;
    for (const Interval& iv : p.prefix) {
      if (iv.lo != expect || iv.hi < iv.lo) tiling = false;
      expect = iv.hi + 1;
    }
    if (p.tail_base != expect) tiling = false;
  }
  bool action_bounds = true;
  for (const AllhighAction& act : run.actions) {
    if (!(act.f_value > act.hi_before && act.f_value <= act.hi_after)) action_bounds = false;
  }
  bool quiescent_ok = true;
  std::uint64_t window = stages > 100 ? stages - 100 : 0;
  for (std::uint64_t e = 0; e < stages; ++e) {
    bool recently = false;
    for (const AllhighAction& act : run.actions) {
      if (act.e <= e && act.stage > window) recently = true;
    }
    if (recently) continue;
    if (run.final_f[e] >= final_state.interval(e + 1).lo) quiescent_ok = false;
  }
  std::cout << "invariant partition-tiling: " << (tiling ? "pass" : "fail") << '\n';
  std::cout << "invariant action-f-bounds: " << (action_bounds ? "pass" : "fail") << '\n';
  std::cout << "invariant quiescent-dominance: " << (quiescent_ok ? "pass" : "fail") << '\n';
  std::cout << "invariant finite-classes: " << (finite ? "pass" : "fail") << '\n';
  std::cout << "trace: " << (trace_path.empty() ? "none" : trace_path) << '\n';
}

void cmd_construct_weakarray(const CommonOpts& common, const std::string& spec,
                             std::uint64_t stages, const std::string& trace_path) {
  TraceFile trace(trace_path);
  CeerSpec parsed = parse_spec(spec);
  StagedCeer r = build(parsed);
  WeakArrayRun run = weakarray_run(r, stages);
  for (const PickAction& pick : run.picks) {
    trace.line("stage " + std::to_string(pick.stage) + ": pick " + std::to_string(pick.n) + " " +
               std::to_string(pick.x));
  }

  std::cout << "command: " << common.command_echo << '\n';
  std::cout << "construction: weakarray\n";
  std::cout << "spec: " << print_spec(parsed) << '\n';
  std::cout << "stages: " << stages << '\n';
  std::cout << "horizon: " << stages << '\n';
  for (std::size_t n = 0; n < run.final_state.sets.size(); ++n) {
    std::cout << "F_" << n << ": " << join_naturals(run.final_state.sets[n]) << '\n';
  }
  std::cout << "stabilized: " << join_naturals(run.stabilized) << '\n';
  std::cout << "T: " << join_naturals(run.sample.elements) << '\n';

  std::set<std::uint64_t> seen;
  bool disjoint = true;
  for (const auto& set : run.final_state.sets) {
    for (std::uint64_t x : set) {
      if (!seen.insert(x).second) disjoint = false;
    }
  }
  bool certified = is_transversal_at(r, stages, run.sample.elements);
  StrongArray stabilized_sets;
  for (std::uint64_t n : run.stabilized) stabilized_sets.sets.push_back(run.final_state.sets[n]);
  bool meets = array_intersection_check(stabilized_sets, run.sample.elements);
  std::cout << "invariant disjoint-arrays: " << (disjoint ? "pass" : "fail") << '\n';
  std::cout << "invariant certified-transversal: " << (certified ? "pass" : "fail") << '\n';
  std::cout << "invariant stabilized-meet: " << (meets ? "pass" : "fail") << '\n';
  std::cout << "trace: " << (trace_path.empty() ? "none" : trace_path) << '\n';
  emit_warnings(r);
}

void cmd_construct_postsimple(const CommonOpts& common, std::uint64_t stages,
                              std::optional<std::uint64_t> census_len,
                              const std::string& trace_path) {
  TraceFile trace(trace_path);
  SimpleSetState state = postsimple_run(stages);
  for (const ServedWord& m : state.members) {
    trace.line("stage " + std::to_string(m.stage) + ": serve " + std::to_string(m.index) + " " +
               m.word.str());
  }

  std::cout << "command: " << common.command_echo << '\n';
  std::cout << "construction: postsimple\n";
  std::cout << "stages: " << stages << '\n';
  std::cout << "horizon: " << stages << '\n';
  for (const ServedWord& m : state.members) {
    std::cout << "index " << m.index << ": " << m.word.str() << " (stage " << m.stage << ")\n";
  }
  if (census_len) {
    std::vector<Word> z;
    for (const ServedWord& m : state.members) z.push_back(m.word);
    std::vector<std::uint64_t> counts = avoidance_census(z, *census_len);
    for (std::size_t l = 0; l < counts.size(); ++l) {
      std::cout << "length " << l << ": " << counts[l] << '\n';
    }
  }

  bool size_bound = true;
  for (std::uint64_t k = 0; k <= 25; ++k) {
    std::uint64_t count = 0;
    for (const ServedWord& m : state.members) {
      if (m.word.length() <= k + 4) ++count;
    }
    if (count > k) size_bound = false;
  }
  bool min_length = true;
  for (const ServedWord& m : state.members) {
    if (m.word.length() <= 4) min_length = false;
  }
  std::set<std::uint64_t> indices;
  bool one_per_index = true;
  for (const ServedWord& m : state.members) {
    if (!indices.insert(m.index).second) one_per_index = false;
  }
  std::cout << "invariant size-bound: " << (size_bound ? "pass" : "fail") << '\n';
  std::cout << "invariant min-length: " << (min_length ? "pass" : "fail") << '\n';
  std::cout << "invariant one-per-index: " << (one_per_index ? "pass" : "fail") << '\n';
  std::cout << "trace: " << (trace_path.empty() ? "none" : trace_path) << '\n';
}

void cmd_construct_kk(const CommonOpts& common, const std::string& algebra_path,
                      std::uint64_t depth, std::uint64_t stage, const std::string& trace_path) {
  TraceFile trace(trace_path);
  AlgebraPresentation algebra = parse_algebra(read_file(algebra_path));
  KkExtraction result = kk_extract(algebra, depth, stage);
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    trace.line("level " + std::to_string(i) + " size " + std::to_string(result.levels[i].size()));
  }

  std::cout << "command: " << common.command_echo << '\n';
  std::cout << "construction: kk\n";
  std::cout << "algebra: " << algebra_path << '\n';
  std::cout << "depth: " << depth << '\n';
  std::cout << "stages: " << stage << '\n';
  std::cout << "horizon: " << depth << '\n';
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    std::cout << "level " << i << ": size " << result.levels[i].size() << ", max "
              << result.levels[i].back() << '\n';
  }
  std::cout << "T: " << join_naturals(result.sample.elements) << '\n';
  std::cout << "majorizer: " << join_naturals(result.majorizer) << '\n';
  if (result.stalled_level) {
    std::cout << "stalled: level " << *result.stalled_level << '\n';
  } else {
    std::cout << "stalled: none\n";
  }

  bool dominates = true;
  for (std::size_t i = 0; i < result.sample.elements.size(); ++i) {
    if (result.majorizer[i] < result.sample.elements[i]) dominates = false;
  }
  bool certified = is_transversal_at(algebra.word_problem, stage, result.sample.elements);
  std::cout << "invariant majorizer-dominates-sample: " << (dominates ? "pass" : "fail") << '\n';
  std::cout << "invariant certified-transversal: " << (certified ? "pass" : "fail") << '\n';
  std::cout << "trace: " << (trace_path.empty() ? "none" : trace_path) << '\n';
  emit_warnings(algebra.word_problem);
}

void cmd_semigroup_classify(const std::string& word_text) {
  Stratum st = classify(Word(word_text));
  switch (st.tag) {
    case Stratum::Tag::coding: std::cout << "coding " << st.exponent << '\n'; break;
    case Stratum::Tag::contains_coding: std::cout << "contains-coding\n"; break;
    case Stratum::Tag::avoiding: std::cout << "avoiding\n"; break;
  }
}

void cmd_semigroup_decide(const std::string& spec, const std::string& variant, std::uint64_t s,
                          std::uint64_t cap, const std::string& u_text,
                          const std::string& v_text) {
  StagedCeer r = build_from_text(spec);
  Word u(u_text), v(v_text);
  if (variant == "sr") {
    std::cout << (sr_decide(r, s, u, v) ? "true" : "false") << '\n';
  } else {
    Presentation p{Presentation::Kind::fincl, r};
    switch (fincl_decide(p, s, u, v, ClosureLimits{cap, cap})) {
      case FinclVerdict::equal: std::cout << "equal\n"; break;
      case FinclVerdict::distinct: std::cout << "distinct\n"; break;
      case FinclVerdict::unknown: std::cout << "unknown\n"; break;
    }
  }
  emit_warnings(r);
}

void cmd_semigroup_tojoin(const std::string& word_text) {
  std::cout << sr_to_join(Word(word_text)) << '\n';
}

void cmd_semigroup_closure(const std::string& spec, const std::string& variant, std::uint64_t s,
                           std::uint64_t cap, const std::string& word_text) {
  StagedCeer r = build_from_text(spec);
  Presentation p{variant == "sr" ? Presentation::Kind::sr : Presentation::Kind::fincl, r};
  ClosureResult closure = congruence_closure(p, s, Word(word_text), ClosureLimits{cap, cap});
  for (const Word& w : closure.words) std::cout << w.str() << '\n';
  std::cout << "truncated: " << (closure.truncated ? "yes" : "no") << '\n';
  emit_warnings(r);
}

void cmd_semigroup_classsize(const std::string& spec, std::uint64_t s, std::uint64_t cap,
                             const std::string& word_text) {
  StagedCeer r = build_from_text(spec);
  Presentation p{Presentation::Kind::fincl, r};
  ClassSize result = fincl_class_size(p, s, Word(word_text), ClosureLimits{cap, cap});
  std::cout << "size " << result.size << (result.truncated ? " (truncated)" : "") << ", predicted ";
  if (result.predicted) {
    std::cout << *result.predicted << '\n';
  } else {
    std::cout << "none\n";
  }
  emit_warnings(r);
}

void cmd_reduce(const CommonOpts& common, std::optional<std::uint64_t> f_index,
                const std::string& f_asm, const std::string& from_text, const std::string& to_text,
                std::uint64_t plus_idn, std::uint64_t n, std::uint64_t s, std::uint64_t budget) {
  Program f = f_index ? decode_program(*f_index) : assemble(read_file(f_asm));
  CeerSpec from_spec = parse_spec(from_text);
  CeerSpec to_spec = parse_spec(to_text);
  if (plus_idn > 0) {
    to_spec = CeerSpec::uniform_join_spec(to_spec, CeerSpec::id_n_spec(plus_idn));
  }
  StagedCeer from = build(from_spec);
  StagedCeer to = build(to_spec);
  ReductionCheck check = check_reduction(f, from, to, n, s, budget);

  std::cout << "command: " << common.command_echo << '\n';
  std::cout << "reduction: program " << f.index << '\n';
  std::cout << "from: " << print_spec(from_spec) << '\n';
  std::cout << "to: " << print_spec(to_spec) << '\n';
  std::cout << "horizon: " << check.horizon << '\n';
  std::cout << "stages: " << check.stage << '\n';
  if (check.consistent) {
    std::cout << "verdict: consistent\n";
    std::cout << "note: stage-bounded; non-relatedness is certified only up to stage "
              << check.stage << '\n';
  } else {
    std::cout << "verdict: counterexample\n";
    std::cout << "pair: (" << check.x << ", " << check.y << ")\n";
    std::cout << "side: " << (check.side == WitnessSide::forward ? "forward" : "backward") << '\n';
  }
  emit_warnings(from);
  emit_warnings(to);
}

void cmd_assemble(const std::string& path, std::optional<std::uint64_t> index) {
  if (index) {
    std::cout << disassemble(decode_program(*index));
  } else {
    std::cout << assemble(read_file(path)).index << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stage-approximated equivalence relation laboratory", "ceerlab"};
  app.require_subcommand(1);

  auto common = std::make_shared<CommonOpts>();
  common->command_echo = echo_command(argc, argv);

  try {
    // decide
    {
      auto spec = std::make_shared<std::string>();
      auto x = std::make_shared<std::uint64_t>(0);
      auto y = std::make_shared<std::uint64_t>(0);
      auto stage = std::make_shared<std::uint64_t>(1000);
      auto* sub = app.add_subcommand("decide", "decide one pair at a stage");
      sub->add_option("spec", *spec, "relation spec expression")->required();
      sub->add_option("x", *x, "first element")->required();
      sub->add_option("y", *y, "second element")->required();
      sub->add_option("--stage", *stage, "stage to evaluate at")->envname("CEERLAB_STAGES");
      sub->callback([=] { cmd_decide(*spec, *stage, *x, *y); });
    }
    // classes
    {
      auto spec = std::make_shared<std::string>();
      auto stage = std::make_shared<std::uint64_t>(1000);
      auto horizon = std::make_shared<std::uint64_t>(500);
      auto* sub = app.add_subcommand("classes", "partition of [0, max] at a stage");
      sub->add_option("spec", *spec, "relation spec expression")->required();
      sub->add_option("--stage", *stage, "stage to evaluate at")->envname("CEERLAB_STAGES");
      sub->add_option("--max", *horizon, "horizon")->envname("CEERLAB_HORIZON");
      sub->callback([=] { cmd_classes(*spec, *stage, *horizon); });
    }
    // principal
    {
      auto spec = std::make_shared<std::string>();
      auto stage = std::make_shared<std::uint64_t>(1000);
      auto horizon = std::make_shared<std::uint64_t>(500);
      auto nth = std::make_shared<std::optional<std::uint64_t>>();
      auto* sub = app.add_subcommand("principal", "least class representatives at a stage");
      sub->add_option("spec", *spec, "relation spec expression")->required();
      sub->add_option("--stage", *stage, "stage to evaluate at")->envname("CEERLAB_STAGES");
      sub->add_option("--max", *horizon, "horizon")->envname("CEERLAB_HORIZON");
      sub->add_option("--nth", *nth, "emit only the k-th representative");
      sub->callback([=] { cmd_principal(*spec, *stage, *horizon, *nth); });
    }
    // construct
    {
      auto* construct = app.add_subcommand("construct", "run a stage construction");
      construct->require_subcommand(1);
      {
        auto stages = std::make_shared<std::uint64_t>(1000);
        auto trace = std::make_shared<std::string>();
        auto* sub = construct->add_subcommand("allhigh", "interval collapse construction");
        sub->add_option("--stages", *stages, "stage budget")->envname("CEERLAB_STAGES");
        sub->add_option("--trace", *trace, "trace file path");
        sub->callback([=] { cmd_construct_allhigh(*common, *stages, *trace); });
      }
      {
        auto spec = std::make_shared<std::string>();
        auto stages = std::make_shared<std::uint64_t>(1000);
        auto trace = std::make_shared<std::string>();
        auto* sub = construct->add_subcommand("weakarray", "weak array against a relation");
        sub->add_option("--spec", *spec, "relation spec expression")->required();
        sub->add_option("--stages", *stages, "stage budget")->envname("CEERLAB_STAGES");
        sub->add_option("--trace", *trace, "trace file path");
        sub->callback([=] { cmd_construct_weakarray(*common, *spec, *stages, *trace); });
      }
      {
        auto stages = std::make_shared<std::uint64_t>(1000);
        auto census = std::make_shared<std::optional<std::uint64_t>>();
        auto trace = std::make_shared<std::string>();
        auto* sub = construct->add_subcommand("postsimple", "simple set of long words");
        sub->add_option("--stages", *stages, "stage budget")->envname("CEERLAB_STAGES");
        sub->add_option("--census", *census, "avoidance census up to this length");
        sub->add_option("--trace", *trace, "trace file path");
        sub->callback([=] { cmd_construct_postsimple(*common, *stages, *census, *trace); });
      }
      {
        auto algebra = std::make_shared<std::string>();
        auto depth = std::make_shared<std::uint64_t>(25);
        auto stage = std::make_shared<std::uint64_t>(1000);
        auto trace = std::make_shared<std::string>();
        auto* sub = construct->add_subcommand("kk", "level extraction from an algebra");
        sub->add_option("--algebra", *algebra, "algebra description file")->required();
        sub->add_option("--depth", *depth, "levels to build");
        sub->add_option("--stage", *stage, "word problem stage")->envname("CEERLAB_STAGES");
        sub->add_option("--trace", *trace, "trace file path");
        sub->callback([=] { cmd_construct_kk(*common, *algebra, *depth, *stage, *trace); });
      }
    }
    // semigroup
    {
      auto* semigroup = app.add_subcommand("semigroup", "two-generator semigroup word problems");
      semigroup->require_subcommand(1);
      {
        auto word = std::make_shared<std::string>();
        auto* sub = semigroup->add_subcommand("classify", "stratum of a word");
        sub->add_option("word", *word, "word over {a,b}")->required();
        sub->callback([=] { cmd_semigroup_classify(*word); });
      }
      {
        auto spec = std::make_shared<std::string>();
        auto variant = std::make_shared<std::string>("sr");
        auto stage = std::make_shared<std::uint64_t>(1000);
        auto cap = std::make_shared<std::uint64_t>(10'000);
        auto u = std::make_shared<std::string>();
        auto v = std::make_shared<std::string>();
        auto* sub = semigroup->add_subcommand("decide", "decide a word pair");
        sub->add_option("--spec", *spec, "relation spec expression")->required();
        sub->add_option("--variant", *variant, "sr or fincl")
            ->check(CLI::IsMember({"sr", "fincl"}));
        sub->add_option("--stage", *stage, "stage to evaluate at")->envname("CEERLAB_STAGES");
        sub->add_option("--cap", *cap, "closure cap (fincl only)");
        sub->add_option("u", *u, "first word")->required();
        sub->add_option("v", *v, "second word")->required();
        sub->callback([=] { cmd_semigroup_decide(*spec, *variant, *stage, *cap, *u, *v); });
      }
      {
        auto word = std::make_shared<std::string>();
        auto* sub = semigroup->add_subcommand("tojoin", "code of a word's class in the join");
        sub->add_option("word", *word, "word over {a,b}")->required();
        sub->callback([=] { cmd_semigroup_tojoin(*word); });
      }
      {
        auto spec = std::make_shared<std::string>();
        auto variant = std::make_shared<std::string>("sr");
        auto stage = std::make_shared<std::uint64_t>(1000);
        auto cap = std::make_shared<std::uint64_t>(10'000);
        auto word = std::make_shared<std::string>();
        auto* sub = semigroup->add_subcommand("closure", "rewrite closure of a word");
        sub->add_option("--spec", *spec, "relation spec expression")->required();
        sub->add_option("--variant", *variant, "sr or fincl")
            ->check(CLI::IsMember({"sr", "fincl"}));
        sub->add_option("--stage", *stage, "stage to evaluate at")->envname("CEERLAB_STAGES");
        sub->add_option("--cap", *cap, "word and length cap");
        sub->add_option("word", *word, "word over {a,b}")->required();
        sub->callback([=] { cmd_semigroup_closure(*spec, *variant, *stage, *cap, *word); });
      }
      {
        auto spec = std::make_shared<std::string>();
        auto stage = std::make_shared<std::uint64_t>(1000);
        auto cap = std::make_shared<std::uint64_t>(10'000);
        auto word = std::make_shared<std::string>();
        auto* sub = semigroup->add_subcommand("classsize", "class size and predicted product");
        sub->add_option("--spec", *spec, "relation spec expression")->required();
        sub->add_option("--stage", *stage, "stage to evaluate at")->envname("CEERLAB_STAGES");
        sub->add_option("--cap", *cap, "word and length cap");
        sub->add_option("word", *word, "word over {a,b}")->required();
        sub->callback([=] { cmd_semigroup_classsize(*spec, *stage, *cap, *word); });
      }
    }
    // reduce
    {
      auto f_index = std::make_shared<std::optional<std::uint64_t>>();
      auto f_asm = std::make_shared<std::string>();
      auto from = std::make_shared<std::string>();
      auto to = std::make_shared<std::string>();
      auto plus_idn = std::make_shared<std::uint64_t>(0);
      auto horizon = std::make_shared<std::uint64_t>(500);
      auto stage = std::make_shared<std::uint64_t>(1000);
      auto budget = std::make_shared<std::uint64_t>(1'000'000);
      auto* sub = app.add_subcommand("reduce", "check a map between two relations");
      auto* oi = sub->add_option("--f-index", *f_index, "program index of the map");
      auto* oa = sub->add_option("--f-asm", *f_asm, "assembly file of the map");
      oi->excludes(oa);
      sub->add_option("--from", *from, "source spec")->required();
      sub->add_option("--to", *to, "target spec")->required();
      sub->add_option("--plus-idn", *plus_idn, "join the target with (idn n) first");
      sub->add_option("--max", *horizon, "pair horizon")->envname("CEERLAB_HORIZON");
      sub->add_option("--stage", *stage, "stage to compare at")->envname("CEERLAB_STAGES");
      sub->add_option("--budget", *budget, "step budget for the map");
      sub->callback([=] {
        if (!*f_index && f_asm->empty()) {
          throw CLI::RequiredError("one of --f-index / --f-asm");
        }
        cmd_reduce(*common, *f_index, *f_asm, *from, *to, *plus_idn, *horizon, *stage, *budget);
      });
    }
    // assemble
    {
      auto path = std::make_shared<std::string>();
      auto index = std::make_shared<std::optional<std::uint64_t>>();
      auto* sub = app.add_subcommand("assemble", "program text to index and back");
      sub->add_option("file", *path, "assembly file");
      sub->add_option("--index", *index, "disassemble this program index instead");
      sub->callback([=] {
        if (!*index && path->empty()) throw CLI::RequiredError("file or --index");
        cmd_assemble(*path, *index);
      });
    }

    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const word_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const horizon_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const budget_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const partial_function_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (std::uint64_t x : e.divergent_inputs) std::cerr << "divergent input: " << x << '\n';
    return 5;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
