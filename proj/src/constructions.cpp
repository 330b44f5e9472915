#include "ceerlab/constructions.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ceerlab/errors.hpp"
#include "ceerlab/pairing.hpp"
#include "ceerlab/spec_text.hpp"

namespace ceerlab {

std::uint64_t f_stage(std::uint64_t e, std::uint64_t s) {
  std::uint64_t best = 0;
  for (std::uint64_t i = 0; i <= e; ++i) {
    Program p = decode_program(i);
    for (std::uint64_t j = 0; j <= e; ++j) {
      if (auto v = phi_stage(p, j, s)) best = std::max(best, *v);
    }
  }
  return best;
}

namespace {

struct LiveRun {
  std::uint64_t box;  // max(i, j)
  BoundedRun run;
};

}  // namespace

// The table keeps one resumable run per pair (i, j) <= max_index and feeds a
// halted run's value into the boxes once the stage passes both its halting
// time and its value (the phi_stage admission rule).
FStageTable::FStageTable(std::uint64_t max_index) : max_index_(max_index) {
  box_max_.assign(max_index + 1, 0);
  prefix_max_.assign(max_index + 1, 0);
  runs_.reserve((max_index + 1) * (max_index + 1));
  for (std::uint64_t i = 0; i <= max_index; ++i) {
    auto program = std::make_shared<const Program>(decode_program(i));
    for (std::uint64_t j = 0; j <= max_index; ++j) {
      runs_.push_back(std::make_unique<BoundedRun>(program, j));
    }
  }
}

void FStageTable::advance_to_stage(std::uint64_t s) {
  const std::uint64_t width = max_index_ + 1;
  while (stage_ < s) {
    ++stage_;
    for (std::uint64_t i = 0; i <= max_index_; ++i) {
      for (std::uint64_t j = 0; j <= max_index_; ++j) {
        auto& cell = runs_[i * width + j];
        if (!cell) continue;
        cell->advance_to(stage_);
        if (!cell->halted()) continue;
        std::uint64_t value = cell->value();
        std::uint64_t eligible = std::max(cell->steps_done(), value + 1);
        std::uint64_t box = std::max(i, j);
        if (eligible <= stage_) {
          box_max_[box] = std::max(box_max_[box], value);
        } else {
          pending_.emplace(eligible, PendingValue{box, value});
        }
        cell.reset();
      }
    }
    for (auto it = pending_.begin(); it != pending_.end() && it->first <= stage_;) {
      box_max_[it->second.box] = std::max(box_max_[it->second.box], it->second.value);
      it = pending_.erase(it);
    }
    std::uint64_t running = 0;
    for (std::uint64_t k = 0; k <= max_index_; ++k) {
      running = std::max(running, box_max_[k]);
      prefix_max_[k] = running;
    }
  }
}

std::uint64_t FStageTable::value(std::uint64_t e) const {
  if (e > max_index_) throw std::out_of_range("FStageTable::value: index beyond the table");
  return prefix_max_[e];
}

Interval IntervalPartition::interval(std::uint64_t idx) const {
  if (idx < prefix.size()) return prefix[idx];
  std::uint64_t x = tail_base + (idx - prefix.size());
  return Interval{x, x};
}

std::uint64_t IntervalPartition::index_of(std::uint64_t x) const {
  if (x >= tail_base) return prefix.size() + (x - tail_base);
  auto it = std::upper_bound(prefix.begin(), prefix.end(), x,
                             [](std::uint64_t v, const Interval& iv) { return v < iv.lo; });
  return static_cast<std::uint64_t>(it - prefix.begin()) - 1;
}

bool IntervalPartition::same_interval(std::uint64_t x, std::uint64_t y) const {
  return index_of(x) == index_of(y);
}

AllhighStep allhigh_step(const IntervalPartition& state, std::uint64_t stage,
                         const std::function<std::uint64_t(std::uint64_t)>& f_at_stage) {
  if (stage == 0) throw std::invalid_argument("allhigh_step: stages are numbered from 1");
  for (std::uint64_t e = 0; e < stage; ++e) {
    Interval cur = state.interval(e);
    std::uint64_t f = f_at_stage(e);
    if (f <= cur.hi) continue;

    AllhighStep out;
    out.state.stage = stage;
    out.state.prefix.reserve(e + 1);
    for (std::uint64_t k = 0; k < e; ++k) out.state.prefix.push_back(state.interval(k));
    out.state.prefix.push_back(Interval{cur.lo, stage - 1});
    out.state.tail_base = stage;
    out.action = AllhighAction{stage, e, f, cur.hi, stage - 1};
    return out;
  }
  AllhighStep out;
  out.state = state;
  out.state.stage = stage;
  return out;
}

namespace {

class RecordedPartitionNode : public CeerNode {
 public:
  explicit RecordedPartitionNode(std::shared_ptr<const std::vector<IntervalPartition>> history)
      : history_(std::move(history)) {}
  bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const override {
    const auto& h = *history_;
    const IntervalPartition& p = h[std::min<std::uint64_t>(s, h.size() - 1)];
    return p.same_interval(x, y);
  }

 private:
  std::shared_ptr<const std::vector<IntervalPartition>> history_;
};

}  // namespace

AllhighRun allhigh_run(std::uint64_t stages) {
  FStageTable table(stages);
  auto history = std::make_shared<std::vector<IntervalPartition>>();
  history->push_back(IntervalPartition{});  // stage 0: all singletons
  std::vector<AllhighAction> actions;

  for (std::uint64_t t = 1; t <= stages; ++t) {
    table.advance_to_stage(t);
    AllhighStep step = allhigh_step(history->back(), t,
                                    [&](std::uint64_t e) { return table.value(e); });
    if (step.action) actions.push_back(*step.action);
    history->push_back(std::move(step.state));
  }

  std::vector<std::uint64_t> final_f(stages + 1, 0);
  for (std::uint64_t e = 0; e <= stages; ++e) final_f[e] = table.value(e);

  AllhighRun run{
      *history,
      std::move(actions),
      std::move(final_f),
      0,
      StagedCeer(std::make_shared<RecordedPartitionNode>(history), std::nullopt),
  };
  run.quiescent_since = run.actions.empty() ? 0 : run.actions.back().stage + 1;
  return run;
}

WeakArrayStep weakarray_step(const ArrayState& state, const StagedCeer& r, std::uint64_t stage) {
  if (stage == 0) throw std::invalid_argument("weakarray_step: stages are numbered from 1");
  const std::uint64_t rs = stage - 1;  // classes are read off the previous stage

  auto covered_by_earlier = [&](std::uint64_t y, std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) {
      for (std::uint64_t x : state.sets[i]) {
        if (r.decide_at(rs, y, x)) return true;
      }
    }
    return false;
  };

  std::uint64_t n = state.sets.size();
  for (std::uint64_t cand = 0; cand < state.sets.size(); ++cand) {
    bool covered = true;
    for (std::uint64_t y : state.sets[cand]) {
      if (!covered_by_earlier(y, cand)) {
        covered = false;
        break;
      }
    }
    if (covered) {
      n = cand;
      break;
    }
  }

  std::set<std::uint64_t> support;
  for (const auto& set : state.sets) support.insert(set.begin(), set.end());
  std::uint64_t fresh = 0;
  while (support.count(fresh)) ++fresh;

  WeakArrayStep out{state, PickAction{stage, n, fresh}};
  out.state.stage = stage;
  if (n == out.state.sets.size()) out.state.sets.emplace_back();
  auto& row = out.state.sets[n];
  row.insert(std::lower_bound(row.begin(), row.end(), fresh), fresh);
  return out;
}

WeakArrayRun weakarray_run(const StagedCeer& r, std::uint64_t stages) {
  ArrayState state;
  std::vector<PickAction> picks;
  for (std::uint64_t t = 1; t <= stages; ++t) {
    WeakArrayStep step = weakarray_step(state, r, t);
    picks.push_back(step.pick);
    state = std::move(step.state);
  }

  WeakArrayRun run{state, std::move(picks), {}, TransversalSample{{}, stages}};
  for (std::uint64_t n = 0; n < state.sets.size(); ++n) {
    std::optional<std::uint64_t> least_residue;
    for (std::uint64_t y : state.sets[n]) {
      bool covered = false;
      for (std::uint64_t m = 0; m < n && !covered; ++m) {
        for (std::uint64_t x : state.sets[m]) {
          if (r.decide_at(stages, y, x)) {
            covered = true;
            break;
          }
        }
      }
      if (!covered) {
        least_residue = least_residue ? std::min(*least_residue, y) : y;
      }
    }
    if (least_residue) {
      run.stabilized.push_back(n);
      run.sample.elements.push_back(*least_residue);
    }
  }
  std::sort(run.sample.elements.begin(), run.sample.elements.end());
  return run;
}

namespace {

bool served_index(const SimpleSetState& state, std::uint64_t i) {
  for (const ServedWord& m : state.members) {
    if (m.index == i) return true;
  }
  return false;
}

}  // namespace

SimpleSetState postsimple_step(const SimpleSetState& state, std::uint64_t stage) {
  if (stage == 0) throw std::invalid_argument("postsimple_step: stages are numbered from 1");
  SimpleSetState out = state;
  out.stage = stage;
  for (std::uint64_t i = 0; i < stage; ++i) {
    if (i + 5 > 63 || served_index(state, i)) continue;
    std::uint64_t floor_code = first_code_of_length(i + 5);
    if (floor_code >= stage) continue;
    Program p = decode_program(i);
    bool previously_met = false;
    for (std::uint64_t x = floor_code; x < stage - 1 && !previously_met; ++x) {
      if (phi_stage(p, x, stage - 1)) previously_met = true;
    }
    if (previously_met) continue;
    for (std::uint64_t x = floor_code; x < stage; ++x) {
      if (phi_stage(p, x, stage)) {
        out.members.push_back(ServedWord{i, word_decode(x), stage});
        break;
      }
    }
  }
  return out;
}

void PostsimpleRun::run_to(std::uint64_t stage) {
  while (state_.stage < stage) {
    std::uint64_t t = state_.stage + 1;
    state_.stage = t;
    for (std::uint64_t i = 0; i < t; ++i) {
      if (i + 5 > 63 || served_index(state_, i)) continue;
      std::uint64_t floor_code = first_code_of_length(i + 5);
      if (floor_code >= t) continue;
      auto it = caches_.find(i);
      if (it == caches_.end()) it = caches_.try_emplace(i, decode_program(i)).first;
      // An unserved index has never met its length floor before, so the first
      // member found now is the serve.
      for (std::uint64_t x = floor_code; x < t; ++x) {
        if (it->second.member_at(x, t)) {
          state_.members.push_back(ServedWord{i, word_decode(x), t});
          break;
        }
      }
    }
  }
}

SimpleSetState postsimple_run(std::uint64_t stages) {
  PostsimpleRun run;
  run.run_to(stages);
  return run.state();
}

bool subword_closure_member(std::span<const Word> z, const Word& w) {
  for (const Word& zw : z) {
    if (w.str().find(zw.str()) != std::string::npos) return true;
  }
  return false;
}

namespace {

// Forbidden-substring automaton over {a,b}: trie of the banned words with
// suffix links; accepting states absorb.
struct BannedWordAutomaton {
  struct Node {
    std::array<std::uint32_t, 2> next{0, 0};
    std::uint32_t fail = 0;
    bool accept = false;
  };
  std::vector<Node> nodes;

  explicit BannedWordAutomaton(std::span<const Word> z) {
    nodes.emplace_back();
    for (const Word& w : z) {
      std::uint32_t at = 0;
      for (char c : w.str()) {
        std::uint32_t slot = (c == 'b') ? 1 : 0;
        if (nodes[at].next[slot] == 0) {
          nodes.emplace_back();
          nodes[at].next[slot] = static_cast<std::uint32_t>(nodes.size() - 1);
        }
        at = nodes[at].next[slot];
      }
      nodes[at].accept = true;
    }
    std::deque<std::uint32_t> queue;
    for (std::uint32_t c = 0; c < 2; ++c) {
      std::uint32_t v = nodes[0].next[c];
      if (v != 0) queue.push_back(v);
    }
    while (!queue.empty()) {
      std::uint32_t u = queue.front();
      queue.pop_front();
      for (std::uint32_t c = 0; c < 2; ++c) {
        std::uint32_t v = nodes[u].next[c];
        if (v == 0) {
          nodes[u].next[c] = nodes[nodes[u].fail].next[c];
        } else {
          nodes[v].fail = nodes[nodes[u].fail].next[c];
          nodes[v].accept = nodes[v].accept || nodes[nodes[v].fail].accept;
          queue.push_back(v);
        }
      }
    }
  }
};

}  // namespace

std::vector<std::uint64_t> avoidance_census(std::span<const Word> z, std::uint64_t max_len) {
  if (max_len > 62) throw std::out_of_range("avoidance_census: max_len must be <= 62");
  BannedWordAutomaton automaton(z);
  const std::size_t n = automaton.nodes.size();
  std::vector<std::uint64_t> counts(max_len + 1, 0);
  std::vector<std::uint64_t> cur(n, 0), next(n, 0);
  cur[0] = 1;
  counts[0] = 1;
  for (std::uint64_t len = 1; len <= max_len; ++len) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t q = 0; q < n; ++q) {
      if (cur[q] == 0) continue;
      for (std::uint32_t c = 0; c < 2; ++c) {
        std::uint32_t to = automaton.nodes[q].next[c];
        if (!automaton.nodes[to].accept) next[to] += cur[q];
      }
    }
    std::swap(cur, next);
    std::uint64_t total = 0;
    for (std::uint64_t v : cur) total += v;
    counts[len] = total;
  }
  return counts;
}

AlgebraPresentation parse_algebra(std::string_view text) {
  std::vector<AlgebraOp> ops;
  std::vector<std::uint64_t> generators;
  std::optional<CeerSpec> wp_spec;
  std::uint64_t budget = 1'000'000;
  bool saw_generators = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                    : eol - pos));
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);

    std::istringstream in(line);
    std::string head;
    if (in >> head) {
      if (head == "generators:") {
        saw_generators = true;
        std::uint64_t g;
        while (in >> g) generators.push_back(g);
      } else if (head == "op") {
        AlgebraOp op;
        bool have_arity = false, have_program = false;
        std::string field;
        while (in >> field) {
          if (field.rfind("arity=", 0) == 0) {
            op.arity = std::stoull(field.substr(6));
            have_arity = true;
          } else if (field.rfind("program=", 0) == 0) {
            op.program = decode_program(std::stoull(field.substr(8)));
            have_program = true;
          } else {
            throw parse_error("unknown op field '" + field + "'", line_no, 1);
          }
        }
        if (!have_arity || !have_program) {
          throw parse_error("op line needs arity= and program=", line_no, 1);
        }
        if (op.arity == 0) throw parse_error("op arity must be >= 1", line_no, 1);
        ops.push_back(std::move(op));
      } else if (head == "budget:") {
        if (!(in >> budget)) throw parse_error("budget: needs a natural", line_no, 1);
      } else if (head == "wp:") {
        std::string rest;
        std::getline(in, rest);
        try {
          wp_spec = parse_spec(rest);
        } catch (const parse_error& e) {
          throw parse_error(std::string("bad wp spec: ") + e.what(), line_no, 1);
        }
      } else {
        throw parse_error("unknown algebra line '" + head + "'", line_no, 1);
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }

  if (!saw_generators || generators.empty()) {
    throw parse_error("algebra needs a nonempty generators: line", line_no, 1);
  }
  if (!wp_spec) throw parse_error("algebra needs a wp: line", line_no, 1);
  return AlgebraPresentation{std::move(ops), std::move(generators), build(*wp_spec), budget};
}

namespace {

std::uint64_t encode_tuple(std::span<const std::uint64_t> xs) {
  std::uint64_t acc = xs[0];
  for (std::size_t k = 1; k < xs.size(); ++k) acc = cantor_pair(acc, xs[k]);
  return acc;
}

}  // namespace

KkExtraction kk_extract(const AlgebraPresentation& a, std::uint64_t depth, std::uint64_t s) {
  if (a.generators.empty()) throw std::invalid_argument("kk_extract: no generators");
  for (const AlgebraOp& op : a.ops) {
    if (op.arity == 0) throw std::invalid_argument("kk_extract: operations must have arity >= 1");
  }

  std::vector<std::uint64_t> level(a.generators.begin(), a.generators.end());
  std::sort(level.begin(), level.end());
  level.erase(std::unique(level.begin(), level.end()), level.end());

  KkExtraction out;
  out.levels.push_back(level);
  out.sample.certified_stage = s;

  for (std::uint64_t i = 0; i < depth; ++i) {
    std::set<std::uint64_t> next(level.begin(), level.end());
    for (const AlgebraOp& op : a.ops) {
      std::vector<std::size_t> odo(op.arity, 0);
      std::vector<std::uint64_t> args(op.arity, 0);
      while (true) {
        for (std::size_t k = 0; k < op.arity; ++k) args[k] = level[odo[k]];
        RunOutcome res = run_bounded(op.program, encode_tuple(args), a.op_step_budget);
        if (!res.halted) {
          std::ostringstream msg;
          msg << "algebra operation (program " << op.program.index << ") exceeded "
              << a.op_step_budget << " steps on a level-" << i << " tuple";
          throw budget_error(msg.str());
        }
        next.insert(res.value);
        std::size_t k = 0;
        while (k < op.arity && ++odo[k] == level.size()) odo[k++] = 0;
        if (k == op.arity) break;
      }
    }

    std::vector<std::uint64_t> next_level(next.begin(), next.end());
    out.levels.push_back(next_level);
    out.majorizer.push_back(next_level.back());

    std::optional<std::uint64_t> extracted;
    for (std::uint64_t y : next_level) {
      bool free_of_level = true;
      for (std::uint64_t z : level) {
        if (a.word_problem.decide_at(s, y, z)) {
          free_of_level = false;
          break;
        }
      }
      if (free_of_level) {
        extracted = y;
        break;
      }
    }
    if (!extracted) {
      out.stalled_level = i;
      break;
    }
    out.sample.elements.push_back(*extracted);
    level = std::move(next_level);
  }

  std::sort(out.sample.elements.begin(), out.sample.elements.end());
  return out;
}

}  // namespace ceerlab
