#ifndef CEERLAB_CONSTRUCTIONS_HPP
#define CEERLAB_CONSTRUCTIONS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/transversal.hpp"
#include "ceerlab/words.hpp"

namespace ceerlab {

// f_stage(e, s) = max({0} and every value phi_stage(i, j, s) with i, j <= e).
// Nondecreasing in both arguments; always < s for s >= 1.
std::uint64_t f_stage(std::uint64_t e, std::uint64_t s);

// Incremental evaluator of f_stage over all e <= max_index, advancing one
// stage at a time; equals the pure definition at every (e, stage()).
class FStageTable {
 public:
  explicit FStageTable(std::uint64_t max_index);
  void advance_to_stage(std::uint64_t s);
  std::uint64_t stage() const { return stage_; }
  std::uint64_t value(std::uint64_t e) const;  // f_stage(e, stage())

 private:
  struct PendingValue {
    std::uint64_t box;  // max(i, j)
    std::uint64_t value;
  };
  std::uint64_t max_index_;
  std::uint64_t stage_ = 0;
  std::vector<std::unique_ptr<BoundedRun>> runs_;     // row-major (i, j), dropped once settled
  std::multimap<std::uint64_t, PendingValue> pending_;  // eligible stage -> value
  std::vector<std::uint64_t> box_max_;               // best value with max(i,j) == k, active
  std::vector<std::uint64_t> prefix_max_;            // f values, rebuilt per stage
};

// Partition of omega into consecutive intervals: an explicit finite prefix
// starting at 0, then singletons. At stage s every x >= s is a singleton.
struct Interval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  bool operator==(const Interval&) const = default;
};

struct IntervalPartition {
  std::vector<Interval> prefix;  // consecutive, prefix[0].lo == 0 when nonempty
  std::uint64_t tail_base = 0;   // singletons {tail_base}, {tail_base+1}, ...
  std::uint64_t stage = 0;

  Interval interval(std::uint64_t idx) const;
  std::uint64_t index_of(std::uint64_t x) const;
  bool same_interval(std::uint64_t x, std::uint64_t y) const;
};

struct AllhighAction {
  std::uint64_t stage = 0;
  std::uint64_t e = 0;
  std::uint64_t f_value = 0;
  std::uint64_t hi_before = 0;
  std::uint64_t hi_after = 0;
};

struct AllhighStep {
  IntervalPartition state;
  std::optional<AllhighAction> action;
};

// One stage of the interval collapse: the least e < stage whose f value
// exceeds max(I_e) acts; its interval swallows everything up to stage-1 and
// the later intervals restart as fresh singletons.
AllhighStep allhigh_step(const IntervalPartition& state, std::uint64_t stage,
                         const std::function<std::uint64_t(std::uint64_t)>& f_at_stage);

struct AllhighRun {
  std::vector<IntervalPartition> history;  // index = stage, 0..S
  std::vector<AllhighAction> actions;
  std::vector<std::uint64_t> final_f;      // f_stage(e, S) for e <= S
  std::uint64_t quiescent_since = 0;       // first stage after the last action
  StagedCeer ceer;                         // co-membership at recorded stages
};

AllhighRun allhigh_run(std::uint64_t stages);

// Uniformly c.e. array built against R: at each stage the least set already
// covered by the classes of the earlier sets grows by a fresh number.
struct PickAction {
  std::uint64_t stage = 0;
  std::uint64_t n = 0;
  std::uint64_t x = 0;
};

struct ArrayState {
  std::vector<std::vector<std::uint64_t>> sets;  // F_n, ascending, no empty rows
  std::uint64_t stage = 0;
};

struct WeakArrayStep {
  ArrayState state;
  PickAction pick;
};

WeakArrayStep weakarray_step(const ArrayState& state, const StagedCeer& r, std::uint64_t stage);

struct WeakArrayRun {
  ArrayState final_state;
  std::vector<PickAction> picks;
  std::vector<std::uint64_t> stabilized;  // n with F_n not covered by earlier classes at S
  TransversalSample sample;               // least residue of each stabilized set
};

WeakArrayRun weakarray_run(const StagedCeer& r, std::uint64_t stages);

// Z construction: index i (from stage i+1 on) is served the first time
// W_{i,s} acquires a word of length >= i+5; the least-code such word joins Z.
struct ServedWord {
  std::uint64_t index = 0;
  Word word;
  std::uint64_t stage = 0;
};

struct SimpleSetState {
  std::vector<ServedWord> members;  // serve order; one entry per served index
  std::uint64_t stage = 0;
};

// Pure one-stage update (recomputes the enumerations from scratch).
SimpleSetState postsimple_step(const SimpleSetState& state, std::uint64_t stage);

// Incremental runner; state sequence coincides with iterated postsimple_step.
class PostsimpleRun {
 public:
  void run_to(std::uint64_t stage);
  const SimpleSetState& state() const { return state_; }

 private:
  std::map<std::uint64_t, StageEntryCache> caches_;
  SimpleSetState state_;
};

SimpleSetState postsimple_run(std::uint64_t stages);

// Does some member of z occur in w as a contiguous subword?
bool subword_closure_member(std::span<const Word> z, const Word& w);

// counts[l] = number of length-l words over {a,b} containing no member of z,
// for l = 0..max_len (counts[0] = 1 for the empty word). max_len <= 62.
std::vector<std::uint64_t> avoidance_census(std::span<const Word> z, std::uint64_t max_len);

// Finitely generated algebra presented by total operation programs. An
// arity-k operation receives its arguments as a left-folded Cantor pair
// (k = 1 passes the argument untouched, k = 2 passes <x1,x2>, k = 3 passes
// <<x1,x2>,x3>, ...).
struct AlgebraOp {
  std::uint64_t arity = 1;
  Program program;
};

struct AlgebraPresentation {
  std::vector<AlgebraOp> ops;
  std::vector<std::uint64_t> generators;
  StagedCeer word_problem;
  std::uint64_t op_step_budget = 1'000'000;
};

// Parses the line-oriented algebra format:
//   generators: 0 1
//   op arity=1 program=1
//   budget: 100000        (optional)
//   wp: (mod 3)
AlgebraPresentation parse_algebra(std::string_view text);

struct KkExtraction {
  std::vector<std::vector<std::uint64_t>> levels;  // X_0 .. X_top, ascending sets
  TransversalSample sample;                        // extracted y_i, sorted ascending
  std::vector<std::uint64_t> majorizer;            // m(i) = max(X_{i+1})
  std::optional<std::uint64_t> stalled_level;      // set when X_{i+1} is covered by [X_i]
};

// Generate the subalgebra closure level by level; from each new level extract
// the least element not word-problem-related (at stage s) to the previous
// level, until depth levels are built or the subalgebra stalls. Operation
// divergence within the budget raises budget_error.
KkExtraction kk_extract(const AlgebraPresentation& a, std::uint64_t depth, std::uint64_t s);

}  // namespace ceerlab

#endif
