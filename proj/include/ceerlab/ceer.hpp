#ifndef CEERLAB_CEER_HPP
#define CEERLAB_CEER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ceerlab/machine.hpp"

namespace ceerlab {

// Description tree of a stage-approximated ceer.
//
// Leaves: id (identity on omega), idn n (exactly n classes), mod k,
// intervals s1..sk (consecutive finite blocks, then singletons), uni {..}
// (one class collapsing an explicit finite set), uni-ce e (one class
// collapsing W_e), pairs e (equivalence closure of the pairs coded in W_e).
// Nodes: cyl E, join E F, restrict E pi-index.
struct CeerSpec {
  enum class Kind : std::uint8_t {
    id_omega,
    id_n,
    mod,
    intervals,
    uni_set,
    uni_ce,
    from_pairs,
    cylindrify,
    uniform_join,
    restrict_to
  };

  Kind kind = Kind::id_omega;
  std::uint64_t param = 0;                // idn n / mod k / uni-ce e / pairs e / restrict pi
  std::vector<std::uint64_t> numbers;     // intervals sizes, uni elements
  std::vector<CeerSpec> children;

  bool operator==(const CeerSpec&) const = default;

  static CeerSpec id_omega_spec();
  static CeerSpec id_n_spec(std::uint64_t n);
  static CeerSpec mod_spec(std::uint64_t k);
  static CeerSpec intervals_spec(std::vector<std::uint64_t> sizes);
  static CeerSpec uni_set_spec(std::vector<std::uint64_t> elements);
  static CeerSpec uni_ce_spec(std::uint64_t e);
  static CeerSpec from_pairs_spec(std::uint64_t e);
  static CeerSpec cylindrify_spec(CeerSpec inner);
  static CeerSpec uniform_join_spec(CeerSpec left, CeerSpec right);
  static CeerSpec restrict_spec(CeerSpec inner, std::uint64_t pi_index);
};

// Throws std::invalid_argument on malformed trees (idn 0, mod 0, empty or
// zero interval sizes, wrong child counts).
void validate(const CeerSpec& spec);

// Stage evaluator extension point; implementations must be monotone in s,
// an equivalence relation at every stage, and the identity at stage 0.
class CeerNode {
 public:
  virtual ~CeerNode() = default;
  virtual bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const = 0;
  virtual void collect_diagnostics(std::vector<std::string>& out) const { (void)out; }
};

// A ceer presented by its uniformly computable stage approximations:
// decide_at(0,x,y) iff x == y, each stage is an equivalence relation,
// stages are monotone, and the ceer itself is the union over s.
class StagedCeer {
 public:
  StagedCeer(std::shared_ptr<const CeerNode> node, std::optional<CeerSpec> descriptor)
      : node_(std::move(node)), descriptor_(std::move(descriptor)) {}

  bool decide_at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const {
    return node_->at(s, x, y);
  }
  const std::optional<CeerSpec>& descriptor() const { return descriptor_; }
  std::vector<std::string> diagnostics() const;

 private:
  std::shared_ptr<const CeerNode> node_;
  std::optional<CeerSpec> descriptor_;
};

// Build the staged evaluator. Decidable leaves use the canonical
// approximation R_s = identity + (R restricted to [0,s)^2); uni-ce and pairs
// leaves approximate through W_{e,s}; restrict runs pi with lookahead s.
StagedCeer build(const CeerSpec& spec);

// cyl R: <i,x> ~ <j,y> once both fiber coordinates are below the stage and
// i ~_R j at that stage; every class is infinite in the limit.
StagedCeer cylindrify(const StagedCeer& r);

// R (+) S: evens carry R, odds carry S.
StagedCeer uniform_join(const StagedCeer& r, const StagedCeer& s);

// Restriction of R along the partial map computed by pi: x ~ y once both
// pi(x), pi(y) have converged within the stage lookahead and their values are
// R-related at that stage. Points whose pi never converges stay discrete.
StagedCeer restrict_via(const StagedCeer& r, const Program& pi);

// Partition of [0, n] at stage s; blocks ascending by least element.
std::vector<std::vector<std::uint64_t>> classes_at(const StagedCeer& r, std::uint64_t s,
                                                   std::uint64_t n);

// Finite list of finite, pairwise disjoint sets of naturals.
struct StrongArray {
  std::vector<std::vector<std::uint64_t>> sets;
};
// Throws std::invalid_argument unless the sets are pairwise disjoint.
void validate(const StrongArray& a);

enum class WitnessSide : std::uint8_t { forward, backward };

struct ReductionCheck {
  bool consistent = true;
  std::uint64_t x = 0;  // witness pair when inconsistent
  std::uint64_t y = 0;
  WitnessSide side = WitnessSide::forward;
  std::uint64_t stage = 0;    // stage the relations were compared at
  std::uint64_t horizon = 0;  // pairs checked on [0, horizon]^2
  // A consistent verdict only certifies agreement up to the stage: facts of
  // the form "never related" are semi-decidable and checked to `stage` only.
  bool stage_bounded = true;
};

// Two-sided bounded check that f is a reduction from R to S on [0, n]^2 at
// the given stage. f must halt within step_budget steps on every input <= n;
// otherwise partial_function_error lists the divergent inputs. The first
// failing pair in row-major order is reported: forward means x ~_R y but
// f(x), f(y) not yet S-related; backward means the converse.
ReductionCheck check_reduction(const Program& f, const StagedCeer& r, const StagedCeer& s,
                               std::uint64_t n, std::uint64_t stage,
                               std::uint64_t step_budget = 1'000'000);

// Image of a strong array under f, which must halt within step_budget on the
// union and be injective there (else std::invalid_argument).
StrongArray image_of_array_under_reduction(const Program& f, const StrongArray& a,
                                           std::uint64_t step_budget = 1'000'000);

}  // namespace ceerlab

#endif
