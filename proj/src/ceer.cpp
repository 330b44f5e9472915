#include "ceerlab/ceer.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ceerlab/errors.hpp"
#include "ceerlab/pairing.hpp"

namespace ceerlab {

CeerSpec CeerSpec::id_omega_spec() { return CeerSpec{Kind::id_omega, 0, {}, {}}; }
CeerSpec CeerSpec::id_n_spec(std::uint64_t n) { return CeerSpec{Kind::id_n, n, {}, {}}; }
CeerSpec CeerSpec::mod_spec(std::uint64_t k) { return CeerSpec{Kind::mod, k, {}, {}}; }
CeerSpec CeerSpec::intervals_spec(std::vector<std::uint64_t> sizes) {
  return CeerSpec{Kind::intervals, 0, std::move(sizes), {}};
}
CeerSpec CeerSpec::uni_set_spec(std::vector<std::uint64_t> elements) {
  return CeerSpec{Kind::uni_set, 0, std::move(elements), {}};
}
CeerSpec CeerSpec::uni_ce_spec(std::uint64_t e) { return CeerSpec{Kind::uni_ce, e, {}, {}}; }
CeerSpec CeerSpec::from_pairs_spec(std::uint64_t e) {
  return CeerSpec{Kind::from_pairs, e, {}, {}};
}
CeerSpec CeerSpec::cylindrify_spec(CeerSpec inner) {
  CeerSpec s{Kind::cylindrify, 0, {}, {}};
  s.children.push_back(std::move(inner));
  return s;
}
CeerSpec CeerSpec::uniform_join_spec(CeerSpec left, CeerSpec right) {
  CeerSpec s{Kind::uniform_join, 0, {}, {}};
  s.children.push_back(std::move(left));
  s.children.push_back(std::move(right));
  return s;
}
CeerSpec CeerSpec::restrict_spec(CeerSpec inner, std::uint64_t pi_index) {
  CeerSpec s{Kind::restrict_to, pi_index, {}, {}};
  s.children.push_back(std::move(inner));
  return s;
}

void validate(const CeerSpec& spec) {
  auto want_children = [&](std::size_t n) {
    if (spec.children.size() != n) throw std::invalid_argument("spec node has wrong arity");
  };
  switch (spec.kind) {
    case CeerSpec::Kind::id_omega:
      want_children(0);
      break;
    case CeerSpec::Kind::id_n:
      want_children(0);
      if (spec.param == 0) throw std::invalid_argument("idn requires n >= 1");
      break;
    case CeerSpec::Kind::mod:
      want_children(0);
      if (spec.param == 0) throw std::invalid_argument("mod requires k >= 1");
      break;
    case CeerSpec::Kind::intervals:
      want_children(0);
      if (spec.numbers.empty()) throw std::invalid_argument("intervals requires at least one size");
      for (std::uint64_t s : spec.numbers) {
        if (s == 0) throw std::invalid_argument("intervals sizes must be >= 1");
      }
      break;
    case CeerSpec::Kind::uni_set: {
      want_children(0);
      std::set<std::uint64_t> uniq(spec.numbers.begin(), spec.numbers.end());
      if (uniq.size() != spec.numbers.size()) {
        throw std::invalid_argument("uni set elements must be distinct");
      }
      break;
    }
    case CeerSpec::Kind::uni_ce:
    case CeerSpec::Kind::from_pairs:
      want_children(0);
      break;
    case CeerSpec::Kind::cylindrify:
    case CeerSpec::Kind::restrict_to:
      want_children(1);
      validate(spec.children[0]);
      break;
    case CeerSpec::Kind::uniform_join:
      want_children(2);
      validate(spec.children[0]);
      validate(spec.children[1]);
      break;
  }
}

namespace {

// Canonical staging of a decidable relation: related at s iff equal, or both
// points below s and mathematically related.
class DecidableLeaf : public CeerNode {
 public:
  bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const final {
    if (x == y) return true;
    return x < s && y < s && related(x, y);
  }
  virtual bool related(std::uint64_t x, std::uint64_t y) const = 0;
};

class IdOmegaNode : public CeerNode {
 public:
  bool at(std::uint64_t, std::uint64_t x, std::uint64_t y) const override { return x == y; }
};

class IdNNode : public DecidableLeaf {
 public:
  explicit IdNNode(std::uint64_t n) : n_(n) {}
  bool related(std::uint64_t x, std::uint64_t y) const override {
    return std::min(x, n_ - 1) == std::min(y, n_ - 1);
  }

 private:
  std::uint64_t n_;
};

class ModNode : public DecidableLeaf {
 public:
  explicit ModNode(std::uint64_t k) : k_(k) {}
  bool related(std::uint64_t x, std::uint64_t y) const override { return x % k_ == y % k_; }

 private:
  std::uint64_t k_;
};

class IntervalsNode : public DecidableLeaf {
 public:
  explicit IntervalsNode(const std::vector<std::uint64_t>& sizes) {
    std::uint64_t at = 0;
    for (std::uint64_t s : sizes) {
      starts_.push_back(at);
      at += s;
    }
    total_ = at;
  }
  bool related(std::uint64_t x, std::uint64_t y) const override {
    return block_of(x) == block_of(y);
  }
  std::uint64_t block_of(std::uint64_t x) const {
    if (x >= total_) return starts_.size() + (x - total_);
    auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
    return static_cast<std::uint64_t>(it - starts_.begin()) - 1;
  }

 private:
  std::vector<std::uint64_t> starts_;
  std::uint64_t total_ = 0;
};

class UniSetNode : public DecidableLeaf {
 public:
  explicit UniSetNode(const std::vector<std::uint64_t>& elements)
      : elements_(elements.begin(), elements.end()) {}
  bool related(std::uint64_t x, std::uint64_t y) const override {
    return elements_.count(x) != 0 && elements_.count(y) != 0;
  }

 private:
  std::set<std::uint64_t> elements_;
};

class UniCeNode : public CeerNode {
 public:
  explicit UniCeNode(std::uint64_t e) : cache_(decode_program(e)) {}
  bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const override {
    if (x == y) return true;
    return cache_.member_at(x, s) && cache_.member_at(y, s);
  }

 private:
  StageEntryCache cache_;
};

// Disjoint-set forest over [0, n).
class UnionFind {
 public:
  explicit UnionFind(std::uint64_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint64_t{0});
  }
  std::uint64_t find(std::uint64_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint64_t a, std::uint64_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::uint64_t> parent_;
};

class FromPairsNode : public CeerNode {
 public:
  explicit FromPairsNode(std::uint64_t e) : cache_(decode_program(e)) {}

  bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const override {
    if (x == y) return true;
    if (x >= s || y >= s) return false;  // enumerated pairs have components < s
    std::lock_guard<std::mutex> lock(mu_);
    auto it = closures_.find(s);
    if (it == closures_.end()) {
      UnionFind uf(s);
      for (std::uint64_t n = 0; n < s; ++n) {
        if (cache_.member_at(n, s)) {
          auto [a, b] = cantor_unpair(n);
          uf.unite(a, b);
        }
      }
      it = closures_.emplace(s, std::move(uf)).first;
    }
    return it->second.find(x) == it->second.find(y);
  }

 private:
  StageEntryCache cache_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, UnionFind> closures_;
};

class CylindrifyNode : public CeerNode {
 public:
  explicit CylindrifyNode(std::shared_ptr<const CeerNode> inner) : inner_(std::move(inner)) {}
  bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const override {
    if (x == y) return true;
    auto [i, xf] = cantor_unpair(x);
    auto [j, yf] = cantor_unpair(y);
    return xf < s && yf < s && inner_->at(s, i, j);
  }
  void collect_diagnostics(std::vector<std::string>& out) const override {
    inner_->collect_diagnostics(out);
  }

 private:
  std::shared_ptr<const CeerNode> inner_;
};

class UniformJoinNode : public CeerNode {
 public:
  UniformJoinNode(std::shared_ptr<const CeerNode> left, std::shared_ptr<const CeerNode> right)
      : left_(std::move(left)), right_(std::move(right)) {}
  bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const override {
    if (x == y) return true;
    if (x % 2 != y % 2) return false;
    const CeerNode& side = (x % 2 == 0) ? *left_ : *right_;
    return side.at(s, x / 2, y / 2);
  }
  void collect_diagnostics(std::vector<std::string>& out) const override {
    left_->collect_diagnostics(out);
    right_->collect_diagnostics(out);
  }

 private:
  std::shared_ptr<const CeerNode> left_;
  std::shared_ptr<const CeerNode> right_;
};

class RestrictNode : public CeerNode {
 public:
  RestrictNode(std::shared_ptr<const CeerNode> inner, Program pi)
      : inner_(std::move(inner)), pi_(std::move(pi)), cache_(pi_) {}

  bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const override {
    if (x == y) return true;
    auto vx = lookup(x, s);
    auto vy = lookup(y, s);
    return vx && vy && inner_->at(s, *vx, *vy);
  }

  void collect_diagnostics(std::vector<std::string>& out) const override {
    inner_->collect_diagnostics(out);
    std::lock_guard<std::mutex> lock(mu_);
    for (std::uint64_t n : unconverged_) {
      std::ostringstream msg;
      msg << "restrict: pi (program " << pi_.index << ") has not converged on input " << n
          << " within " << kDiagStage << " steps; point stays discrete";
      out.push_back(msg.str());
    }
  }

 private:
  std::optional<std::uint64_t> lookup(std::uint64_t n, std::uint64_t s) const {
    auto v = cache_.value_at(n, s);
    if (!v && s >= kDiagStage && cache_.explored(n) >= kDiagStage) {
      std::lock_guard<std::mutex> lock(mu_);
      unconverged_.insert(n);
    }
    return v;
  }

  static constexpr std::uint64_t kDiagStage = 10'000;

  std::shared_ptr<const CeerNode> inner_;
  Program pi_;
  StageEntryCache cache_;
  mutable std::mutex mu_;
  mutable std::set<std::uint64_t> unconverged_;
};

std::shared_ptr<const CeerNode> build_node(const CeerSpec& spec) {
  using Kind = CeerSpec::Kind;
  switch (spec.kind) {
    case Kind::id_omega: return std::make_shared<IdOmegaNode>();
    case Kind::id_n: return std::make_shared<IdNNode>(spec.param);
    case Kind::mod: return std::make_shared<ModNode>(spec.param);
    case Kind::intervals: return std::make_shared<IntervalsNode>(spec.numbers);
    case Kind::uni_set: return std::make_shared<UniSetNode>(spec.numbers);
    case Kind::uni_ce: return std::make_shared<UniCeNode>(spec.param);
    case Kind::from_pairs: return std::make_shared<FromPairsNode>(spec.param);
    case Kind::cylindrify: return std::make_shared<CylindrifyNode>(build_node(spec.children[0]));
    case Kind::uniform_join:
      return std::make_shared<UniformJoinNode>(build_node(spec.children[0]),
                                               build_node(spec.children[1]));
    case Kind::restrict_to:
      return std::make_shared<RestrictNode>(build_node(spec.children[0]),
                                            decode_program(spec.param));
  }
  throw std::logic_error("build_node: bad kind");
}

class WrapperNode : public CeerNode {  // shares an already-built evaluator
 public:
  explicit WrapperNode(const StagedCeer& c) : ceer_(c) {}
  bool at(std::uint64_t s, std::uint64_t x, std::uint64_t y) const override {
    return ceer_.decide_at(s, x, y);
  }
  void collect_diagnostics(std::vector<std::string>& out) const override {
    for (auto& d : ceer_.diagnostics()) out.push_back(d);
  }

 private:
  StagedCeer ceer_;
};

std::optional<CeerSpec> compose_descriptor(CeerSpec::Kind kind,
                                           const std::optional<CeerSpec>& a,
                                           const std::optional<CeerSpec>& b,
                                           std::uint64_t param) {
  if (!a || (kind == CeerSpec::Kind::uniform_join && !b)) return std::nullopt;
  switch (kind) {
    case CeerSpec::Kind::cylindrify: return CeerSpec::cylindrify_spec(*a);
    case CeerSpec::Kind::uniform_join: return CeerSpec::uniform_join_spec(*a, *b);
    case CeerSpec::Kind::restrict_to: return CeerSpec::restrict_spec(*a, param);
    default: return std::nullopt;
  }
}

}  // namespace

std::vector<std::string> StagedCeer::diagnostics() const {
  std::vector<std::string> out;
  node_->collect_diagnostics(out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StagedCeer build(const CeerSpec& spec) {
  validate(spec);
  return StagedCeer(build_node(spec), spec);
}

StagedCeer cylindrify(const StagedCeer& r) {
  auto node = std::make_shared<CylindrifyNode>(std::make_shared<WrapperNode>(r));
  return StagedCeer(std::move(node),
                    compose_descriptor(CeerSpec::Kind::cylindrify, r.descriptor(), {}, 0));
}

StagedCeer uniform_join(const StagedCeer& r, const StagedCeer& s) {
  auto node = std::make_shared<UniformJoinNode>(std::make_shared<WrapperNode>(r),
                                                std::make_shared<WrapperNode>(s));
  return StagedCeer(std::move(node), compose_descriptor(CeerSpec::Kind::uniform_join,
                                                        r.descriptor(), s.descriptor(), 0));
}

StagedCeer restrict_via(const StagedCeer& r, const Program& pi) {
  auto node = std::make_shared<RestrictNode>(std::make_shared<WrapperNode>(r), pi);
  return StagedCeer(std::move(node), compose_descriptor(CeerSpec::Kind::restrict_to,
                                                        r.descriptor(), {}, pi.index));
}

std::vector<std::vector<std::uint64_t>> classes_at(const StagedCeer& r, std::uint64_t s,
                                                   std::uint64_t n) {
  std::vector<std::vector<std::uint64_t>> blocks;
  std::vector<std::uint64_t> block_of(n + 1);
  for (std::uint64_t x = 0; x <= n; ++x) {
    bool placed = false;
    for (std::size_t b = blocks.size(); b-- > 0;) {
      if (r.decide_at(s, blocks[b][0], x)) {
        blocks[b].push_back(x);
        block_of[x] = b;
        placed = true;
        break;
      }
    }
    if (!placed) {
      block_of[x] = blocks.size();
      blocks.push_back({x});
    }
  }
  return blocks;
}

void validate(const StrongArray& a) {
  std::set<std::uint64_t> seen;
  for (const auto& set : a.sets) {
    std::set<std::uint64_t> uniq(set.begin(), set.end());
    if (uniq.size() != set.size()) throw std::invalid_argument("strong array set has duplicates");
    for (std::uint64_t x : uniq) {
      if (!seen.insert(x).second) {
        throw std::invalid_argument("strong array sets must be pairwise disjoint");
      }
    }
  }
}

namespace {

std::vector<std::uint64_t> apply_total(const Program& f, std::span<const std::uint64_t> inputs,
                                       std::uint64_t step_budget, const char* role) {
  std::vector<std::uint64_t> divergent;
  std::vector<std::uint64_t> values(inputs.size(), 0);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    RunOutcome out = run_bounded(f, inputs[i], step_budget);
    if (!out.halted) {
      divergent.push_back(inputs[i]);
    } else {
      values[i] = out.value;
    }
  }
  if (!divergent.empty()) {
    std::ostringstream msg;
    msg << role << " (program " << f.index << ") diverges within " << step_budget << " steps on "
        << divergent.size() << " input(s)";
    throw partial_function_error(msg.str(), std::move(divergent));
  }
  return values;
}

}  // namespace

ReductionCheck check_reduction(const Program& f, const StagedCeer& r, const StagedCeer& s,
                               std::uint64_t n, std::uint64_t stage, std::uint64_t step_budget) {
  std::vector<std::uint64_t> domain(n + 1);
  std::iota(domain.begin(), domain.end(), std::uint64_t{0});
  std::vector<std::uint64_t> fx = apply_total(f, domain, step_budget, "reduction map");

  ReductionCheck out;
  out.stage = stage;
  out.horizon = n;
  // A positive fact at the requested stage obliges a positive fact on the
  // other side; the refuting probe runs at a stage that has seen its
  // arguments, else the below-stage gate would turn large images of true
  // reductions into spurious failures.
  auto probe = [](const StagedCeer& rel, std::uint64_t at, std::uint64_t a, std::uint64_t b) {
    return rel.decide_at(std::max({at, a + 1, b + 1}), a, b);
  };
  for (std::uint64_t x = 0; x <= n; ++x) {
    for (std::uint64_t y = 0; y <= n; ++y) {
      bool in_r = r.decide_at(stage, x, y);
      bool in_s = s.decide_at(stage, fx[x], fx[y]);
      if (in_r && !in_s && !probe(s, stage, fx[x], fx[y])) {
        out.consistent = false;
        out.x = x;
        out.y = y;
        out.side = WitnessSide::forward;
        return out;
      }
      if (in_s && !in_r && !probe(r, stage, x, y)) {
        out.consistent = false;
        out.x = x;
        out.y = y;
        out.side = WitnessSide::backward;
        return out;
      }
    }
  }
  return out;
}

StrongArray image_of_array_under_reduction(const Program& f, const StrongArray& a,
                                           std::uint64_t step_budget) {
  validate(a);
  std::vector<std::uint64_t> uni;
  for (const auto& set : a.sets) uni.insert(uni.end(), set.begin(), set.end());
  std::vector<std::uint64_t> values = apply_total(f, uni, step_budget, "reduction map");

  std::map<std::uint64_t, std::uint64_t> image_of;
  std::set<std::uint64_t> hit;
  for (std::size_t i = 0; i < uni.size(); ++i) {
    if (!hit.insert(values[i]).second) {
      throw std::invalid_argument("reduction map is not injective on the array union");
    }
    image_of[uni[i]] = values[i];
  }

  StrongArray out;
  out.sets.reserve(a.sets.size());
  for (const auto& set : a.sets) {
    std::vector<std::uint64_t> img;
    img.reserve(set.size());
    for (std::uint64_t x : set) img.push_back(image_of[x]);
    std::sort(img.begin(), img.end());
    out.sets.push_back(std::move(img));
  }
  return out;
}

}  // namespace ceerlab
