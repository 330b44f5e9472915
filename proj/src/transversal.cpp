#include "ceerlab/transversal.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ceerlab/errors.hpp"

namespace ceerlab {

TransversalSample principal_at(const StagedCeer& r, std::uint64_t s, std::uint64_t n) {
  TransversalSample out;
  out.certified_stage = s;
  for (std::uint64_t x = 0; x <= n; ++x) {
    bool least = true;
    for (std::uint64_t rep : out.elements) {
      if (r.decide_at(s, rep, x)) {
        least = false;
        break;
      }
    }
    if (least) out.elements.push_back(x);
  }
  return out;
}

std::uint64_t principal_function_at(const StagedCeer& r, std::uint64_t s, std::uint64_t k,
                                    std::uint64_t n) {
  TransversalSample sample = principal_at(r, s, n);
  if (k >= sample.elements.size()) {
    std::ostringstream msg;
    msg << "insufficient horizon: only " << sample.elements.size()
        << " stage-" << s << " classes meet [0, " << n << "], need index " << k;
    throw horizon_error(msg.str());
  }
  return sample.elements[k];
}

bool is_transversal_at(const StagedCeer& r, std::uint64_t s, std::span<const std::uint64_t> t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (t[i] == t[j] || r.decide_at(s, t[i], t[j])) return false;
    }
  }
  return true;
}

bool majorization_check(const StagedCeer& r, std::uint64_t s, const TransversalSample& t,
                        std::uint64_t n) {
  std::vector<std::uint64_t> sorted = t.elements;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.back() > n) {
    throw std::invalid_argument("majorization_check: sample exceeds the horizon");
  }
  if (!is_transversal_at(r, s, sorted)) {
    throw std::invalid_argument("majorization_check: sample is not certified at this stage");
  }
  TransversalSample principal = principal_at(r, s, n);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < principal.elements[i]) return false;
  }
  return true;
}

bool majorizer_check(const std::function<std::uint64_t(std::uint64_t)>& g, const StagedCeer& r,
                     std::uint64_t s, std::uint64_t k_max, std::uint64_t n) {
  TransversalSample principal = principal_at(r, s, n);
  if (principal.elements.size() <= k_max) {
    std::ostringstream msg;
    msg << "insufficient horizon: only " << principal.elements.size()
        << " stage-" << s << " classes meet [0, " << n << "], need index " << k_max;
    throw horizon_error(msg.str());
  }
  for (std::uint64_t i = 0; i <= k_max; ++i) {
    if (g(i) < principal.elements[i]) return false;
  }
  return true;
}

bool majorizer_check(const Program& g, const StagedCeer& r, std::uint64_t s, std::uint64_t k_max,
                     std::uint64_t n, std::uint64_t step_budget) {
  std::vector<std::uint64_t> divergent;
  std::vector<std::uint64_t> values(k_max + 1, 0);
  for (std::uint64_t i = 0; i <= k_max; ++i) {
    RunOutcome out = run_bounded(g, i, step_budget);
    if (!out.halted) {
      divergent.push_back(i);
    } else {
      values[i] = out.value;
    }
  }
  if (!divergent.empty()) {
    std::ostringstream msg;
    msg << "majorizer (program " << g.index << ") diverges within " << step_budget
        << " steps on " << divergent.size() << " input(s)";
    throw partial_function_error(msg.str(), std::move(divergent));
  }
  return majorizer_check([&](std::uint64_t i) { return values[i]; }, r, s, k_max, n);
}

bool array_intersection_check(const StrongArray& a, std::span<const std::uint64_t> t) {
  std::set<std::uint64_t> member(t.begin(), t.end());
  for (const auto& set : a.sets) {
    bool meets = false;
    for (std::uint64_t x : set) {
      if (member.count(x)) {
        meets = true;
        break;
      }
    }
    if (!meets) return false;
  }
  return true;
}

}  // namespace ceerlab
