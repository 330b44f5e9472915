#ifndef CEERLAB_TRANSVERSAL_HPP
#define CEERLAB_TRANSVERSAL_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ceerlab/ceer.hpp"

namespace ceerlab {

// Finite set certified pairwise non-related at the recorded stage.
struct TransversalSample {
  std::vector<std::uint64_t> elements;  // ascending
  std::uint64_t certified_stage = 0;
};

// Least elements of the stage-s classes meeting [0, n], ascending. Antitone
// in s at fixed n: merging classes can only delete representatives.
TransversalSample principal_at(const StagedCeer& r, std::uint64_t s, std::uint64_t n);

// k-th principal element (0-indexed); throws horizon_error when fewer than
// k+1 classes meet [0, n] at stage s.
std::uint64_t principal_function_at(const StagedCeer& r, std::uint64_t s, std::uint64_t k,
                                    std::uint64_t n);

// Are the listed elements pairwise non-related at stage s?
bool is_transversal_at(const StagedCeer& r, std::uint64_t s, std::span<const std::uint64_t> t);

// Majorization: the k-th element of any stage-certified transversal sample
// dominates the k-th principal element. T must be certified at stage s and
// contained in [0, n].
bool majorization_check(const StagedCeer& r, std::uint64_t s, const TransversalSample& t,
                        std::uint64_t n);

// Does g dominate the principal function: g(i) >= p(i) for all i <= k_max?
// Throws horizon_error if the stage-s partition has too few classes in [0,n].
bool majorizer_check(const std::function<std::uint64_t(std::uint64_t)>& g, const StagedCeer& r,
                     std::uint64_t s, std::uint64_t k_max, std::uint64_t n);
// Program-backed variant; g must halt within step_budget on 0..k_max.
bool majorizer_check(const Program& g, const StagedCeer& r, std::uint64_t s, std::uint64_t k_max,
                     std::uint64_t n, std::uint64_t step_budget = 1'000'000);

// Does every set of the array meet T?
bool array_intersection_check(const StrongArray& a, std::span<const std::uint64_t> t);

}  // namespace ceerlab

#endif
