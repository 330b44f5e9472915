#ifndef CEERLAB_ERRORS_HPP
#define CEERLAB_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ceerlab {

// Not enough certified elements below the horizon to answer the query.
class horizon_error : public std::runtime_error {
 public:
  explicit horizon_error(const std::string& what) : std::runtime_error(what) {}
};

// A program that was required to be total failed to converge within its
// step budget on the listed inputs.
class partial_function_error : public std::runtime_error {
 public:
  partial_function_error(const std::string& what, std::vector<std::uint64_t> inputs)
      : std::runtime_error(what), divergent_inputs(std::move(inputs)) {}
  std::vector<std::uint64_t> divergent_inputs;
};

// A run-time budget (algebra operation steps, wall clock) was exhausted.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Text input (spec expression, assembly, algebra file) failed to parse.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line, std::size_t col)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(col)),
        line(line),
        col(col) {}
  std::size_t line;
  std::size_t col;
};

// A word over the two-letter alphabet was malformed (empty or bad symbol).
class word_error : public std::invalid_argument {
 public:
  explicit word_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ceerlab

#endif
