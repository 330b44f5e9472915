#ifndef CEERLAB_SPEC_TEXT_HPP
#define CEERLAB_SPEC_TEXT_HPP

#include <string>
#include <string_view>

#include "ceerlab/ceer.hpp"

namespace ceerlab {

// Textual spec expressions:
//   (id)  (idn 3)  (mod 5)  (intervals 2 2 3)  (uni {0,1,2})  (uni-ce 17)
//   (pairs 23)  (cyl E)  (join E F)  (restrict E 12)
// Whitespace-insensitive; parse failures raise parse_error with line/column.
CeerSpec parse_spec(std::string_view text);

// Canonical rendering; parse_spec(print_spec(s)) == s for every valid s.
std::string print_spec(const CeerSpec& spec);

}  // namespace ceerlab

#endif
