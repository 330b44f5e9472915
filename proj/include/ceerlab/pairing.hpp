#ifndef CEERLAB_PAIRING_HPP
#define CEERLAB_PAIRING_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace ceerlab {

// Cantor pairing <x,y> = (x+y)(x+y+1)/2 + y.  <0,0>=0, <1,0>=1, <0,1>=2.
inline std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) {
  unsigned __int128 s = static_cast<unsigned __int128>(x) + y;
  unsigned __int128 v = s * (s + 1) / 2 + y;
  if (v > UINT64_MAX) throw std::overflow_error("cantor_pair: value exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

inline std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n) {
  // Largest triangular number T(s) <= n, via integer sqrt of 8n+1.
  unsigned __int128 m = 8 * static_cast<unsigned __int128>(n) + 1;
  std::uint64_t r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(m)));
  while (static_cast<unsigned __int128>(r) * r > m) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= m) ++r;
  std::uint64_t s = (r - 1) / 2;
  std::uint64_t t = s * (s + 1) / 2;
  std::uint64_t y = n - t;
  std::uint64_t x = s - y;
  return {x, y};
}

}  // namespace ceerlab

#endif
