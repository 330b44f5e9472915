#include "ceerlab/words.hpp"

#include <stdexcept>

#include "ceerlab/errors.hpp"

namespace ceerlab {

Word::Word(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw word_error("word must be nonempty");
  for (char c : symbols_) {
    if (c != 'a' && c != 'b') {
      throw word_error(std::string("word symbol must be 'a' or 'b', got '") + c + "'");
    }
  }
}

std::optional<Word> Word::try_make(std::string_view symbols) {
  if (symbols.empty()) return std::nullopt;
  for (char c : symbols) {
    if (c != 'a' && c != 'b') return std::nullopt;
  }
  return Word(std::string(symbols));
}

bool length_lex_less(const Word& u, const Word& v) {
  if (u.length() != v.length()) return u.length() < v.length();
  return u.str() < v.str();
}

std::uint64_t word_code(const Word& w) {
  if (w.length() > 63) throw std::overflow_error("word_code: word longer than 63 symbols");
  std::uint64_t value = 0;
  for (char c : w.str()) value = value * 2 + (c == 'b' ? 1 : 0);
  return (std::uint64_t{1} << w.length()) - 2 + value;
}

Word word_decode(std::uint64_t n) {
  // n + 2 lies in [2^len, 2^(len+1)); the low len bits spell the word.
  if (n > UINT64_MAX - 2) throw std::overflow_error("word_decode: code out of range");
  std::uint64_t v = n + 2;
  int len = 63 - __builtin_clzll(v);
  std::string s(static_cast<std::size_t>(len), 'a');
  for (int i = len - 1; i >= 0; --i) {
    if (v & 1) s[static_cast<std::size_t>(i)] = 'b';
    v >>= 1;
  }
  return Word(std::move(s));
}

std::uint64_t first_code_of_length(std::uint64_t len) {
  if (len == 0 || len > 63) throw std::out_of_range("first_code_of_length: len must be in [1,63]");
  return (std::uint64_t{1} << len) - 2;
}

}  // namespace ceerlab
