#ifndef CEERLAB_WORDS_HPP
#define CEERLAB_WORDS_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ceerlab {

// Nonempty word over the fixed two-letter alphabet {a, b}.
class Word {
 public:
  explicit Word(std::string symbols);  // throws word_error on empty / bad symbol
  static std::optional<Word> try_make(std::string_view symbols);

  const std::string& str() const { return symbols_; }
  std::uint64_t length() const { return symbols_.size(); }

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;  // plain lexicographic

 private:
  std::string symbols_;
};

// Length-lex order with a < b; the coding below enumerates it.
bool length_lex_less(const Word& u, const Word& v);

// Bijection between naturals and words: "a"->0, "b"->1, "aa"->2, "ab"->3,
// "ba"->4, "bb"->5, "aaa"->6, ...
std::uint64_t word_code(const Word& w);
Word word_decode(std::uint64_t n);

// Code of the first word of the given length (2^len - 2); len in [1, 63].
std::uint64_t first_code_of_length(std::uint64_t len);

}  // namespace ceerlab

#endif
