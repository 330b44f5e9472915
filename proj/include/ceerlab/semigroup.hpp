#ifndef CEERLAB_SEMIGROUP_HPP
#define CEERLAB_SEMIGROUP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/words.hpp"

namespace ceerlab {

// Every word over {a,b} lands in exactly one stratum: the coding words
// a b^i a (i >= 1), the words properly containing one, and the words avoiding
// them all.
struct Stratum {
  enum class Tag : std::uint8_t { coding, contains_coding, avoiding };
  Tag tag = Tag::avoiding;
  std::uint64_t exponent = 0;  // i, set only for coding
  bool operator==(const Stratum&) const = default;
};

Stratum classify(const Word& w);

// Occurrences of coding subwords, ascending by position; [pos, pos+len).
struct CodingOccurrence {
  std::size_t pos = 0;
  std::size_t len = 0;       // exponent + 2
  std::uint64_t exponent = 0;
  bool operator==(const CodingOccurrence&) const = default;
};
std::vector<CodingOccurrence> coding_occurrences(const Word& w);

// Word problem of the two-generator semigroup built over R, decided by the
// stratum rule: equal words, or both contains-coding (one class), or coding
// words a b^i a, a b^j a with i-1, j-1 related under R at stage s. Avoiding
// words are singletons.
bool sr_decide(const StagedCeer& r, std::uint64_t s, const Word& u, const Word& v);

// Rank of an avoiding word among all avoiding words in length-lex order, and
// its inverse. avoiding_rank requires an avoiding argument.
std::uint64_t avoiding_rank(const Word& w);
Word avoiding_unrank(std::uint64_t k);
std::uint64_t avoiding_count_of_length(std::uint64_t len);
std::vector<Word> avoiding_words_up_to(std::uint64_t max_len);  // length-lex order

// The word problem above is isomorphic to R joined with the identity:
// coding a b^i a <-> even 2(i-1), the contains-coding class <-> 1 (with
// representative "aaba"), the k-th avoiding word <-> odd 2k+3. Both maps are
// stage-exact reductions and the composites fix classes.
std::uint64_t sr_to_join(const Word& w);
Word sr_from_join(std::uint64_t n);

struct Presentation {
  enum class Kind : std::uint8_t {
    sr,    // coding rewrites plus the contains-coding clique
    fincl  // coding rewrites only
  };
  Kind kind = Kind::sr;
  StagedCeer relation;
};

struct ClosureLimits {
  std::uint64_t max_words = 10'000;
  std::uint64_t max_len = 10'000;
};

struct ClosureResult {
  std::vector<Word> words;  // length-lex sorted, contains the start word
  bool truncated = false;   // some neighbor was dropped for size or length
};

// Breadth-first closure of {w} under bidirectional replacement of one coding
// occurrence a b^i a by a b^j a, enabled at stage s when i-1, j-1 < s and
// they are related under the presentation's R at stage s. The sr kind also
// floods the contains-coding clique (bounded by max_len) the first time a
// contains-coding word is reached. A lower approximation when truncated.
ClosureResult congruence_closure(const Presentation& p, std::uint64_t s, const Word& w,
                                 ClosureLimits limits);

enum class FinclVerdict : std::uint8_t { equal, distinct, unknown };

// equal iff the closures meet; distinct needs one side complete; otherwise
// unknown. Requires a fincl presentation.
FinclVerdict fincl_decide(const Presentation& p, std::uint64_t s, const Word& u, const Word& v,
                          ClosureLimits limits);

struct ClassSize {
  std::uint64_t size = 0;
  bool truncated = false;
  // Product of the stage-s R-class sizes over the coding occurrences; only
  // emitted when no two occurrences overlap (share a letter).
  std::optional<std::uint64_t> predicted;
};

ClassSize fincl_class_size(const Presentation& p, std::uint64_t s, const Word& w,
                           ClosureLimits limits);

}  // namespace ceerlab

#endif
