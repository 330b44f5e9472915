#include "ceerlab/semigroup.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "ceerlab/errors.hpp"

namespace ceerlab {

std::vector<CodingOccurrence> coding_occurrences(const Word& w) {
  const std::string& s = w.str();
  std::vector<CodingOccurrence> out;
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (s[p] != 'a') continue;
    std::size_t q = p + 1;
    while (q < s.size() && s[q] == 'b') ++q;
    if (q > p + 1 && q < s.size() && s[q] == 'a') {
      out.push_back(CodingOccurrence{p, q - p + 1, static_cast<std::uint64_t>(q - p - 1)});
    }
  }
  return out;
}

Stratum classify(const Word& w) {
  auto occs = coding_occurrences(w);
  if (occs.size() == 1 && occs[0].pos == 0 && occs[0].len == w.length()) {
    return Stratum{Stratum::Tag::coding, occs[0].exponent};
  }
  if (!occs.empty()) return Stratum{Stratum::Tag::contains_coding, 0};
  return Stratum{Stratum::Tag::avoiding, 0};
}

bool sr_decide(const StagedCeer& r, std::uint64_t s, const Word& u, const Word& v) {
  if (u == v) return true;
  Stratum su = classify(u);
  Stratum sv = classify(v);
  if (su.tag != sv.tag) return false;
  switch (su.tag) {
    case Stratum::Tag::contains_coding: return true;
    case Stratum::Tag::coding: return r.decide_at(s, su.exponent - 1, sv.exponent - 1);
    case Stratum::Tag::avoiding: return false;
  }
  return false;
}

namespace {

// Walk of the pattern a b^+ a: state 0 = nothing pending, 1 = pending 'a',
// 2 = pending 'a b^+', 3 = matched (dead for avoiding words).
constexpr std::uint32_t kDead = 3;

std::uint32_t dfa_step(std::uint32_t q, char c) {
  if (q == 0) return c == 'a' ? 1 : 0;
  if (q == 1) return c == 'a' ? 1 : 2;
  if (q == 2) return c == 'a' ? kDead : 2;
  return kDead;
}

// Number of length-r suffixes from state q that never reach the match state.
std::uint64_t alive_suffixes(std::uint32_t q, std::uint64_t r) {
  switch (q) {
    case 0: {
      unsigned __int128 v = (static_cast<unsigned __int128>(r) * (r + 1)) / 2 + 1;
      if (v > UINT64_MAX) throw std::overflow_error("avoiding word count exceeds 64 bits");
      return static_cast<std::uint64_t>(v);
    }
    case 1: return r + 1;
    case 2: return 1;
    default: return 0;
  }
}

}  // namespace

std::uint64_t avoiding_count_of_length(std::uint64_t len) { return alive_suffixes(0, len); }

std::uint64_t avoiding_rank(const Word& w) {
  if (classify(w).tag != Stratum::Tag::avoiding) {
    throw std::invalid_argument("avoiding_rank: word is not avoiding");
  }
  unsigned __int128 rank = 0;
  for (std::uint64_t len = 1; len < w.length(); ++len) rank += avoiding_count_of_length(len);
  std::uint32_t q = 0;
  const std::string& s = w.str();
  for (std::size_t pos = 0; pos < s.size(); ++pos) {
    if (s[pos] == 'b') rank += alive_suffixes(dfa_step(q, 'a'), s.size() - pos - 1);
    q = dfa_step(q, s[pos]);
  }
  if (rank > UINT64_MAX) throw std::overflow_error("avoiding_rank: rank exceeds 64 bits");
  return static_cast<std::uint64_t>(rank);
}

Word avoiding_unrank(std::uint64_t k) {
  std::uint64_t len = 1;
  while (true) {
    std::uint64_t here = avoiding_count_of_length(len);
    if (k < here) break;
    k -= here;
    ++len;
  }
  std::string out;
  out.reserve(len);
  std::uint32_t q = 0;
  for (std::uint64_t pos = 0; pos < len; ++pos) {
    std::uint64_t rest = len - pos - 1;
    std::uint64_t with_a = alive_suffixes(dfa_step(q, 'a'), rest);
    if (k < with_a) {
      out.push_back('a');
      q = dfa_step(q, 'a');
    } else {
      k -= with_a;
      out.push_back('b');
      q = dfa_step(q, 'b');
    }
  }
  return Word(std::move(out));
}

std::vector<Word> avoiding_words_up_to(std::uint64_t max_len) {
  std::vector<Word> out;
  for (std::uint64_t k = 0;; ++k) {
    Word w = avoiding_unrank(k);
    if (w.length() > max_len) break;
    out.push_back(std::move(w));
  }
  return out;
}

std::uint64_t sr_to_join(const Word& w) {
  Stratum st = classify(w);
  switch (st.tag) {
    case Stratum::Tag::coding: return 2 * (st.exponent - 1);
    case Stratum::Tag::contains_coding: return 1;
    case Stratum::Tag::avoiding: {
      std::uint64_t k = avoiding_rank(w);
      if (k > (UINT64_MAX - 3) / 2) throw std::overflow_error("sr_to_join: code exceeds 64 bits");
      return 2 * k + 3;
    }
  }
  throw std::logic_error("sr_to_join: bad stratum");
}

Word sr_from_join(std::uint64_t n) {
  if (n % 2 == 0) {
    std::uint64_t m = n / 2;
    std::string s = "a";
    s.append(static_cast<std::size_t>(m + 1), 'b');
    s.push_back('a');
    return Word(std::move(s));
  }
  if (n == 1) return Word("aaba");
  return avoiding_unrank((n - 3) / 2);
}

namespace {

struct LengthLexLess {
  bool operator()(const Word& u, const Word& v) const { return length_lex_less(u, v); }
};

}  // namespace

ClosureResult congruence_closure(const Presentation& p, std::uint64_t s, const Word& w,
                                 ClosureLimits limits) {
  std::set<Word, LengthLexLess> visited;
  std::deque<Word> queue;
  bool truncated = false;
  bool flooded = false;

  // False when the word had to be dropped because the word cap is full.
  auto offer = [&](Word v) {
    if (visited.count(v)) return true;
    if (visited.size() >= limits.max_words) {
      truncated = true;
      return false;
    }
    queue.push_back(v);
    visited.insert(std::move(v));
    return true;
  };

  offer(w);
  while (!queue.empty()) {
    Word u = std::move(queue.front());
    queue.pop_front();
    const std::string& us = u.str();

    if (p.kind == Presentation::Kind::sr && !flooded &&
        classify(u).tag == Stratum::Tag::contains_coding) {
      flooded = true;
      for (std::uint64_t code = 0;; ++code) {
        Word cand = word_decode(code);
        if (cand.length() > limits.max_len) break;
        if (classify(cand).tag != Stratum::Tag::contains_coding) continue;
        // Stop at the first clique word that no longer fits: everything after
        // it would be dropped too.
        if (!offer(std::move(cand))) break;
      }
    }

    for (const CodingOccurrence& occ : coding_occurrences(u)) {
      if (occ.exponent - 1 >= s) continue;
      for (std::uint64_t m = 0; m < s; ++m) {
        std::uint64_t j = m + 1;
        if (j == occ.exponent) continue;
        if (!p.relation.decide_at(s, m, occ.exponent - 1)) continue;
        if (us.size() - occ.len + j + 2 > limits.max_len) {
          truncated = true;
          continue;
        }
        std::string rewritten;
        rewritten.reserve(us.size() - occ.len + j + 2);
        rewritten.append(us, 0, occ.pos);
        rewritten.push_back('a');
        rewritten.append(static_cast<std::size_t>(j), 'b');
        rewritten.push_back('a');
        rewritten.append(us, occ.pos + occ.len, std::string::npos);
        offer(Word(std::move(rewritten)));
      }
    }
  }

  ClosureResult out;
  out.truncated = truncated;
  out.words.assign(visited.begin(), visited.end());
  return out;
}

FinclVerdict fincl_decide(const Presentation& p, std::uint64_t s, const Word& u, const Word& v,
                          ClosureLimits limits) {
  if (p.kind != Presentation::Kind::fincl) {
    throw std::invalid_argument("fincl_decide: presentation is not the fincl variant");
  }
  auto member = [](const ClosureResult& c, const Word& x) {
    return std::binary_search(c.words.begin(), c.words.end(), x, LengthLexLess{});
  };
  ClosureResult cu = congruence_closure(p, s, u, limits);
  if (member(cu, v)) return FinclVerdict::equal;
  if (!cu.truncated) return FinclVerdict::distinct;
  ClosureResult cv = congruence_closure(p, s, v, limits);
  if (member(cv, u)) return FinclVerdict::equal;
  if (!cv.truncated) return FinclVerdict::distinct;
  for (const Word& x : cu.words) {
    if (member(cv, x)) return FinclVerdict::equal;
  }
  return FinclVerdict::unknown;
}

ClassSize fincl_class_size(const Presentation& p, std::uint64_t s, const Word& w,
                           ClosureLimits limits) {
  if (p.kind != Presentation::Kind::fincl) {
    throw std::invalid_argument("fincl_class_size: presentation is not the fincl variant");
  }
  ClosureResult closure = congruence_closure(p, s, w, limits);
  ClassSize out;
  out.size = closure.words.size();
  out.truncated = closure.truncated;

  auto occs = coding_occurrences(w);
  for (std::size_t k = 0; k + 1 < occs.size(); ++k) {
    if (occs[k].pos + occs[k].len > occs[k + 1].pos) return out;  // overlap: no prediction
  }
  unsigned __int128 product = 1;
  for (const CodingOccurrence& occ : occs) {
    std::uint64_t m = occ.exponent - 1;
    std::uint64_t size = 1;
    if (m < s) {
      size = 0;
      for (std::uint64_t x = 0; x < s; ++x) {
        if (p.relation.decide_at(s, x, m)) ++size;
      }
    }
    product *= size;
    if (product > UINT64_MAX) throw std::overflow_error("fincl_class_size: predicted size overflow");
  }
  out.predicted = static_cast<std::uint64_t>(product);
  return out;
}

}  // namespace ceerlab
