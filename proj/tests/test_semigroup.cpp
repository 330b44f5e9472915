#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ceerlab/semigroup.hpp"
#include "ceerlab/words.hpp"

using namespace ceerlab;

namespace {

Word w(const char* s) { return Word(s); }

bool is_coding_brute(const std::string& s) {
  if (s.size() < 3 || s.front() != 'a' || s.back() != 'a') return false;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] != 'b') return false;
  }
  return true;
}

bool contains_coding_brute(const std::string& s) {
  for (std::size_t pos = 0; pos < s.size(); ++pos) {
    for (std::size_t len = 3; pos + len <= s.size(); ++len) {
      if (is_coding_brute(s.substr(pos, len))) return true;
    }
  }
  return false;
}

std::vector<Word> all_words_of_length(std::uint64_t len) {
  std::vector<Word> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
    std::string s;
    for (std::uint64_t i = 0; i < len; ++i) s.push_back((bits >> i) & 1 ? 'b' : 'a');
    out.push_back(Word(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool member(const std::vector<Word>& set, const Word& x) {
  return std::find(set.begin(), set.end(), x) != set.end();
}

}  // namespace

TEST_CASE("classify") {
  CHECK(classify(w("aba")) == Stratum{Stratum::Tag::coding, 1});
  CHECK(classify(w("abba")) == Stratum{Stratum::Tag::coding, 2});
  CHECK(classify(w("abbbba")) == Stratum{Stratum::Tag::coding, 4});
  CHECK(classify(w("aabaa")).tag == Stratum::Tag::contains_coding);
  CHECK(classify(w("ababa")).tag == Stratum::Tag::contains_coding);
  CHECK(classify(w("babab")).tag == Stratum::Tag::contains_coding);
  CHECK(classify(w("aa")).tag == Stratum::Tag::avoiding);  // ab^0a does not code
  CHECK(classify(w("a")).tag == Stratum::Tag::avoiding);
  CHECK(classify(w("bab")).tag == Stratum::Tag::avoiding);
  CHECK(classify(w("bbbb")).tag == Stratum::Tag::avoiding);

  SUBCASE("agrees with the brute definitions on every word of length <= 12") {
    for (std::uint64_t len = 1; len <= 12; ++len) {
      for (const Word& word : all_words_of_length(len)) {
        Stratum got = classify(word);
        bool coding = is_coding_brute(word.str());
        bool contains = !coding && contains_coding_brute(word.str());
        Stratum::Tag expect = coding     ? Stratum::Tag::coding
                              : contains ? Stratum::Tag::contains_coding
                                         : Stratum::Tag::avoiding;
        REQUIRE(got.tag == expect);
        if (coding) REQUIRE(got.exponent == word.length() - 2);
      }
    }
  }
}

TEST_CASE("coding_occurrences") {
  CHECK(coding_occurrences(w("aba")) == std::vector<CodingOccurrence>{{0, 3, 1}});
  CHECK(coding_occurrences(w("aabbaa")) == std::vector<CodingOccurrence>{{1, 4, 2}});
  CHECK(coding_occurrences(w("abaaba")) ==
        std::vector<CodingOccurrence>{{0, 3, 1}, {3, 3, 1}});
  CHECK(coding_occurrences(w("ababa")) ==
        std::vector<CodingOccurrence>{{0, 3, 1}, {2, 3, 1}});
  CHECK(coding_occurrences(w("aa")).empty());
  CHECK(coding_occurrences(w("bbab")).empty());
}

TEST_CASE("sr_decide follows the stratum rule") {
  StagedCeer id = build(CeerSpec::id_omega_spec());
  StagedCeer one = build(CeerSpec::id_n_spec(1));

  SUBCASE("coding words defer to R on the shifted indices") {
    CHECK(!sr_decide(id, 10, w("aba"), w("abba")));
    CHECK(sr_decide(one, 5, w("aba"), w("abba")));
    CHECK(!sr_decide(one, 0, w("aba"), w("abba")));  // 0,1 not below stage 0
    StagedCeer pairs = build(CeerSpec::intervals_spec({2}));
    CHECK(sr_decide(pairs, 10, w("aba"), w("abba")));
    CHECK(!sr_decide(pairs, 10, w("aba"), w("abbba")));
  }

  SUBCASE("contains-coding words form one class outright") {
    CHECK(sr_decide(id, 0, w("aabaa"), w("babab")));
    CHECK(sr_decide(id, 10, w("aabaa"), w("ababa")));
    CHECK(!sr_decide(id, 10, w("aabaa"), w("aba")));  // coding vs contains
  }

  SUBCASE("avoiding words are singletons") {
    CHECK(!sr_decide(one, 50, w("aa"), w("ab")));
    CHECK(!sr_decide(one, 50, w("a"), w("b")));
    CHECK(sr_decide(one, 0, w("aa"), w("aa")));
  }
}

TEST_CASE("avoiding word enumeration") {
  SUBCASE("counts match the closed form and brute force") {
    CHECK(avoiding_count_of_length(1) == 2);
    CHECK(avoiding_count_of_length(2) == 4);
    CHECK(avoiding_count_of_length(3) == 7);
    CHECK(avoiding_count_of_length(4) == 11);
    for (std::uint64_t len = 1; len <= 10; ++len) {
      std::uint64_t brute = 0;
      for (const Word& word : all_words_of_length(len)) {
        if (classify(word).tag == Stratum::Tag::avoiding) ++brute;
      }
      CHECK(avoiding_count_of_length(len) == brute);
      CHECK(avoiding_count_of_length(len) == (len * len + len + 2) / 2);
    }
  }

  SUBCASE("rank and unrank are mutually inverse in length-lex order") {
    CHECK(avoiding_unrank(0) == w("a"));
    CHECK(avoiding_unrank(1) == w("b"));
    CHECK(avoiding_unrank(2) == w("aa"));
    CHECK(avoiding_unrank(5) == w("bb"));
    CHECK(avoiding_unrank(6) == w("aaa"));
    CHECK(avoiding_rank(w("a")) == 0);
    CHECK(avoiding_rank(w("bb")) == 5);
    for (std::uint64_t k = 0; k < 500; ++k) {
      Word word = avoiding_unrank(k);
      CHECK(classify(word).tag == Stratum::Tag::avoiding);
      CHECK(avoiding_rank(word) == k);
      if (k > 0) {
        CHECK(word_code(avoiding_unrank(k - 1)) < word_code(word));
      }
    }
    CHECK_THROWS_AS(avoiding_rank(w("aba")), std::invalid_argument);
    CHECK_THROWS_AS(avoiding_rank(w("aabaa")), std::invalid_argument);
  }

  SUBCASE("avoiding_words_up_to lists exactly the low strata") {
    std::vector<Word> got = avoiding_words_up_to(4);
    CHECK(got.size() == 2 + 4 + 7 + 11);
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(classify(got[i]).tag == Stratum::Tag::avoiding);
      CHECK(got[i].length() <= 4);
      if (i > 0) CHECK(word_code(got[i - 1]) < word_code(got[i]));
    }
  }
}

TEST_CASE("sr_to_join and sr_from_join") {
  SUBCASE("pinned values") {
    CHECK(sr_to_join(w("aba")) == 0);
    CHECK(sr_to_join(w("abba")) == 2);
    CHECK(sr_to_join(w("abbba")) == 4);
    CHECK(sr_to_join(w("aaba")) == 1);
    CHECK(sr_to_join(w("babab")) == 1);
    CHECK(sr_to_join(w("a")) == 3);
    CHECK(sr_to_join(w("b")) == 5);
    CHECK(sr_to_join(w("aa")) == 7);

    CHECK(sr_from_join(0) == w("aba"));
    CHECK(sr_from_join(2) == w("abba"));
    CHECK(sr_from_join(1) == w("aaba"));
    CHECK(sr_from_join(3) == w("a"));
    CHECK(sr_from_join(5) == w("b"));
    CHECK(sr_from_join(7) == w("aa"));
  }

  SUBCASE("codes round trip exactly") {
    for (std::uint64_t n = 0; n <= 200; ++n) {
      CHECK(sr_to_join(sr_from_join(n)) == n);
    }
  }

  SUBCASE("words round trip up to the word problem") {
    StagedCeer r = build(CeerSpec::mod_spec(3));
    for (std::uint64_t len = 1; len <= 8; ++len) {
      for (const Word& u : all_words_of_length(len)) {
        Word back = sr_from_join(sr_to_join(u));
        CHECK(sr_decide(r, 0, u, back));
        CHECK(sr_decide(r, 64, u, back));
      }
    }
  }

  SUBCASE("both directions are stage-exact reductions") {
    for (const CeerSpec& spec : {CeerSpec::mod_spec(3), CeerSpec::intervals_spec({2, 2})}) {
      StagedCeer r = build(spec);
      StagedCeer target = uniform_join(r, build(CeerSpec::id_omega_spec()));
      for (std::uint64_t s : {0, 1, 3, 8, 40}) {
        for (std::uint64_t len = 1; len <= 5; ++len) {
          for (const Word& u : all_words_of_length(len)) {
            for (const Word& v : all_words_of_length(len)) {
              CHECK(sr_decide(r, s, u, v) ==
                    target.decide_at(s, sr_to_join(u), sr_to_join(v)));
            }
          }
        }
        for (std::uint64_t m = 0; m <= 40; ++m) {
          for (std::uint64_t n = 0; n <= 40; ++n) {
            CHECK(target.decide_at(s, m, n) ==
                  sr_decide(r, s, sr_from_join(m), sr_from_join(n)));
          }
        }
      }
    }
  }
}

TEST_CASE("congruence_closure") {
  ClosureLimits roomy{10'000, 64};

  SUBCASE("single relation instance over interval pairs") {
    Presentation p{Presentation::Kind::fincl, build(CeerSpec::intervals_spec({2}))};
    ClosureResult got = congruence_closure(p, 10, w("aabaa"), roomy);
    CHECK(!got.truncated);
    CHECK(got.words == std::vector<Word>{w("aabaa"), w("aabbaa")});

    ClosureResult from_other = congruence_closure(p, 10, w("aabbaa"), roomy);
    CHECK(from_other.words == got.words);
  }

  SUBCASE("independent occurrences multiply") {
    Presentation p{Presentation::Kind::fincl, build(CeerSpec::intervals_spec({2}))};
    ClosureResult got = congruence_closure(p, 10, w("abaaba"), roomy);
    CHECK(!got.truncated);
    REQUIRE(got.words.size() == 4);
    CHECK(member(got.words, w("abaaba")));
    CHECK(member(got.words, w("abbaaba")));
    CHECK(member(got.words, w("abaabba")));
    CHECK(member(got.words, w("abbaabba")));
  }

  SUBCASE("results are length-lex sorted and contain the start word") {
    Presentation p{Presentation::Kind::fincl, build(CeerSpec::id_n_spec(1))};
    ClosureResult got = congruence_closure(p, 20, w("abba"), ClosureLimits{10'000, 9});
    CHECK(member(got.words, w("abba")));
    CHECK(got.truncated);  // longer exponents exist but exceed max_len
    for (std::size_t i = 1; i < got.words.size(); ++i) {
      CHECK(word_code(got.words[i - 1]) < word_code(got.words[i]));
    }
    // Exponents 1..7 give lengths 3..9 under the cap.
    CHECK(got.words.size() == 7);
  }

  SUBCASE("the stage gates which relation instances exist") {
    Presentation p{Presentation::Kind::fincl, build(CeerSpec::id_n_spec(1))};
    ClosureResult at1 = congruence_closure(p, 1, w("aba"), roomy);
    CHECK(at1.words == std::vector<Word>{w("aba")});
    ClosureResult at3 = congruence_closure(p, 3, w("aba"), roomy);
    CHECK(at3.words == std::vector<Word>{w("aba"), w("abba"), w("abbba")});
  }

  SUBCASE("avoiding words touch no relation") {
    Presentation sr{Presentation::Kind::sr, build(CeerSpec::id_n_spec(1))};
    ClosureResult got = congruence_closure(sr, 50, w("aa"), roomy);
    CHECK(got.words == std::vector<Word>{w("aa")});
    CHECK(!got.truncated);
  }

  SUBCASE("the sr kind floods the contains-coding clique") {
    Presentation sr{Presentation::Kind::sr, build(CeerSpec::id_omega_spec())};
    ClosureResult got = congruence_closure(sr, 10, w("aabaa"), ClosureLimits{20, 40});
    CHECK(got.truncated);
    CHECK(got.words.size() <= 20);
    CHECK(member(got.words, w("aabaa")));
    CHECK(member(got.words, w("aaba")));  // the least contains-coding word arrives first
    for (const Word& x : got.words) {
      CHECK(classify(x).tag == Stratum::Tag::contains_coding);
    }
  }

  SUBCASE("cap truncation flags a lower approximation") {
    Presentation p{Presentation::Kind::fincl, build(CeerSpec::id_n_spec(1))};
    ClosureResult got = congruence_closure(p, 64, w("aba"), ClosureLimits{3, 64});
    CHECK(got.truncated);
    CHECK(got.words.size() == 3);
  }
}

TEST_CASE("fincl_decide") {
  Presentation p{Presentation::Kind::fincl, build(CeerSpec::intervals_spec({2}))};
  ClosureLimits roomy{10'000, 64};

  CHECK(fincl_decide(p, 10, w("aabaa"), w("aabbaa"), roomy) == FinclVerdict::equal);
  CHECK(fincl_decide(p, 10, w("aa"), w("ab"), roomy) == FinclVerdict::distinct);
  CHECK(fincl_decide(p, 10, w("aba"), w("abbba"), roomy) == FinclVerdict::distinct);
  CHECK(fincl_decide(p, 10, w("aba"), w("aba"), roomy) == FinclVerdict::equal);

  SUBCASE("tiny caps yield unknown instead of a wrong answer") {
    // Two fat classes far apart: truncated closures never meet.
    Presentation wide{Presentation::Kind::fincl, build(CeerSpec::intervals_spec({30, 30}))};
    Word u = w("aba");
    Word v(std::string("a") + std::string(31, 'b') + "a");
    CHECK(fincl_decide(wide, 64, u, v, ClosureLimits{5, 64}) == FinclVerdict::unknown);
    CHECK(fincl_decide(wide, 64, u, v, ClosureLimits{10'000, 64}) == FinclVerdict::distinct);
    // One fat class: the truncated closures still meet, so the verdict holds.
    Presentation collapse{Presentation::Kind::fincl, build(CeerSpec::id_n_spec(1))};
    Word far(std::string("a") + std::string(8, 'b') + "a");
    CHECK(fincl_decide(collapse, 64, w("aba"), far, ClosureLimits{3, 64}) ==
          FinclVerdict::equal);
  }

  SUBCASE("only the fincl kind is accepted") {
    Presentation sr{Presentation::Kind::sr, build(CeerSpec::id_omega_spec())};
    CHECK_THROWS_AS(fincl_decide(sr, 5, w("aa"), w("ab"), roomy), std::invalid_argument);
  }
}

TEST_CASE("fincl_class_size") {
  ClosureLimits roomy{10'000, 64};

  SUBCASE("pinned sizes over interval pairs") {
    Presentation p{Presentation::Kind::fincl, build(CeerSpec::intervals_spec({2}))};
    ClassSize one = fincl_class_size(p, 10, w("aabaa"), roomy);
    CHECK(one.size == 2);
    CHECK(one.predicted == 2);
    CHECK(!one.truncated);

    ClassSize two = fincl_class_size(p, 10, w("abaaba"), roomy);
    CHECK(two.size == 4);
    CHECK(two.predicted == 4);

    ClassSize three = fincl_class_size(p, 10, w("abaabaaba"), roomy);
    CHECK(three.size == 8);
    CHECK(three.predicted == 8);
  }

  SUBCASE("overlapping occurrences suppress the prediction") {
    Presentation p{Presentation::Kind::fincl, build(CeerSpec::intervals_spec({2}))};
    ClassSize got = fincl_class_size(p, 10, w("ababa"), roomy);
    CHECK(got.size == 4);
    CHECK(!got.predicted.has_value());
  }

  SUBCASE("indices beyond the stage contribute factor one") {
    Presentation p{Presentation::Kind::fincl, build(CeerSpec::intervals_spec({2}))};
    ClassSize early = fincl_class_size(p, 1, w("aabaa"), roomy);
    CHECK(early.size == 1);
    CHECK(early.predicted == 1);
    ClassSize high = fincl_class_size(p, 2, w("abbba"), roomy);
    CHECK(high.size == 1);
    CHECK(high.predicted == 1);
  }

  SUBCASE("truncated closures report a lower bound without the product claim") {
    Presentation collapse{Presentation::Kind::fincl, build(CeerSpec::id_n_spec(1))};
    ClassSize got = fincl_class_size(collapse, 12, w("aba"), ClosureLimits{10'000, 6});
    CHECK(got.truncated);
    REQUIRE(got.predicted.has_value());
    CHECK(got.size < *got.predicted);

    Presentation sr{Presentation::Kind::sr, build(CeerSpec::id_omega_spec())};
    CHECK_THROWS_AS(fincl_class_size(sr, 5, w("aba"), ClosureLimits{10, 10}),
                    std::invalid_argument);
  }
}

TEST_CASE("sr_decide agrees with the closure oracle on a spot sample") {
  StagedCeer r = build(CeerSpec::intervals_spec({2, 2}));
  Presentation p{Presentation::Kind::sr, r};
  ClosureLimits limits{5'000, 7};
  std::vector<Word> sample = {w("aba"),   w("abba"), w("abbba"), w("abbbba"),
                              w("aabaa"), w("babab"), w("aa"),   w("ab"),
                              w("a"),     w("bbb")};
  for (const Word& u : sample) {
    ClosureResult closure = congruence_closure(p, 64, u, limits);
    for (const Word& v : sample) {
      bool fast = sr_decide(r, 64, u, v);
      if (fast) {
        CHECK(member(closure.words, v));
      } else if (!closure.truncated) {
        CHECK(!member(closure.words, v));
      }
    }
  }
}

TEST_CASE("the avoiding stratum is a transversal of sr_decide") {
  StagedCeer r = build(CeerSpec::mod_spec(3));
  std::vector<Word> avoiding = avoiding_words_up_to(6);
  for (std::size_t i = 0; i < avoiding.size(); ++i) {
    for (std::size_t j = i + 1; j < avoiding.size(); ++j) {
      CHECK(!sr_decide(r, 64, avoiding[i], avoiding[j]));
    }
  }
}
