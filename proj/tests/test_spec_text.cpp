#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/errors.hpp"
#include "ceerlab/spec_text.hpp"

using namespace ceerlab;

namespace {

// Fifty expressions exercising every production, used for round-trip checks.
std::vector<std::string> corpus() {
  std::vector<std::string> out = {
      "(id)",
      "(idn 1)",
      "(idn 2)",
      "(idn 17)",
      "(mod 1)",
      "(mod 2)",
      "(mod 3)",
      "(mod 60)",
      "(intervals 1)",
      "(intervals 2)",
      "(intervals 2 2)",
      "(intervals 3 1 4)",
      "(intervals 2 2 2 2 2)",
      "(uni {})",
      "(uni {0})",
      "(uni {0,1})",
      "(uni {0,1,2})",
      "(uni {5,17,40})",
      "(uni-ce 0)",
      "(uni-ce 2)",
      "(uni-ce 17)",
      "(pairs 0)",
      "(pairs 2)",
      "(pairs 23)",
      "(cyl (id))",
      "(cyl (mod 2))",
      "(cyl (idn 3))",
      "(cyl (intervals 2 2))",
      "(cyl (cyl (mod 2)))",
      "(join (id) (id))",
      "(join (mod 2) (mod 3))",
      "(join (idn 1) (id))",
      "(join (intervals 2 2) (uni {0,1}))",
      "(join (join (mod 2) (mod 3)) (idn 4))",
      "(join (cyl (mod 2)) (pairs 0))",
      "(restrict (id) 0)",
      "(restrict (mod 3) 1)",
      "(restrict (mod 3) 30571567737550)",
      "(restrict (intervals 2 2) 0)",
      "(restrict (join (mod 2) (id)) 1)",
      "(cyl (join (idn 2) (mod 3)))",
      "(cyl (restrict (mod 5) 0))",
      "(join (uni-ce 0) (uni-ce 2))",
      "(join (pairs 0) (mod 2))",
      "(restrict (cyl (mod 2)) 0)",
      "(join (mod 7) (intervals 1 2 3))",
      "(cyl (uni {1,2,3}))",
      "(join (id) (join (id) (join (id) (mod 2))))",
      "(restrict (uni {0,1}) 1)",
      "(cyl (cyl (cyl (idn 2))))",
  };
  return out;
}

}  // namespace

TEST_CASE("printing and parsing are mutually inverse on the corpus") {
  auto specs = corpus();
  CHECK(specs.size() == 50);
  for (const std::string& text : specs) {
    CAPTURE(text);
    CeerSpec parsed = parse_spec(text);
    std::string printed = print_spec(parsed);
    CHECK(printed == text);
    CHECK(parse_spec(printed) == parsed);
  }
}

TEST_CASE("whitespace and layout are irrelevant") {
  CeerSpec canonical = parse_spec("(join (mod 2) (intervals 2 2))");
  CHECK(parse_spec("( join ( mod 2 ) ( intervals 2 2 ) )") == canonical);
  CHECK(parse_spec("(join\n  (mod 2)\n  (intervals 2 2))") == canonical);
  CHECK(parse_spec("\t(join (mod\t2) (intervals 2  2))\n") == canonical);
  CHECK(parse_spec("(uni { 0 , 1 , 2 })") == parse_spec("(uni {0,1,2})"));
}

TEST_CASE("parsed trees build the relation they name") {
  StagedCeer r = build(parse_spec("(join (mod 2) (mod 3))"));
  CHECK(r.decide_at(5, 4, 8));
  CHECK(r.decide_at(4, 1, 7));
  CHECK(!r.decide_at(20, 2, 3));
}

TEST_CASE("parse failures carry the offending position") {
  auto expect_fail = [](const std::string& text, std::size_t line, std::size_t col) {
    CAPTURE(text);
    try {
      parse_spec(text);
      FAIL_CHECK("expected parse_error");
    } catch (const parse_error& err) {
      CHECK(err.line == line);
      CHECK(err.col == col);
    }
  };

  expect_fail("", 1, 1);                        // no expression at all
  expect_fail("(idn)", 1, 5);                   // missing operand
  expect_fail("(frobnicate 3)", 1, 12);         // unknown head
  expect_fail("(mod 2", 1, 7);                  // unbalanced
  expect_fail("(mod 2) extra", 1, 9);           // trailing input
  expect_fail("(uni 0)", 1, 6);                 // missing braces
  expect_fail("(uni {0,})", 1, 9);              // dangling comma
  expect_fail("(join (id))", 1, 11);            // arity
  expect_fail("(mod 99999999999999999999)", 1, 25);  // overflow
  expect_fail("(join\n(id)\n(idn))", 3, 5);     // line tracking
}

TEST_CASE("structurally valid text with bad parameters fails validation") {
  CHECK_THROWS_AS(parse_spec("(idn 0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("(mod 0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("(intervals 2 0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("(uni {1,1})"), std::invalid_argument);
}
