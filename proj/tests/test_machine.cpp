#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <set>
#include <vector>

#include "ceerlab/errors.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/pairing.hpp"
#include "ceerlab/words.hpp"

using namespace ceerlab;

namespace {

Program prog(std::vector<Instruction> code) {
  Program p;
  p.code = std::move(code);
  p.index = encode_program(p.code);
  return p;
}

Instruction inc(std::uint64_t r) { return {Opcode::inc, r, 0}; }
Instruction jzdec(std::uint64_t r, std::uint64_t t) { return {Opcode::jzdec, r, t}; }
Instruction jmp(std::uint64_t t) { return {Opcode::jmp, 0, t}; }
Instruction halt() { return {Opcode::halt, 0, 0}; }

const char* kDoublingAsm =
    "JZDEC 0 4\n"
    "INC 1\n"
    "INC 1\n"
    "JMP 0\n"
    "JZDEC 1 8\n"
    "INC 0\n"
    "JMP 4\n"
    "HALT\n";

}  // namespace

TEST_CASE("cantor pairing round trips and matches the pinned values") {
  CHECK(cantor_pair(0, 0) == 0);
  CHECK(cantor_pair(1, 0) == 1);
  CHECK(cantor_pair(0, 1) == 2);
  CHECK(cantor_pair(2, 0) == 3);
  for (std::uint64_t n = 0; n < 10'000; ++n) {
    auto [x, y] = cantor_unpair(n);
    CHECK(cantor_pair(x, y) == n);
  }
  for (std::uint64_t x = 0; x < 60; ++x) {
    for (std::uint64_t y = 0; y < 60; ++y) {
      auto [a, b] = cantor_unpair(cantor_pair(x, y));
      CHECK(a == x);
      CHECK(b == y);
    }
  }
}

TEST_CASE("program coding is a bijection") {
  SUBCASE("small indices decode to the expected one-instruction programs") {
    CHECK(decode_program(0).code == std::vector<Instruction>{halt()});
    CHECK(decode_program(1).code == std::vector<Instruction>{inc(0)});
    CHECK(decode_program(2).code == std::vector<Instruction>{jmp(0)});
  }

  SUBCASE("decode then encode is the identity on sampled indices up to 10^6") {
    for (std::uint64_t e = 0; e <= 20'000; ++e) {
      Program p = decode_program(e);
      CHECK(!p.code.empty());
      CHECK(p.index == e);
      CHECK(encode_program(p.code) == e);
    }
    for (std::uint64_t e = 0; e <= 1'000'000; e += 7919) {
      CHECK(encode_program(decode_program(e).code) == e);
    }
  }

  SUBCASE("instruction codes round trip") {
    for (std::uint64_t c = 0; c < 5'000; ++c) {
      CHECK(encode_instruction(decode_instruction(c)) == c);
    }
  }
}

TEST_CASE("index 0 is the identity function") {
  Program id = decode_program(0);
  for (std::uint64_t i = 0; i <= 20; ++i) {
    RunOutcome out = run_bounded(id, i, 10);
    CHECK(out.halted);
    CHECK(out.value == i);
  }
}

TEST_CASE("run_bounded on hand-built programs") {
  SUBCASE("successor") {
    Program s = prog({inc(0)});
    CHECK(s.index == 1);
    RunOutcome out = run_bounded(s, 7, 10);
    CHECK(out.halted);
    CHECK(out.value == 8);
    CHECK(out.steps == 1);
  }

  SUBCASE("tight loop never halts") {
    Program loop = prog({jmp(0)});
    CHECK(loop.index == 2);
    RunOutcome out = run_bounded(loop, 0, 5'000);
    CHECK(!out.halted);
    CHECK(out.steps == 5'000);
  }

  SUBCASE("jump past the end halts") {
    Program p = prog({jmp(99)});
    RunOutcome out = run_bounded(p, 3, 10);
    CHECK(out.halted);
    CHECK(out.value == 3);
    CHECK(out.steps == 1);
  }

  SUBCASE("doubling") {
    Program d = assemble(kDoublingAsm);
    for (std::uint64_t i = 0; i <= 10; ++i) {
      RunOutcome out = run_bounded(d, i, 10'000);
      CHECK(out.halted);
      CHECK(out.value == 2 * i);
    }
  }
}

TEST_CASE("phi_stage conventions") {
  SUBCASE("stage 0 defines nothing") {
    for (std::uint64_t e : {0, 1, 2, 5, 17}) {
      for (std::uint64_t i = 0; i < 5; ++i) {
        CHECK(!phi_stage(e, i, 0).has_value());
      }
    }
  }

  SUBCASE("defined values are below the stage") {
    // Identity halts instantly, but phi_stage(0, 5, 5) is still undefined.
    CHECK(!phi_stage(0, 5, 5).has_value());
    CHECK(phi_stage(0, 5, 6) == 5);
    // Successor: value i+1 needs stage at least i+2.
    CHECK(!phi_stage(1, 3, 4).has_value());
    CHECK(phi_stage(1, 3, 5) == 4);
  }

  SUBCASE("monotone in the stage with a stable value") {
    for (std::uint64_t e : {0, 1, 5, 30, 100}) {
      for (std::uint64_t i = 0; i < 8; ++i) {
        std::optional<std::uint64_t> prev;
        for (std::uint64_t s = 0; s <= 40; ++s) {
          auto v = phi_stage(e, i, s);
          if (prev) {
            REQUIRE(v.has_value());
            CHECK(*v == *prev);
          }
          if (v) prev = v;
        }
      }
    }
  }

  SUBCASE("two evaluations agree") {
    for (std::uint64_t e = 0; e < 50; ++e) {
      for (std::uint64_t i = 0; i < 5; ++i) {
        CHECK(phi_stage(e, i, 25) == phi_stage(e, i, 25));
      }
    }
  }
}

TEST_CASE("we_stage enumerations") {
  SUBCASE("stage 0 is empty") {
    for (std::uint64_t e : {0, 1, 2, 9}) CHECK(we_stage(e, 0).empty());
  }

  SUBCASE("identity program enumerates an initial segment") {
    // Halts in 0 steps with value i, so i enters exactly at stage i+1.
    for (std::uint64_t s : {1, 2, 5, 30}) {
      std::vector<std::uint64_t> expect(s);
      for (std::uint64_t i = 0; i < s; ++i) expect[i] = i;
      CHECK(we_stage(0, s) == expect);
    }
  }

  SUBCASE("divergent program enumerates nothing") {
    CHECK(we_stage(2, 200).empty());
  }

  SUBCASE("monotone in the stage") {
    for (std::uint64_t e = 0; e < 40; ++e) {
      for (std::uint64_t s = 0; s < 30; ++s) {
        std::vector<std::uint64_t> lo = we_stage(e, s);
        std::vector<std::uint64_t> hi = we_stage(e, s + 1);
        CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
      }
    }
  }
}

TEST_CASE("padding: distinct indices computing the same function") {
  // Dead code appended after the halting path leaves the function unchanged.
  std::vector<std::pair<Program, Program>> pairs;
  pairs.emplace_back(prog({halt()}), prog({halt(), inc(0)}));
  pairs.emplace_back(prog({inc(0)}), prog({inc(0), halt()}));
  Program d = assemble(kDoublingAsm);
  std::vector<Instruction> padded = d.code;
  padded.push_back(halt());
  pairs.emplace_back(d, prog(padded));

  for (const auto& [p, q] : pairs) {
    CHECK(p.index != q.index);
    for (std::uint64_t i = 0; i <= 12; ++i) {
      RunOutcome a = run_bounded(p, i, 10'000);
      RunOutcome b = run_bounded(q, i, 10'000);
      REQUIRE(a.halted);
      REQUIRE(b.halted);
      CHECK(a.value == b.value);
    }
  }
}

TEST_CASE("assembler") {
  SUBCASE("assemble/disassemble round trip on decoded programs") {
    for (std::uint64_t e : {0, 1, 2, 17, 100, 4096, 99'991}) {
      Program p = decode_program(e);
      Program q = assemble(disassemble(p));
      CHECK(q.code == p.code);
      CHECK(q.index == e);
    }
  }

  SUBCASE("comments, blank lines, and case are tolerated") {
    Program p = assemble("# doubling by loop\n\n  jzdec 0 4\nInc 1\nINC 1\njmp 0\n"
                         "JZDEC 1 8\nINC 0\nJMP 4\nhalt  # done\n");
    CHECK(p.code == assemble(kDoublingAsm).code);
  }

  SUBCASE("the doubling program has the pinned index") {
    CHECK(assemble(kDoublingAsm).index == 30571567737550ULL);
  }

  SUBCASE("parse errors carry line and column") {
    CHECK_THROWS_AS(assemble("INC 0\nNOP\n"), parse_error);
    CHECK_THROWS_AS(assemble("INC\n"), parse_error);
    CHECK_THROWS_AS(assemble("JZDEC 1\n"), parse_error);
    CHECK_THROWS_AS(assemble("INC 0 0\n"), parse_error);
    CHECK_THROWS_AS(assemble("INC x\n"), parse_error);
    try {
      assemble("HALT\nBADOP 3\n");
      FAIL("expected parse_error");
    } catch (const parse_error& err) {
      CHECK(err.line == 2);
    }
  }
}

TEST_CASE("divergent_inputs reports exactly the non-halting inputs") {
  CHECK(divergent_inputs(decode_program(0), 10, 100).empty());
  Program loop = decode_program(2);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t i = 0; i <= 6; ++i) expect.push_back(i);
  CHECK(divergent_inputs(loop, 6, 100) == expect);
}

TEST_CASE("BoundedRun advances monotonically and matches run_bounded") {
  auto d = std::make_shared<const Program>(assemble(kDoublingAsm));
  RunOutcome ref = run_bounded(*d, 6, 10'000);
  REQUIRE(ref.halted);

  BoundedRun run(d, 6);
  CHECK(run.steps_done() == 0);
  CHECK(!run.halted());
  for (std::uint64_t s = 1; s <= ref.steps + 5; ++s) {
    run.advance_to(s);
    CHECK(run.steps_done() == std::min<std::uint64_t>(s, ref.steps));
    CHECK(run.halted() == (s >= ref.steps));
  }
  CHECK(run.value() == 12);
  run.advance_to(3);  // never rewinds
  CHECK(run.steps_done() == ref.steps);
}

TEST_CASE("StageEntryCache is transparent over phi_stage") {
  for (std::uint64_t e : {0, 1, 2, 30}) {
    StageEntryCache cache(decode_program(e));
    for (std::uint64_t x = 0; x < 12; ++x) {
      for (std::uint64_t s = 0; s < 20; ++s) {
        auto direct = phi_stage(e, x, s);
        CHECK(cache.value_at(x, s) == direct);
        CHECK(cache.member_at(x, s) == (x < s && direct.has_value()));
      }
    }
    // Revisiting lower stages after higher ones must not change answers.
    for (std::uint64_t x = 0; x < 12; ++x) {
      CHECK(cache.value_at(x, 3) == phi_stage(e, x, 3));
    }
  }
}

TEST_CASE("word coding is the length-lex bijection") {
  CHECK(word_code(Word("a")) == 0);
  CHECK(word_code(Word("b")) == 1);
  CHECK(word_code(Word("aa")) == 2);
  CHECK(word_code(Word("ab")) == 3);
  CHECK(word_code(Word("ba")) == 4);
  CHECK(word_code(Word("bb")) == 5);
  CHECK(word_decode(6).str() == "aaa");

  for (std::uint64_t n = 0; n < 5'000; ++n) {
    CHECK(word_code(word_decode(n)) == n);
  }
  for (std::uint64_t n = 0; n + 1 < 600; ++n) {
    CHECK(length_lex_less(word_decode(n), word_decode(n + 1)));
  }

  CHECK(first_code_of_length(1) == 0);
  CHECK(first_code_of_length(2) == 2);
  CHECK(first_code_of_length(3) == 6);
  CHECK(first_code_of_length(5) == 30);
  CHECK(first_code_of_length(6) == 62);
  for (std::uint64_t len = 1; len <= 20; ++len) {
    CHECK(word_decode(first_code_of_length(len)).length() == len);
    CHECK(word_decode(first_code_of_length(len)).str().find('b') == std::string::npos);
  }

  CHECK_THROWS_AS(Word(""), word_error);
  CHECK_THROWS_AS(Word("abc"), word_error);
  CHECK(!Word::try_make("").has_value());
  CHECK(!Word::try_make("aXa").has_value());
  CHECK(Word::try_make("abba").has_value());
}
