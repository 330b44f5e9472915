#include "ceerlab/machine.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "ceerlab/errors.hpp"
#include "ceerlab/pairing.hpp"

namespace ceerlab {

namespace {

// Bijective base-2 over digits {0,1}: "" <-> 0, value = sum (d_i + 1) * 2^i.
std::uint64_t bij2_value(std::span<const std::uint8_t> digits) {
  std::uint64_t value = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    value = value * 2 + digits[i] + 1;  // overflow-safe: callers bound digit count
  }
  return value;
}

std::vector<std::uint8_t> bij2_digits(std::uint64_t n) {
  std::vector<std::uint8_t> d;
  while (n > 0) {
    d.push_back(static_cast<std::uint8_t>((n - 1) % 2));
    n = (n - 1) / 2;
  }
  return d;
}

}  // namespace

Instruction decode_instruction(std::uint64_t c) {
  if (c == 0) return Instruction{Opcode::halt, 0, 0};
  std::uint64_t m = c - 1;
  std::uint64_t k = m / 3;
  switch (m % 3) {
    case 0: return Instruction{Opcode::inc, k, 0};
    case 1: return Instruction{Opcode::jmp, 0, k};
    default: {
      auto [r, t] = cantor_unpair(k);
      return Instruction{Opcode::jzdec, r, t};
    }
  }
}

std::uint64_t encode_instruction(const Instruction& ins) {
  switch (ins.op) {
    case Opcode::halt: return 0;
    case Opcode::inc: return 1 + 3 * ins.reg;
    case Opcode::jmp: return 2 + 3 * ins.target;
    case Opcode::jzdec: return 3 + 3 * cantor_pair(ins.reg, ins.target);
  }
  throw std::logic_error("encode_instruction: bad opcode");
}

Program decode_program(std::uint64_t e) {
  // Digits of e in bijective base-3, little-endian; split on digit 2.
  std::vector<std::vector<std::uint8_t>> parts(1);
  std::uint64_t n = e;
  while (n > 0) {
    std::uint8_t d = static_cast<std::uint8_t>((n - 1) % 3);
    n = (n - 1) / 3;
    if (d == 2) {
      parts.emplace_back();
    } else {
      parts.back().push_back(d);
    }
  }
  Program p;
  p.index = e;
  p.code.reserve(parts.size());
  for (const auto& part : parts) p.code.push_back(decode_instruction(bij2_value(part)));
  return p;
}

std::uint64_t encode_program(std::span<const Instruction> code) {
  if (code.empty()) throw std::invalid_argument("encode_program: program must be nonempty");
  std::vector<std::uint8_t> digits;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i > 0) digits.push_back(2);
    for (std::uint8_t d : bij2_digits(encode_instruction(code[i]))) digits.push_back(d);
  }
  unsigned __int128 value = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    value = value * 3 + digits[i] + 1;
    if (value > UINT64_MAX) throw std::overflow_error("encode_program: index exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(value);
}

Program assemble(std::string_view text) {
  Program p;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                           : eol - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::istringstream in{std::string(line)};
    std::string mnemonic;
    if (in >> mnemonic) {
      std::string upper;
      for (char c : mnemonic) upper.push_back(static_cast<char>(std::toupper(c)));
      auto want_nat = [&](const char* what) -> std::uint64_t {
        std::uint64_t v;
        if (!(in >> v)) throw parse_error(std::string("expected ") + what + " after " + upper,
                                          line_no, mnemonic.size() + 2);
        return v;
      };
      Instruction ins;
      if (upper == "INC") {
        ins = {Opcode::inc, want_nat("register"), 0};
      } else if (upper == "JZDEC") {
        std::uint64_t r = want_nat("register");
        ins = {Opcode::jzdec, r, want_nat("target")};
      } else if (upper == "JMP") {
        ins = {Opcode::jmp, 0, want_nat("target")};
      } else if (upper == "HALT") {
        ins = {Opcode::halt, 0, 0};
      } else {
        throw parse_error("unknown mnemonic '" + mnemonic + "'", line_no, 1);
      }
      std::string trailing;
      if (in >> trailing) throw parse_error("trailing tokens after instruction", line_no, 1);
      p.code.push_back(ins);
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  if (p.code.empty()) throw parse_error("program must contain at least one instruction", line_no, 1);
  p.index = encode_program(p.code);
  return p;
}

std::string disassemble(const Program& p) {
  std::ostringstream out;
  for (const Instruction& ins : p.code) {
    switch (ins.op) {
      case Opcode::inc: out << "INC " << ins.reg; break;
      case Opcode::jzdec: out << "JZDEC " << ins.reg << ' ' << ins.target; break;
      case Opcode::jmp: out << "JMP " << ins.target; break;
      case Opcode::halt: out << "HALT"; break;
    }
    out << '\n';
  }
  return out.str();
}

BoundedRun::BoundedRun(std::shared_ptr<const Program> p, std::uint64_t input)
    : program_(std::move(p)) {
  regs_.push_back(input);
}

std::uint64_t BoundedRun::reg_get(std::uint64_t r) const {
  if (r < regs_.size()) return regs_[r];
  auto it = far_.find(r);
  return it == far_.end() ? 0 : it->second;
}

void BoundedRun::reg_set(std::uint64_t r, std::uint64_t v) {
  if (r < regs_.size()) {
    regs_[r] = v;
  } else if (r < 64) {
    regs_.resize(static_cast<std::size_t>(r) + 1, 0);
    regs_[r] = v;
  } else {
    far_[r] = v;
  }
}

void BoundedRun::advance_to(std::uint64_t steps) {
  const auto& code = program_->code;
  while (!halted_ && steps_ < steps) {
    if (pc_ >= code.size() || code[pc_].op == Opcode::halt) {
      halted_ = true;
      return;
    }
    const Instruction& ins = code[pc_];
    switch (ins.op) {
      case Opcode::inc:
        reg_set(ins.reg, reg_get(ins.reg) + 1);
        ++pc_;
        break;
      case Opcode::jzdec: {
        std::uint64_t v = reg_get(ins.reg);
        if (v == 0) {
          pc_ = ins.target;
        } else {
          reg_set(ins.reg, v - 1);
          ++pc_;
        }
        break;
      }
      case Opcode::jmp:
        pc_ = ins.target;
        break;
      case Opcode::halt:
        break;  // unreachable
    }
    ++steps_;
  }
  if (!halted_ && (pc_ >= code.size() || code[pc_].op == Opcode::halt)) halted_ = true;
}

RunOutcome run_bounded(const Program& p, std::uint64_t input, std::uint64_t max_steps) {
  BoundedRun run(std::make_shared<Program>(p), input);
  run.advance_to(max_steps);
  return RunOutcome{run.halted(), run.value(), run.steps_done()};
}

std::optional<std::uint64_t> phi_stage(const Program& p, std::uint64_t i, std::uint64_t s) {
  if (s == 0) return std::nullopt;
  RunOutcome out = run_bounded(p, i, s);
  if (out.halted && out.value < s) return out.value;
  return std::nullopt;
}

std::optional<std::uint64_t> phi_stage(std::uint64_t e, std::uint64_t i, std::uint64_t s) {
  if (s == 0) return std::nullopt;
  return phi_stage(decode_program(e), i, s);
}

std::vector<std::uint64_t> we_stage(std::uint64_t e, std::uint64_t s) {
  std::vector<std::uint64_t> out;
  if (s == 0) return out;
  Program p = decode_program(e);
  for (std::uint64_t i = 0; i < s; ++i) {
    if (phi_stage(p, i, s)) out.push_back(i);
  }
  return out;
}

std::vector<std::uint64_t> divergent_inputs(const Program& p, std::uint64_t max_input,
                                            std::uint64_t step_budget) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i <= max_input; ++i) {
    if (!run_bounded(p, i, step_budget).halted) out.push_back(i);
  }
  return out;
}

StageEntryCache::StageEntryCache(Program p)
    : program_(std::make_shared<Program>(std::move(p))) {}

StageEntryCache::Cell& StageEntryCache::cell_for(std::uint64_t x) const {
  auto [it, inserted] = cells_.try_emplace(x);
  if (inserted) it->second.run = std::make_unique<BoundedRun>(program_, x);
  return it->second;
}

void StageEntryCache::advance(Cell& c, std::uint64_t steps) const {
  if (c.halted || c.explored >= steps) return;
  c.run->advance_to(steps);
  c.explored = steps;
  if (c.run->halted()) {
    c.halted = true;
    c.halt_step = c.run->steps_done();
    c.value = c.run->value();
    c.run.reset();
  }
}

bool StageEntryCache::member_at(std::uint64_t x, std::uint64_t s) const {
  if (x >= s) return false;
  std::lock_guard<std::mutex> lock(mu_);
  Cell& c = cell_for(x);
  advance(c, s);
  return c.halted && c.halt_step <= s && c.value < s;
}

std::optional<std::uint64_t> StageEntryCache::value_at(std::uint64_t x, std::uint64_t s) const {
  if (s == 0) return std::nullopt;
  std::lock_guard<std::mutex> lock(mu_);
  Cell& c = cell_for(x);
  advance(c, s);
  if (c.halted && c.halt_step <= s && c.value < s) return c.value;
  return std::nullopt;
}

std::uint64_t StageEntryCache::explored(std::uint64_t x) const {
  std::lock_guard<std::mutex> lock(mu_);
  Cell& c = cell_for(x);
  return c.halted ? c.halt_step : c.explored;
}

}  // namespace ceerlab
