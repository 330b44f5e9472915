#ifndef CEERLAB_MACHINE_HPP
#define CEERLAB_MACHINE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ceerlab {

// Unlimited register machine over naturals.
//
//   INC r      increment register r, fall through
//   JZDEC r t  if register r is zero jump to t, else decrement and fall through
//   JMP t      jump to t
//   HALT       stop
//
// Input is placed in register 0; the output is register 0 at halt. A
// configuration is terminal when the pc is past the end of the program or the
// current instruction is HALT; one step is one executed INC/JZDEC/JMP
// dispatch, so a jump target past the end halts the machine.
enum class Opcode : std::uint8_t { inc, jzdec, jmp, halt };

struct Instruction {
  Opcode op = Opcode::halt;
  std::uint64_t reg = 0;
  std::uint64_t target = 0;
  bool operator==(const Instruction&) const = default;
};

struct Program {
  std::vector<Instruction> code;  // nonempty
  std::uint64_t index = 0;        // its number under the coding below
};

// Total coding of programs. Instructions: 0 = HALT, and for c >= 1 with
// m = c-1: m % 3 == 0 -> INC m/3, == 1 -> JMP m/3, == 2 -> JZDEC with
// (reg, target) = cantor_unpair(m/3). Programs: the index written in
// bijective base-3 (little-endian digits over {0,1,2}) splits on digit 2
// into per-instruction segments, each read as a bijective base-2 numeral.
// Every natural decodes to exactly one nonempty program and
// encode_program(decode_program(e).code) == e.
Program decode_program(std::uint64_t e);
std::uint64_t encode_program(std::span<const Instruction> code);  // throws overflow_error / invalid_argument

std::uint64_t encode_instruction(const Instruction& ins);
Instruction decode_instruction(std::uint64_t c);

// Line-oriented assembly: one instruction per line, mnemonics INC/JZDEC/JMP/HALT
// (case-insensitive), decimal operands, '#' comments, blank lines ignored.
Program assemble(std::string_view text);  // throws parse_error
std::string disassemble(const Program& p);

struct RunOutcome {
  bool halted = false;
  std::uint64_t value = 0;  // register 0 if halted
  std::uint64_t steps = 0;  // steps executed (= halting time when halted)
};

// Run on the given input for at most max_steps steps.
RunOutcome run_bounded(const Program& p, std::uint64_t input, std::uint64_t max_steps);

// Stage-s approximation of the numbering: phi_stage(e, i, s) is defined iff
// program e halts on i within s steps and the output is < s. Monotone in s;
// stage 0 defines nothing.
std::optional<std::uint64_t> phi_stage(std::uint64_t e, std::uint64_t i, std::uint64_t s);
std::optional<std::uint64_t> phi_stage(const Program& p, std::uint64_t i, std::uint64_t s);

// W_{e,s} = { i < s : phi_stage(e, i, s) defined }, ascending.
std::vector<std::uint64_t> we_stage(std::uint64_t e, std::uint64_t s);

// Inputs <= max_input on which p fails to halt within step_budget steps.
std::vector<std::uint64_t> divergent_inputs(const Program& p, std::uint64_t max_input,
                                            std::uint64_t step_budget);

// Resumable execution of one (program, input) pair; advances monotonically.
class BoundedRun {
 public:
  BoundedRun(std::shared_ptr<const Program> p, std::uint64_t input);

  void advance_to(std::uint64_t steps);  // run until halted or steps_done() == steps
  bool halted() const { return halted_; }
  std::uint64_t value() const { return regs_.empty() ? 0 : regs_[0]; }
  std::uint64_t steps_done() const { return steps_; }

 private:
  std::uint64_t reg_get(std::uint64_t r) const;
  void reg_set(std::uint64_t r, std::uint64_t v);

  std::shared_ptr<const Program> program_;
  std::vector<std::uint64_t> regs_;              // dense prefix
  std::map<std::uint64_t, std::uint64_t> far_;   // registers >= dense size
  std::uint64_t pc_ = 0;
  std::uint64_t steps_ = 0;
  bool halted_ = false;
};

// Memo of W_{e,s} entry stages for one program: entry_stage(x) is the least s
// with x in W_{e,s}, i.e. max(x+1, halting time, value+1). Queries at stage s
// only ever run the machine up to s steps; results are cached and the cache
// is transparent (same answers as phi_stage). Safe for concurrent queries.
class StageEntryCache {
 public:
  explicit StageEntryCache(Program p);

  bool member_at(std::uint64_t x, std::uint64_t s) const;  // x in W_{e,s}?
  // phi value if defined by stage s (no x < s requirement; used for pi maps).
  std::optional<std::uint64_t> value_at(std::uint64_t x, std::uint64_t s) const;
  // Steps explored for x so far without halting (diagnostics).
  std::uint64_t explored(std::uint64_t x) const;

  const Program& program() const { return *program_; }

 private:
  struct Cell {
    std::unique_ptr<BoundedRun> run;  // discarded once halted
    bool halted = false;
    std::uint64_t halt_step = 0;
    std::uint64_t value = 0;
    std::uint64_t explored = 0;
  };
  Cell& cell_for(std::uint64_t x) const;
  void advance(Cell& c, std::uint64_t steps) const;

  std::shared_ptr<const Program> program_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, Cell> cells_;
};

}  // namespace ceerlab

#endif
