#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "anm/codec.hpp"
#include "anm/nat.hpp"

namespace anm {

// Deterministic register machine over unbounded naturals with a single
// oracle-query instruction.  Instruction set (10 opcodes):
//
//   li    r, imm     r := imm
//   mov   d, s       d := s
//   add   d, s       d := d + s
//   monus d, s       d := d - s  (clamped at 0)
//   jz    r, t       if r == 0 jump to instruction t
//   pair  d, a, b    d := pair(a, b)
//   unpl  d, s       d := first (unpair s)
//   unpr  d, s       d := second(unpair s)
//   query d, s       d := oracle(s)
//   halt  r          stop with value r
//
// 16 registers; execution starts at 0 with r0 = input, all others 0.
// Falling off the end halts with value 0.

constexpr unsigned kNumRegs = 16;
// Register 15 is never written by generated code, so it is a dependable zero
// for unconditional jumps inside builder-produced programs.
constexpr unsigned kZeroReg = 15;
constexpr std::size_t kMaxProgramLen = 1 << 16;
// Space cap: a register value beyond this is treated as resource exhaustion.
constexpr std::size_t kMaxValueBits = 1 << 22;

enum class Op : std::uint8_t {
  LoadImm = 0,
  Move = 1,
  Add = 2,
  Monus = 3,
  JumpIfZero = 4,
  Pair = 5,
  UnpairL = 6,
  UnpairR = 7,
  Query = 8,
  Halt = 9,
  // Decode artifact only: an ill-formed instruction halts with value 0, so
  // every natural decodes to a runnable program.  Never encoded.
  HaltZero = 10,
};

struct Instr {
  Op op;
  unsigned a = 0;  // dst / tested / halted register
  unsigned b = 0;  // src register
  unsigned c = 0;  // second src (pair)
  Nat imm = 0;     // immediate (li)
  std::size_t target = 0;  // jump target (jz), clamped to <= program length

  static Instr li(unsigned r, Nat v) { return {Op::LoadImm, r, 0, 0, std::move(v), 0}; }
  static Instr mov(unsigned d, unsigned s) { return {Op::Move, d, s, 0, 0, 0}; }
  static Instr add(unsigned d, unsigned s) { return {Op::Add, d, s, 0, 0, 0}; }
  static Instr monus(unsigned d, unsigned s) { return {Op::Monus, d, s, 0, 0, 0}; }
  static Instr jz(unsigned r, std::size_t t) { return {Op::JumpIfZero, r, 0, 0, 0, t}; }
  static Instr pair(unsigned d, unsigned x, unsigned y) { return {Op::Pair, d, x, y, 0, 0}; }
  static Instr unpl(unsigned d, unsigned s) { return {Op::UnpairL, d, s, 0, 0, 0}; }
  static Instr unpr(unsigned d, unsigned s) { return {Op::UnpairR, d, s, 0, 0, 0}; }
  static Instr query(unsigned d, unsigned s) { return {Op::Query, d, s, 0, 0, 0}; }
  static Instr halt(unsigned r) { return {Op::Halt, r, 0, 0, 0, 0}; }
};

inline Nat encode_instr(const Instr& i) {
  switch (i.op) {
    case Op::LoadImm: return pair_nat(0, pair_nat(i.a, i.imm));
    case Op::Move: return pair_nat(1, pair_nat(i.a, i.b));
    case Op::Add: return pair_nat(2, pair_nat(i.a, i.b));
    case Op::Monus: return pair_nat(3, pair_nat(i.a, i.b));
    case Op::JumpIfZero: return pair_nat(4, pair_nat(i.a, Nat(i.target)));
    case Op::Pair: return pair_nat(5, pair_nat(i.a, pair_nat(i.b, i.c)));
    case Op::UnpairL: return pair_nat(6, pair_nat(i.a, i.b));
    case Op::UnpairR: return pair_nat(7, pair_nat(i.a, i.b));
    case Op::Query: return pair_nat(8, pair_nat(i.a, i.b));
    case Op::Halt: return pair_nat(9, Nat(i.a));
    case Op::HaltZero: break;
  }
  throw std::logic_error("encode_instr: decode-only instruction");
}

struct Program {
  std::vector<Instr> instrs;

  Program() = default;
  explicit Program(std::vector<Instr> is) : instrs(std::move(is)) {
    if (instrs.size() > kMaxProgramLen) throw std::length_error("program too long");
    clamp_targets();
  }

  std::size_t size() const { return instrs.size(); }

  // Decodes any natural to a program.  An ill-formed position (opcode >= 10,
  // or an oversized instruction count) becomes a halt-with-0 stub.  The
  // original code is remembered so decode-then-encode is the identity on all
  // of N.
  static Program from_code(const Nat& n) {
    Program p;
    p.code_ = n;
    auto seq = decode_seq(n, kMaxProgramLen);
    if (!seq) {
      p.instrs = {Instr{Op::HaltZero}};
      return p;
    }
    for (const Nat& raw : *seq) {
      auto [opn, rest] = unpair_nat(raw);
      if (opn > 9) {
        p.instrs.push_back(Instr{Op::HaltZero});
        continue;
      }
      Op op = static_cast<Op>(to_u64(opn));
      Instr ins;
      ins.op = op;
      switch (op) {
        case Op::LoadImm: {
          auto [r, v] = unpair_nat(rest);
          ins.a = reg(r);
          ins.imm = v;
          break;
        }
        case Op::JumpIfZero: {
          auto [r, t] = unpair_nat(rest);
          ins.a = reg(r);
          ins.target = t > Nat(kMaxProgramLen) ? kMaxProgramLen : to_index(t);
          break;
        }
        case Op::Pair: {
          auto [d, xy] = unpair_nat(rest);
          auto [x, y] = unpair_nat(xy);
          ins.a = reg(d);
          ins.b = reg(x);
          ins.c = reg(y);
          break;
        }
        case Op::Halt:
          ins.a = reg(rest);
          break;
        default: {  // all two-register forms
          auto [d, s] = unpair_nat(rest);
          ins.a = reg(d);
          ins.b = reg(s);
          break;
        }
      }
      p.instrs.push_back(std::move(ins));
    }
    p.clamp_targets();
    return p;
  }

  // Gödel number.  Computed lazily: codes grow roughly exponentially with
  // instruction count, so only small programs may be materialized.
  const Nat& code() const {
    if (!code_) {
      if (!code_materializable())
        throw std::length_error("program code too large to materialize");
      std::vector<Nat> items;
      items.reserve(instrs.size());
      for (const auto& ins : instrs) items.push_back(encode_instr(ins));
      code_ = encode_seq(items);
    }
    return *code_;
  }

  bool code_materializable() const {
    if (code_) return true;
    std::size_t bits = 0;
    for (const auto& ins : instrs) {
      if (ins.op == Op::HaltZero) return false;  // decode-only, original kept in code_
      bits = std::max(bits, bit_length(encode_instr(ins)));
    }
    // bits(pair(a,b)) ~ 2*max(bits a, bits b); the nest amplifies by 2^len.
    if (instrs.size() <= 20) return true;
    if (instrs.size() >= 26) return false;
    return bits + 8 <= ((std::size_t{1} << 26) >> instrs.size());
  }

  // Highest register this program reads or writes.
  unsigned max_register() const {
    unsigned m = 0;
    for (const auto& i : instrs) {
      m = std::max(m, i.a);
      switch (i.op) {
        case Op::Pair: m = std::max({m, i.b, i.c}); break;
        case Op::Move:
        case Op::Add:
        case Op::Monus:
        case Op::UnpairL:
        case Op::UnpairR:
        case Op::Query: m = std::max(m, i.b); break;
        default: break;
      }
    }
    return m;
  }

 private:
  mutable std::optional<Nat> code_;

  static unsigned reg(const Nat& n) { return static_cast<unsigned>(to_u64(n % kNumRegs)); }

  void clamp_targets() {
    for (auto& i : instrs)
      if (i.op == Op::JumpIfZero && i.target > instrs.size()) i.target = instrs.size();
  }
};

struct Budget {
  std::uint64_t max_steps;
  explicit Budget(std::uint64_t s) : max_steps(s) {
    if (s < 1) throw std::invalid_argument("budget must be >= 1");
  }
};

// Three-valued oracle reply for T1-style query interfaces.
enum class AnswerTag { Defined, Undefined, Unknown };

struct OracleAnswer {
  AnswerTag tag;
  Nat value;
  static OracleAnswer defined(Nat v) { return {AnswerTag::Defined, std::move(v)}; }
  static OracleAnswer undefined() { return {AnswerTag::Undefined, 0}; }
  static OracleAnswer unknown() { return {AnswerTag::Unknown, 0}; }
};

using OracleFn = std::function<OracleAnswer(const Nat&)>;

// The oracle with empty domain: every query faults.
inline OracleFn no_oracle() {
  return [](const Nat&) { return OracleAnswer::undefined(); };
}

enum class OutcomeTag { Halts, OutOfBudget, OracleFault };

struct Outcome {
  OutcomeTag tag;
  Nat value;            // halting value, or the faulting query
  std::uint64_t steps;  // instructions executed

  bool halts() const { return tag == OutcomeTag::Halts; }
  bool halts_with(const Nat& v) const { return halts() && value == v; }
};

// Stepwise execution state, exposed for dovetailing.
class Machine {
 public:
  Machine(const Program& p, const Nat& input) : prog_(&p), regs_(kNumRegs, Nat(0)) {
    regs_[0] = input;
  }

  bool done() const { return done_.has_value(); }
  const Outcome& outcome() const { return *done_; }
  std::uint64_t steps() const { return steps_; }

  // Executes one instruction (if not already finished).
  void step(const OracleFn& oracle) {
    if (done_) return;
    if (pc_ >= prog_->instrs.size()) {
      done_ = Outcome{OutcomeTag::Halts, 0, steps_};
      return;
    }
    const Instr& i = prog_->instrs[pc_];
    ++steps_;
    switch (i.op) {
      case Op::LoadImm: regs_[i.a] = i.imm; ++pc_; break;
      case Op::Move: regs_[i.a] = regs_[i.b]; ++pc_; break;
      case Op::Add: regs_[i.a] += regs_[i.b]; ++pc_; break;
      case Op::Monus: regs_[i.a] = monus(regs_[i.a], regs_[i.b]); ++pc_; break;
      case Op::JumpIfZero:
        pc_ = (regs_[i.a] == 0) ? i.target : pc_ + 1;
        break;
      case Op::Pair: regs_[i.a] = pair_nat(regs_[i.b], regs_[i.c]); ++pc_; break;
      case Op::UnpairL: regs_[i.a] = unpair_nat(regs_[i.b]).first; ++pc_; break;
      case Op::UnpairR: regs_[i.a] = unpair_nat(regs_[i.b]).second; ++pc_; break;
      case Op::Query: {
        OracleAnswer ans = oracle(regs_[i.b]);
        switch (ans.tag) {
          case AnswerTag::Defined: regs_[i.a] = ans.value; ++pc_; break;
          case AnswerTag::Undefined:
            done_ = Outcome{OutcomeTag::OracleFault, regs_[i.b], steps_};
            return;
          case AnswerTag::Unknown:
            // An unresolved oracle can't certify anything: report exhaustion.
            done_ = Outcome{OutcomeTag::OutOfBudget, 0, steps_};
            return;
        }
        break;
      }
      case Op::Halt: done_ = Outcome{OutcomeTag::Halts, regs_[i.a], steps_}; return;
      case Op::HaltZero: done_ = Outcome{OutcomeTag::Halts, 0, steps_}; return;
    }
    if (i.op == Op::Pair || i.op == Op::Add) {
      if (bit_length(regs_[i.a]) > kMaxValueBits) {
        done_ = Outcome{OutcomeTag::OutOfBudget, 0, steps_};
        return;
      }
    }
  }

 private:
  const Program* prog_;
  std::vector<Nat> regs_;
  std::size_t pc_ = 0;
  std::uint64_t steps_ = 0;
  std::optional<Outcome> done_;
};

inline Outcome run(const Program& p, const Nat& input, const OracleFn& oracle,
                   const Budget& budget) {
  Machine m(p, input);
  while (!m.done() && m.steps() < budget.max_steps) m.step(oracle);
  if (m.done()) return m.outcome();
  return Outcome{OutcomeTag::OutOfBudget, 0, m.steps()};
}

struct DovetailCandidate {
  Program program;
  Nat input;
  OracleFn oracle;
};

// Round-robin interleaving, one step per still-live candidate per round; the
// budget caps the steps spent on any single candidate.  Returns the first
// halting candidate (fewest steps first, ties to the lower index).
inline std::optional<std::pair<std::size_t, Nat>> dovetail(
    const std::vector<DovetailCandidate>& candidates, const Budget& budget) {
  std::vector<Machine> machines;
  machines.reserve(candidates.size());
  for (const auto& c : candidates) machines.emplace_back(c.program, c.input);
  for (std::uint64_t round = 0; round < budget.max_steps; ++round) {
    bool any_live = false;
    for (std::size_t i = 0; i < machines.size(); ++i) {
      if (machines[i].done()) continue;
      machines[i].step(candidates[i].oracle);
      if (machines[i].done() && machines[i].outcome().halts())
        return std::make_pair(i, machines[i].outcome().value);
      if (!machines[i].done()) any_live = true;
    }
    if (!any_live) break;
  }
  return std::nullopt;
}

}  // namespace anm
