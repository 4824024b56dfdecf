#pragma once

#include <algorithm>
#include <optional>

#include "anm/assembly.hpp"
#include "anm/vm.hpp"

namespace anm {

inline bool writes_reg(const Program& p, unsigned r) {
  for (const auto& i : p.instrs) {
    switch (i.op) {
      case Op::JumpIfZero:
      case Op::Halt: break;
      default:
        if (i.a == r) return true;
    }
  }
  return false;
}

inline bool touches_reg(const Program& p, unsigned r) {
  for (const auto& i : p.instrs) {
    if (i.a == r) return true;
    switch (i.op) {
      case Op::Pair:
        if (i.b == r || i.c == r) return true;
        break;
      case Op::Move:
      case Op::Add:
      case Op::Monus:
      case Op::UnpairL:
      case Op::UnpairR:
      case Op::Query:
        if (i.b == r) return true;
        break;
      default: break;
    }
  }
  return false;
}

inline bool is_oracle_free(const Program& p) {
  return std::none_of(p.instrs.begin(), p.instrs.end(),
                      [](const Instr& i) { return i.op == Op::Query; });
}

// --- canonical programs ----------------------------------------------------

// Queries the oracle at the input and returns the reply: phi_echo^f = f.
inline Program oracle_echo() {
  return Program({Instr::query(1, 0), Instr::halt(1)});
}

// Returns 1 - f(n) clamped to booleans.
inline Program oracle_negate() {
  return Program({Instr::query(1, 0), Instr::li(2, 1), Instr::monus(2, 1), Instr::halt(2)});
}

// Never halts (unconditional self-jump through the zero register).
inline Program loop_forever() {
  return Program({Instr::jz(kZeroReg, 0)});
}

inline Program halt_const(const Nat& k) {
  return Program({Instr::li(1, k), Instr::halt(1)});
}

// Exchanges 0 and 1 (everything else goes to 0).
inline Program flip_program() {
  return Program({Instr::li(1, 1), Instr::monus(1, 0), Instr::halt(1)});
}

// --- s-m-n specialization ---------------------------------------------------

// Returns e' with phi_e'^O(y) = phi_e^O(pair(x, y)); the specialized program
// costs exactly three extra prologue steps.
inline Program smn(const Program& e, const Nat& x) {
  std::vector<Instr> out;
  out.reserve(e.size() + 3);
  out.push_back(Instr::li(1, x));
  out.push_back(Instr::pair(0, 1, 0));
  out.push_back(Instr::li(1, 0));
  for (Instr i : e.instrs) {
    if (i.op == Op::JumpIfZero) i.target += 3;
    out.push_back(std::move(i));
  }
  return Program(out);
}

// --- halt-site rewiring ------------------------------------------------------

// Shared skeleton: each instruction of `e` becomes a block; halts are routed
// (with the value moved to r0) into an epilogue appended at the end.  Jump
// targets are remapped exactly; falling off e's end reaches the epilogue with
// r0 = 0.
inline Program with_epilogue(const Program& e, const std::vector<Instr>& epilogue,
                             bool zero_registers_before_epilogue) {
  const std::size_t len = e.size();
  std::vector<std::size_t> start(len + 1);
  std::size_t off = 0;
  for (std::size_t j = 0; j < len; ++j) {
    start[j] = off;
    off += (e.instrs[j].op == Op::Halt || e.instrs[j].op == Op::HaltZero) ? 3 : 1;
  }
  start[len] = off;            // fall-off shim: li r0, 0
  std::size_t zero_base = off + 1;
  std::size_t epi = zero_base + (zero_registers_before_epilogue ? (kNumRegs - 1) : 0);

  std::vector<Instr> out;
  out.reserve(epi + epilogue.size());
  for (std::size_t j = 0; j < len; ++j) {
    const Instr& i = e.instrs[j];
    if (i.op == Op::Halt || i.op == Op::HaltZero) {
      out.push_back(i.op == Op::Halt ? Instr::mov(0, i.a) : Instr::li(0, 0));
      out.push_back(Instr::li(1, 0));
      out.push_back(Instr::jz(1, zero_base));
    } else if (i.op == Op::JumpIfZero) {
      Instr jz = i;
      jz.target = start[std::min(i.target, len)];
      out.push_back(jz);
    } else {
      out.push_back(i);
    }
  }
  out.push_back(Instr::li(0, 0));  // fall-off: value 0, then continue below
  if (zero_registers_before_epilogue)
    for (unsigned r = 1; r < kNumRegs; ++r) out.push_back(Instr::li(r, 0));
  for (Instr i : epilogue) {
    if (i.op == Op::JumpIfZero) i.target += epi;
    out.push_back(std::move(i));
  }
  return Program(out);
}

// Returns e' with phi_e'^O = phi_t . phi_e^O; t must be oracle-free.
inline Program postcompose(const Program& t, const Program& e) {
  if (!is_oracle_free(t)) throw std::invalid_argument("postcompose: t must not query the oracle");
  // The epilogue re-runs t on a fresh machine state with r0 = phi_e's value.
  return with_epilogue(e, t.instrs, /*zero_registers_before_epilogue=*/true);
}

// Returns e' computing oracle(phi_t(n)); used to push a many-one reduction
// in front of a decoding oracle.
inline Program then_query(const Program& t) {
  if (!is_oracle_free(t)) throw std::invalid_argument("then_query: t must not query the oracle");
  return with_epilogue(t, {Instr::query(1, 0), Instr::halt(1)},
                       /*zero_registers_before_epilogue=*/false);
}

// --- inline execution --------------------------------------------------------

// Options for splicing a program into a larger one as a resumable block.
struct InlineOpts {
  unsigned value_reg;                   // halting value lands here (0 on fall-off)
  Asm::Label after;                     // control continues here
  unsigned scratch;                     // clobbered by bridges
  std::optional<unsigned> budget_reg;   // if set: countdown, bail when exhausted
  Asm::Label bail = 0;                  // jump target on exhausted budget
};

// Emits `body` so that its halts land at opts.after with the value in
// opts.value_reg.  The caller is responsible for setting r0 (and zeroing the
// body's working registers) before jumping to the returned entry label.
inline Asm::Label emit_inline_exec(Asm& a, const Program& body, const InlineOpts& o) {
  if (touches_reg(body, o.scratch))
    throw std::invalid_argument("inline_exec: body uses the scratch register");
  if (o.budget_reg && touches_reg(body, *o.budget_reg))
    throw std::invalid_argument("inline_exec: body uses the budget register");

  const std::size_t len = body.size();
  std::vector<Asm::Label> at(len + 1);
  for (auto& l : at) l = a.label();

  auto goto_after = [&] {
    a.li(o.scratch, 0);
    a.jz(o.scratch, o.after);
  };
  for (std::size_t j = 0; j < len; ++j) {
    a.bind(at[j]);
    if (o.budget_reg) {
      a.jz(*o.budget_reg, o.bail);
      a.li(o.scratch, 1);
      a.monus(*o.budget_reg, o.scratch);
    }
    const Instr& i = body.instrs[j];
    switch (i.op) {
      case Op::Halt:
        a.mov(o.value_reg, i.a);
        goto_after();
        break;
      case Op::HaltZero:
        a.li(o.value_reg, 0);
        goto_after();
        break;
      case Op::JumpIfZero:
        a.jz(i.a, at[std::min(i.target, len)]);
        break;
      default:
        a.splice({i});
        break;
    }
  }
  a.bind(at[len]);
  a.li(o.value_reg, 0);
  goto_after();
  return at[0];
}

}  // namespace anm
