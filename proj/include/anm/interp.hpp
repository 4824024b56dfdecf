#pragma once

#include <optional>

#include "anm/assembly.hpp"
#include "anm/transforms.hpp"

namespace anm {

// Emits a self-interpreter: a block that, entered with r0 = pair(code, input),
// simulates the coded program instruction by instruction and leaves its
// halting value in r9.  Oracle queries of the simulated program either pass
// through to the real oracle or (two-level mode) run a fixed inner program
// whose own queries pass through.  Simulated semantics match Program::from_code
// exactly: ill-formed opcodes halt with 0, jump targets clamp to the length,
// falling off the end halts with 0.
//
// Register map: r1 code, r3 pc, r4 regs 0-7, r5 regs 8-15 (each packed as
// right-nested pairs; the all-zero pack is 0), r9 argument/result, r2 call
// link, r0/r6/r7/r8/r10/r11 scratch.  Budgeted blocks count simulated steps
// down in r12; two-level blocks use r13 (level) and r14 (saved outer state).
// r15 is the usual zero.
struct InterpSpec {
  bool budgeted = false;                // caller presets r12 with the step budget
  std::optional<Nat> inner_code;       // two-level mode: queries run this code
  std::optional<Asm::Label> on_halt;   // exit with value in r9 (default: halt r9)
  std::optional<Asm::Label> on_budget; // budgeted exhaustion exit
};

class InterpEmitter {
 public:
  InterpEmitter(Asm& a, InterpSpec spec) : a_(a), spec_(std::move(spec)) {}

  // Returns the entry label.
  Asm::Label emit() {
    getreg_ = a_.label();
    setreg_ = a_.label();
    loop_ = a_.label();
    simhalt0_ = a_.label();
    exit_ = a_.label();

    Asm::Label entry = a_.here();
    // r0 = pair(code, input)
    a_.unpl(1, 0);
    a_.unpr(9, 0);
    a_.li(3, 0);
    a_.pair(4, 9, kZeroReg);  // packLo = pair(input, 0...0)
    a_.li(5, 0);
    if (spec_.inner_code) {
      a_.li(13, 0);
      a_.li(14, 0);
    }

    a_.bind(loop_);
    if (spec_.budgeted) {
      Asm::Label go = a_.label();
      Asm::Label out = a_.label();
      a_.jz(12, out);
      a_.jmp(go);
      a_.bind(out);
      if (spec_.on_budget)
        a_.jmp(*spec_.on_budget);
      else
        a_.halt(9);
      a_.bind(go);
      a_.li(8, 1);
      a_.monus(12, 8);
    }
    // pc >= len -> simulated fall-off
    a_.unpl(6, 1);
    a_.mov(7, 6);
    a_.monus(7, 3);
    a_.jz(7, simhalt0_);
    // fetch instruction #pc
    a_.unpr(0, 1);
    a_.mov(7, 3);
    {
      Asm::Label fetch = a_.here();
      Asm::Label fetched = a_.label();
      a_.jz(7, fetched);
      a_.unpr(0, 0);
      a_.li(8, 1);
      a_.monus(7, 8);
      a_.jmp(fetch);
      a_.bind(fetched);
    }
    {
      // last element of the nest is the bare item
      Asm::Label islast = a_.label();
      a_.unpl(6, 1);
      a_.li(8, 1);
      a_.monus(6, 8);
      a_.monus(6, 3);  // (len-1) - pc
      a_.jz(6, islast);
      a_.unpl(0, 0);
      a_.bind(islast);
    }
    a_.unpl(2, 0);  // opcode
    a_.unpr(0, 0);  // operand payload
    a_.li(8, 1);
    a_.add(3, 8);  // pc += 1

    // dispatch ladder
    std::vector<Asm::Label> arms;
    for (int i = 0; i < 10; ++i) arms.push_back(a_.label());
    for (int i = 0; i < 10; ++i) {
      if (i > 0) {
        a_.li(8, 1);
        a_.monus(2, 8);
      }
      a_.jz(2, arms[i]);
    }
    a_.jmp(simhalt0_);  // opcode >= 10: halt 0

    emit_li(arms[0]);
    emit_mov(arms[1]);
    emit_add(arms[2]);
    emit_monus(arms[3]);
    emit_jz(arms[4]);
    emit_pair(arms[5]);
    emit_unpair(arms[6], true);
    emit_unpair(arms[7], false);
    emit_query(arms[8]);
    emit_halt(arms[9]);

    // simulated halt with value 0
    a_.bind(simhalt0_);
    a_.li(9, 0);
    a_.jmp(exit_);

    emit_exit();
    emit_getreg_sub();
    emit_setreg_sub();
    return entry;
  }

 private:
  Asm& a_;
  InterpSpec spec_;
  Asm::Label getreg_ = 0, setreg_ = 0, loop_ = 0, simhalt0_ = 0, exit_ = 0;
  std::vector<Asm::Label> getreg_sites_, setreg_sites_;

  // in: r9 = raw register index; out: r9 = value; clobbers r6, r8, r10
  void call_getreg() {
    a_.li(2, Nat(getreg_sites_.size()));
    a_.jmp(getreg_);
    getreg_sites_.push_back(a_.here());
  }
  // in: r9 = raw register index, r0 = value; clobbers r0, r6, r7, r8, r10, r11
  void call_setreg() {
    a_.li(2, Nat(setreg_sites_.size()));
    a_.jmp(setreg_);
    setreg_sites_.push_back(a_.here());
  }

  void emit_li(Asm::Label arm) {
    a_.bind(arm);
    a_.unpl(9, 0);
    a_.unpr(0, 0);
    call_setreg();
    a_.jmp(loop_);
  }

  void emit_mov(Asm::Label arm) {
    a_.bind(arm);
    a_.unpl(11, 0);
    a_.unpr(9, 0);
    call_getreg();
    a_.mov(0, 9);
    a_.mov(9, 11);
    call_setreg();
    a_.jmp(loop_);
  }

  void emit_add(Asm::Label arm) {
    a_.bind(arm);
    a_.unpl(11, 0);
    a_.unpr(9, 0);
    call_getreg();  // vs
    a_.mov(0, 9);
    a_.mov(9, 11);
    call_getreg();  // vd
    a_.add(0, 9);
    a_.mov(9, 11);
    call_setreg();
    a_.jmp(loop_);
  }

  void emit_monus(Asm::Label arm) {
    a_.bind(arm);
    a_.unpl(11, 0);
    a_.unpr(9, 0);
    call_getreg();  // vs
    a_.mov(0, 9);
    a_.mov(9, 11);
    call_getreg();  // vd
    a_.mov(6, 0);   // vs
    a_.mov(0, 9);   // vd
    a_.monus(0, 6);
    a_.mov(9, 11);
    call_setreg();
    a_.jmp(loop_);
  }

  void emit_jz(Asm::Label arm) {
    a_.bind(arm);
    a_.unpl(9, 0);
    a_.unpr(11, 0);  // target
    call_getreg();
    Asm::Label taken = a_.label();
    a_.jz(9, taken);
    a_.jmp(loop_);
    a_.bind(taken);
    a_.mov(3, 11);
    a_.unpl(6, 1);  // len
    a_.mov(7, 11);
    a_.monus(7, 6);  // target - len
    a_.jz(7, loop_);
    a_.mov(3, 6);  // clamp to len (fall-off on next pass)
    a_.jmp(loop_);
  }

  void emit_pair(Asm::Label arm) {
    a_.bind(arm);
    a_.unpl(11, 0);
    a_.unpr(0, 0);  // pair(x, y)
    a_.unpl(9, 0);
    call_getreg();  // vx
    a_.mov(7, 9);
    a_.unpr(9, 0);
    call_getreg();  // vy
    a_.pair(0, 7, 9);
    a_.mov(9, 11);
    call_setreg();
    a_.jmp(loop_);
  }

  void emit_unpair(Asm::Label arm, bool left) {
    a_.bind(arm);
    a_.unpl(11, 0);
    a_.unpr(9, 0);
    call_getreg();
    if (left)
      a_.unpl(0, 9);
    else
      a_.unpr(0, 9);
    a_.mov(9, 11);
    call_setreg();
    a_.jmp(loop_);
  }

  void emit_query(Asm::Label arm) {
    a_.bind(arm);
    a_.unpl(11, 0);
    a_.unpr(9, 0);
    call_getreg();  // query value
    if (!spec_.inner_code) {
      a_.query(0, 9);
      a_.mov(9, 11);
      call_setreg();
      a_.jmp(loop_);
      return;
    }
    Asm::Label outer = a_.label();
    a_.jz(13, outer);
    // already at inner level: a real query
    a_.query(0, 9);
    a_.mov(9, 11);
    call_setreg();
    a_.jmp(loop_);
    // outer level: stash (dst, code, pc, packs) and start the inner program
    a_.bind(outer);
    a_.pair(8, 4, 5);
    a_.pair(7, 3, 8);
    a_.pair(6, 1, 7);
    a_.pair(14, 11, 6);
    a_.li(1, *spec_.inner_code);
    a_.li(3, 0);
    a_.pair(4, 9, kZeroReg);  // inner input = queried value
    a_.li(5, 0);
    a_.li(13, 1);
    a_.jmp(loop_);
  }

  void emit_halt(Asm::Label arm) {
    a_.bind(arm);
    a_.mov(9, 0);
    call_getreg();
    a_.jmp(exit_);
  }

  void emit_exit() {
    a_.bind(exit_);
    if (spec_.inner_code) {
      Asm::Label real = a_.label();
      a_.jz(13, real);
      // inner program halted: restore outer state, deliver value as the reply
      a_.unpl(11, 14);
      a_.unpr(6, 14);
      a_.unpl(1, 6);
      a_.unpr(6, 6);
      a_.unpl(3, 6);
      a_.unpr(6, 6);
      a_.unpl(4, 6);
      a_.unpr(5, 6);
      a_.li(13, 0);
      a_.mov(0, 9);
      a_.mov(9, 11);
      call_setreg();
      a_.jmp(loop_);
      a_.bind(real);
    }
    if (spec_.on_halt)
      a_.jmp(*spec_.on_halt);
    else
      a_.halt(9);
  }

  void emit_return_ladder(const std::vector<Asm::Label>& sites) {
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (i > 0) {
        a_.li(8, 1);
        a_.monus(2, 8);
      }
      if (i + 1 == sites.size())
        a_.jmp(sites[i]);
      else
        a_.jz(2, sites[i]);
    }
  }

  void emit_getreg_sub() {
    a_.bind(getreg_);
    // index mod 16
    {
      Asm::Label top = a_.here();
      Asm::Label done = a_.label();
      Asm::Label sub = a_.label();
      a_.li(8, 16);
      a_.mov(6, 8);
      a_.monus(6, 9);
      a_.jz(6, sub);  // idx >= 16
      a_.jmp(done);
      a_.bind(sub);
      a_.monus(9, 8);
      a_.jmp(top);
      a_.bind(done);
    }
    // pick pack, slot in r9
    Asm::Label hi = a_.label();
    Asm::Label walk = a_.label();
    a_.li(8, 8);
    a_.mov(6, 8);
    a_.monus(6, 9);
    a_.jz(6, hi);
    a_.mov(10, 4);
    a_.jmp(walk);
    a_.bind(hi);
    a_.monus(9, 8);
    a_.mov(10, 5);
    a_.bind(walk);
    a_.mov(6, 9);  // save slot
    {
      Asm::Label top = a_.here();
      Asm::Label done = a_.label();
      a_.jz(9, done);
      a_.unpr(10, 10);
      a_.li(8, 1);
      a_.monus(9, 8);
      a_.jmp(top);
      a_.bind(done);
    }
    Asm::Label last = a_.label();
    a_.li(8, 7);
    a_.monus(8, 6);  // 0 iff slot == 7
    a_.jz(8, last);
    a_.unpl(10, 10);
    a_.bind(last);
    a_.mov(9, 10);
    emit_return_ladder(getreg_sites_);
  }

  void emit_setreg_sub() {
    a_.bind(setreg_);
    // index mod 16
    {
      Asm::Label top = a_.here();
      Asm::Label done = a_.label();
      Asm::Label sub = a_.label();
      a_.li(8, 16);
      a_.mov(6, 8);
      a_.monus(6, 9);
      a_.jz(6, sub);
      a_.jmp(done);
      a_.bind(sub);
      a_.monus(9, 8);
      a_.jmp(top);
      a_.bind(done);
    }
    Asm::Label hi = a_.label();
    Asm::Label done = a_.label();
    a_.li(8, 8);
    a_.mov(6, 8);
    a_.monus(6, 9);
    a_.jz(6, hi);
    emit_setreg_half(4, done);
    a_.bind(hi);
    a_.li(8, 8);
    a_.monus(9, 8);
    emit_setreg_half(5, done);
    a_.bind(done);
    emit_return_ladder(setreg_sites_);
  }

  // Replaces slot r9 of the pack in register `pack` with r0, then jumps to
  // `done`.  Uses r6, r7, r8, r10, r11.
  void emit_setreg_half(unsigned pack, Asm::Label done) {
    a_.mov(11, 9);  // original slot
    a_.li(10, 0);   // reversed prefix (heads stored +1, empty = 0)
    {
      Asm::Label top = a_.here();
      Asm::Label out = a_.label();
      a_.jz(9, out);
      a_.unpl(6, pack);
      a_.li(8, 1);
      a_.add(6, 8);
      a_.pair(10, 6, 10);
      a_.unpr(pack, pack);
      a_.monus(9, 8);
      a_.jmp(top);
      a_.bind(out);
    }
    {
      Asm::Label lastslot = a_.label();
      Asm::Label unwind = a_.label();
      a_.li(8, 7);
      a_.monus(8, 11);
      a_.jz(8, lastslot);
      a_.unpr(6, pack);
      a_.pair(pack, 0, 6);
      a_.jmp(unwind);
      a_.bind(lastslot);
      a_.mov(pack, 0);
      a_.bind(unwind);
    }
    {
      Asm::Label top = a_.here();
      a_.jz(10, done);
      a_.unpl(6, 10);
      a_.li(8, 1);
      a_.monus(6, 8);
      a_.unpr(10, 10);
      a_.pair(pack, 6, pack);
      a_.jmp(top);
    }
  }
};

inline Asm::Label emit_interpreter(Asm& a, InterpSpec spec) {
  return InterpEmitter(a, std::move(spec)).emit();
}

// The universal program U with phi_U^O(pair(p, m)) = phi_p^O(m).
inline Program universal_program() {
  Asm a;
  emit_interpreter(a, InterpSpec{});
  return a.build();
}

// Returns e' behaving like e except that every oracle call runs h instead
// (h's own queries hit the real oracle): if phi_h^A computes 1_B on every
// value e queries, then e' over A computes what e computes over B.
inline Program rewrite_oracle_calls(const Program& e, const Program& h) {
  Asm a;
  a.li(6, e.code());
  a.pair(0, 6, 0);  // r0 = pair(code_e, input)
  InterpSpec spec;
  spec.inner_code = h.code();
  emit_interpreter(a, std::move(spec));
  return a.build();
}

}  // namespace anm
