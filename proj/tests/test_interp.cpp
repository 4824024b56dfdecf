#include <catch2/catch_amalgamated.hpp>

#include "anm/interp.hpp"
#include "util.hpp"

using namespace anm;
using namespace anm::test;

namespace {

// Compares a simulated run of `code` against direct execution.  The
// interpreter needs a few hundred host steps per simulated step, so a host
// budget of 60k covers every directly-halting case below while staying cheap
// on divergent ones.
void check_sim(const Program& u, const Nat& code, const Nat& input, const OracleFn& o) {
  Outcome direct = run(Program::from_code(code), input, o, Budget(100));
  Outcome sim = run(u, pair_nat(code, input), o, Budget(60000));
  switch (direct.tag) {
    case OutcomeTag::Halts:
      REQUIRE(sim.halts_with(direct.value));
      break;
    case OutcomeTag::OracleFault:
      REQUIRE(sim.tag == OutcomeTag::OracleFault);
      REQUIRE(sim.value == direct.value);
      break;
    case OutcomeTag::OutOfBudget:
      REQUIRE(sim.tag == OutcomeTag::OutOfBudget);
      break;
  }
}

}  // namespace

TEST_CASE("universal program simulates every small code") {
  Program u = universal_program();
  OracleFn o = table_oracle({{0, 3}, {1, 0}, {2, 7}, {3, 1}, {4, 4}, {5, 0}});
  for (unsigned c = 0; c < 300; ++c)
    for (unsigned m : {0u, 1u, 5u}) check_sim(u, c, m, o);
}

TEST_CASE("universal program on canonical programs") {
  Program u = universal_program();
  OracleFn o = table_oracle({{5, 1}, {7, 42}});
  CHECK(run(u, pair_nat(oracle_echo().code(), 7), o, Budget(100000)).halts_with(42));
  CHECK(run(u, pair_nat(oracle_negate().code(), 5), o, Budget(100000)).halts_with(0));
  CHECK(run(u, pair_nat(flip_program().code(), 0), o, Budget(100000)).halts_with(1));
  CHECK(run(u, pair_nat(halt_const(9).code(), 123), o, Budget(100000)).halts_with(9));
  // fault passthrough carries the simulated query
  Outcome f = run(u, pair_nat(oracle_echo().code(), 9), o, Budget(100000));
  CHECK(f.tag == OutcomeTag::OracleFault);
  CHECK(f.value == 9);
  // divergence stays divergence
  CHECK(run(u, pair_nat(loop_forever().code(), 0), o, Budget(100000)).tag ==
        OutcomeTag::OutOfBudget);
}

TEST_CASE("universal program on random programs") {
  Program u = universal_program();
  std::mt19937_64 seed(57);
  for (int i = 0; i < 120; ++i) {
    Rng rng(seed());
    Program p = random_program(rng, 6);
    OracleFn o = random_table_oracle(rng, 24, 9);
    check_sim(u, p.code(), pick(rng, 0, 15), o);
  }
}

TEST_CASE("budgeted interpreter counts simulated steps") {
  auto budgeted_u = [](std::uint64_t steps) {
    Asm a;
    Asm::Label on_halt = a.label();
    Asm::Label on_budget = a.label();
    a.li(12, steps);
    InterpSpec spec;
    spec.budgeted = true;
    spec.on_halt = on_halt;
    spec.on_budget = on_budget;
    emit_interpreter(a, spec);
    a.bind(on_halt);
    a.li(6, 0);
    a.pair(7, 6, 9);  // pair(0, value)
    a.halt(7);
    a.bind(on_budget);
    a.li(6, 1);
    a.li(7, 0);
    a.pair(8, 6, 7);  // pair(1, 0)
    a.halt(8);
    return a.build();
  };
  // halt_const(4) needs 2 steps
  Program u3 = budgeted_u(3);
  Program u1 = budgeted_u(1);
  CHECK(run(u3, pair_nat(halt_const(4).code(), 0), no_oracle(), Budget(100000))
            .halts_with(pair_nat(0, 4)));
  CHECK(run(u1, pair_nat(halt_const(4).code(), 0), no_oracle(), Budget(100000))
            .halts_with(pair_nat(1, 0)));
  CHECK(run(u3, pair_nat(loop_forever().code(), 0), no_oracle(), Budget(100000))
            .halts_with(pair_nat(1, 0)));
}

TEST_CASE("rewrite_oracle_calls translates queries through h") {
  // e asks about 4 and returns the reply; h computes membership in the evens
  // from an oracle that already codes it.
  Program e({Instr::li(1, 4), Instr::query(2, 1), Instr::halt(2)});
  std::map<Nat, Nat> atab;
  for (unsigned n = 0; n < 16; ++n) atab[n] = (n % 2 == 0) ? 1 : 0;
  OracleFn a_oracle = table_oracle(atab);
  Program rewired = rewrite_oracle_calls(e, oracle_echo());
  CHECK(run(rewired, 0, a_oracle, Budget(1000000)).halts_with(1));

  // no queries: behaves identically
  Program plain = halt_const(6);
  CHECK(run(rewrite_oracle_calls(plain, oracle_echo()), 0, a_oracle, Budget(1000000))
            .halts_with(6));

  // diverging h makes the rewrite diverge on any query
  CHECK(run(rewrite_oracle_calls(e, loop_forever()), 0, a_oracle, Budget(200000)).tag ==
        OutcomeTag::OutOfBudget);
}

TEST_CASE("rewrite law on random quadruples") {
  std::mt19937_64 seed(61);
  int meaningful = 0;
  for (int i = 0; i < 60; ++i) {
    Rng rng(seed());
    // A is a random total table on [0, 48); h in {echo, negate} computes
    // 1_B from it; B's T1 oracle is h's value on that domain.
    std::map<Nat, Nat> atab;
    for (unsigned n = 0; n < 48; ++n) atab[n] = pick(rng, 0, 1);
    OracleFn a_oracle = table_oracle(atab);
    Program h = (i % 2 == 0) ? oracle_echo() : oracle_negate();
    std::map<Nat, Nat> btab;
    for (auto& [n, v] : atab) btab[n] = run(h, n, a_oracle, Budget(100)).value;
    OracleFn b_oracle = table_oracle(btab);

    Program e = random_program(rng, 6);
    Nat input = pick(rng, 0, 10);
    Outcome over_b = run(e, input, b_oracle, Budget(120));
    if (over_b.tag == OutcomeTag::OutOfBudget) continue;
    Outcome rewired = run(rewrite_oracle_calls(e, h), input, a_oracle, Budget(1000000));
    ++meaningful;
    REQUIRE(same_result(over_b, rewired));
  }
  CHECK(meaningful > 30);
}
