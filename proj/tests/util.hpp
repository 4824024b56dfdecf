#pragma once

#include <map>
#include <random>
#include <vector>

#include "anm/transforms.hpp"
#include "anm/vm.hpp"

namespace anm::test {

using Rng = std::mt19937_64;

inline unsigned pick(Rng& rng, unsigned lo, unsigned hi) {
  return std::uniform_int_distribution<unsigned>(lo, hi)(rng);
}

// Small random programs over r0..r5 with bounded immediates.
inline Program random_program(Rng& rng, unsigned max_len = 8, bool allow_query = true) {
  unsigned len = pick(rng, 1, max_len);
  std::vector<Instr> code;
  for (unsigned j = 0; j < len; ++j) {
    unsigned op = pick(rng, 0, allow_query ? 9 : 8);
    if (!allow_query && op == 8) op = 9;
    unsigned a = pick(rng, 0, 5), b = pick(rng, 0, 5), c = pick(rng, 0, 5);
    switch (op) {
      case 0: code.push_back(Instr::li(a, pick(rng, 0, 20))); break;
      case 1: code.push_back(Instr::mov(a, b)); break;
      case 2: code.push_back(Instr::add(a, b)); break;
      case 3: code.push_back(Instr::monus(a, b)); break;
      case 4: code.push_back(Instr::jz(a, pick(rng, 0, len))); break;
      case 5: code.push_back(Instr::pair(a, b, c)); break;
      case 6: code.push_back(Instr::unpl(a, b)); break;
      case 7: code.push_back(Instr::unpr(a, b)); break;
      case 8: code.push_back(Instr::query(a, b)); break;
      default: code.push_back(Instr::halt(a)); break;
    }
  }
  return Program(code);
}

// Finite partial T1 oracle given by a table.
inline OracleFn table_oracle(std::map<Nat, Nat> table) {
  return [table = std::move(table)](const Nat& q) {
    auto it = table.find(q);
    if (it == table.end()) return OracleAnswer::undefined();
    return OracleAnswer::defined(it->second);
  };
}

inline OracleFn random_table_oracle(Rng& rng, unsigned domain = 32, unsigned max_val = 20) {
  std::map<Nat, Nat> t;
  for (unsigned n = 0; n < domain; ++n) t[Nat(n)] = Nat(pick(rng, 0, max_val));
  return table_oracle(std::move(t));
}

inline bool same_result(const Outcome& x, const Outcome& y) {
  return x.tag == y.tag && (x.tag == OutcomeTag::OutOfBudget || x.value == y.value);
}

}  // namespace anm::test
