#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace anm {

// Unbounded natural number.  Gödel codes of even modest programs exceed any
// fixed-width integer, so everything that can hold a code is a Nat.
using Nat = boost::multiprecision::cpp_int;

// Truncated subtraction: a - b clamped at zero.
inline Nat monus(const Nat& a, const Nat& b) { return a > b ? Nat(a - b) : Nat(0); }

inline std::uint64_t to_u64(const Nat& n) {
  if (n > Nat(UINT64_MAX)) throw std::overflow_error("Nat too large for u64");
  return n.convert_to<std::uint64_t>();
}

inline std::size_t to_index(const Nat& n) {
  if (n > Nat(SIZE_MAX)) throw std::overflow_error("Nat too large for index");
  return n.convert_to<std::size_t>();
}

inline bool fits_u64(const Nat& n) { return n <= Nat(UINT64_MAX); }

inline std::string to_string(const Nat& n) { return n.str(); }

inline Nat nat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty natural literal");
  for (char c : s)
    if (c < '0' || c > '9') throw std::invalid_argument("bad natural literal: " + s);
  return Nat(s);
}

inline std::size_t bit_length(const Nat& n) {
  return n == 0 ? 0 : boost::multiprecision::msb(n) + 1;
}

}  // namespace anm
