#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "anm/nat.hpp"

namespace anm {

// Cantor pairing, the tuple primitive everything else is built from:
//   pair(a, b) = (a+b)(a+b+1)/2 + b
// It is a bijection N x N -> N, monotone in both arguments.
inline Nat pair_nat(const Nat& a, const Nat& b) {
  Nat s = a + b;
  return s * (s + 1) / 2 + b;
}

inline std::pair<Nat, Nat> unpair_nat(const Nat& n) {
  // w = floor((sqrt(8n+1)-1)/2) is the diagonal index.
  Nat w = (boost::multiprecision::sqrt(Nat(8 * n + 1)) - 1) / 2;
  Nat t = w * (w + 1) / 2;
  Nat b = n - t;
  Nat a = w - b;
  return {a, b};
}

// Sequences are length-prefixed right-nested pairs:
//   []            -> pair(0, 0) = 0
//   [x]           -> pair(1, x)
//   [x0,...,xk-1] -> pair(k, pair(x0, pair(x1, ... pair(xk-2, xk-1)...)))
inline Nat encode_seq(const std::vector<Nat>& xs) {
  if (xs.empty()) return pair_nat(0, 0);
  Nat payload = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) payload = pair_nat(xs[i], payload);
  return pair_nat(Nat(xs.size()), payload);
}

// Total decoder; max_len caps how many elements a hostile code may claim.
inline std::optional<std::vector<Nat>> decode_seq(const Nat& n, std::size_t max_len) {
  auto [k, payload] = unpair_nat(n);
  if (k > Nat(max_len)) return std::nullopt;
  std::size_t len = to_index(k);
  std::vector<Nat> xs;
  xs.reserve(len);
  for (std::size_t i = 0; i + 1 < len; ++i) {
    auto [head, rest] = unpair_nat(payload);
    xs.push_back(head);
    payload = rest;
  }
  if (len > 0) xs.push_back(payload);
  return xs;
}

inline std::vector<Nat> decode_seq_strict(const Nat& n) {
  auto xs = decode_seq(n, SIZE_MAX);
  return *xs;
}

enum class Side { Left, Right };

// Labeled disjoint union tag: left v -> <0,v>, right v -> <1,v>.
inline Nat sum_tag(Side side, const Nat& v) {
  return pair_nat(side == Side::Left ? 0 : 1, v);
}

inline std::pair<Side, Nat> sum_untag(const Nat& n) {
  auto [tag, v] = unpair_nat(n);
  if (tag == 0) return {Side::Left, v};
  if (tag == 1) return {Side::Right, v};
  // Not in the image of either tag; callers that care must check first.
  throw std::invalid_argument("sum_untag: tag is neither 0 nor 1");
}

inline bool is_sum_tagged(const Nat& n) {
  auto [tag, v] = unpair_nat(n);
  return tag == 0 || tag == 1;
}

// <p,q,m,n> keys (e.g. for the T1 meet) use the sequence codec.
inline Nat tuple4(const Nat& a, const Nat& b, const Nat& c, const Nat& d) {
  return encode_seq({a, b, c, d});
}

}  // namespace anm
