#pragma once

// Brute-force reference implementations used only by tests. None of these
// call into the code paths they are used to check.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "popdiff/f2n.hpp"
#include "popdiff/rational.hpp"

namespace popdiff {

// Lets GoogleTest print sets in failure messages.
inline void PrintTo(const DenseSet& s, std::ostream* os) {
  *os << "{n=" << s.dim().n() << " |S|=" << s.size() << ":";
  int shown = 0;
  s.for_each([&](Point p) {
    if (shown++ < 16) *os << ' ' << p;
  });
  *os << (s.size() > 16 ? " ...}" : "}");
}

}  // namespace popdiff

namespace popdiff::oracle {

inline int weight(std::uint64_t x) {
  int w = 0;
  for (; x; x >>= 1) w += static_cast<int>(x & 1);
  return w;
}

inline std::vector<bool> members(const DenseSet& s) {
  std::vector<bool> out(s.order());
  for (std::uint64_t x = 0; x < s.order(); ++x) out[x] = s.contains(x);
  return out;
}

// N_A(x) by enumerating every ordered pair (y, z) of group elements.
inline std::vector<std::uint64_t> pair_counts(const DenseSet& a) {
  const auto in = members(a);
  std::vector<std::uint64_t> counts(a.order(), 0);
  for (std::uint64_t y = 0; y < a.order(); ++y)
    for (std::uint64_t z = 0; z < a.order(); ++z)
      if (in[y] && in[z]) ++counts[y ^ z];
  return counts;
}

// {a + b} by enumerating all pairs of group elements.
inline std::vector<bool> sumset(const DenseSet& a, const DenseSet& b) {
  const auto in_a = members(a);
  const auto in_b = members(b);
  std::vector<bool> out(a.order(), false);
  for (std::uint64_t y = 0; y < a.order(); ++y)
    for (std::uint64_t z = 0; z < a.order(); ++z)
      if (in_a[y] && in_b[z]) out[y ^ z] = true;
  return out;
}

// D_c(A) from the defining inequality with exact rationals per point.
inline std::vector<bool> popular(const DenseSet& a, const Rational& c) {
  const auto counts = pair_counts(a);
  std::vector<bool> out(a.order());
  const BigInt card(a.size());
  for (std::uint64_t x = 0; x < a.order(); ++x)
    out[x] = Rational(BigInt(counts[x]), BigInt(a.order())) > c * Rational(card * card, BigInt(a.order()) * BigInt(a.order()));
  return out;
}

// All linear subspaces of F_2^n, found by testing every subset of the group
// for XOR closure. Only usable for n <= 4.
inline std::vector<std::vector<bool>> all_subspaces_by_closure(int n) {
  const std::uint64_t order = std::uint64_t{1} << n;
  std::vector<std::vector<bool>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << order); ++mask) {
    if (!(mask & 1)) continue;
    bool closed = true;
    for (std::uint64_t x = 0; x < order && closed; ++x)
      for (std::uint64_t y = 0; y < order && closed; ++y)
        if (((mask >> x) & 1) && ((mask >> y) & 1) && !((mask >> (x ^ y)) & 1)) closed = false;
    if (!closed) continue;
    std::vector<bool> s(order);
    for (std::uint64_t x = 0; x < order; ++x) s[x] = (mask >> x) & 1;
    out.push_back(std::move(s));
  }
  return out;
}

inline int log2_exact(std::uint64_t x) {
  int k = 0;
  while ((std::uint64_t{1} << k) < x) ++k;
  return k;
}

// Least r >= 1 with c^r <= sigma / 2 by repeated rational multiplication.
inline std::uint64_t least_r(const Rational& sigma, const Rational& c) {
  const Rational half_sigma = sigma * Rational(BigInt(1), BigInt(2));
  Rational power = c;
  for (std::uint64_t r = 1;; ++r) {
    if (power <= half_sigma) return r;
    power = power * c;
  }
}

// ceil(2^n alpha^r / sqrt 2) >= k, via the squared form
// (k-1)^2 < 2^{2n} alpha^{2r} / 2 written over a common denominator.
inline bool restrict_by_squares(int n, std::uint64_t card, std::uint64_t r, std::uint64_t k) {
  if (k <= 1) return true;
  BigInt num = 1, den = 2;
  for (std::uint64_t i = 0; i < 2 * r; ++i) num *= card;
  for (std::uint64_t i = 0; i < 2 * r - 2; ++i) den <<= n;
  const BigInt km1(k - 1);
  return km1 * km1 * den < num;
}

// Floating evaluation of the closed-form bound; only trusted away from integers.
inline double bound_float(int n, double alpha, double c) {
  const double value = std::pow(alpha, 3) * std::pow(2.0, n * (1 - std::log(1 / alpha) / std::log(1 / c))) / 12;
  return value;
}

}  // namespace popdiff::oracle
