#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "popdiff/f2n.hpp"
#include "popdiff/rational.hpp"
#include "popdiff/walsh.hpp"

namespace popdiff {

// counts[x] = N_A(x) = #{y in A : x + y in A}. The normalized convolution is
// 1_A * 1_A(x) = counts[x] / 2^n.
struct Autocorrelation {
  GroupDim dim;
  std::vector<std::uint64_t> counts;

  friend bool operator==(const Autocorrelation&, const Autocorrelation&) = default;
};

// Transform, square, transform back, divide by 2^n. Every value of
// 2^n * N_A(x) is at most 2^60, so the mod-2^64 transform is exact.
inline Autocorrelation autocorrelation(const DenseSet& a) {
  std::vector<std::uint64_t> f(a.order(), 0);
  a.for_each([&](Point x) { f[x] = 1; });
  walsh_hadamard(f);
  for (auto& v : f) v *= v;
  walsh_hadamard(f);
  const int n = a.dim().n();
  for (auto& v : f) v >>= n;
  return {a.dim(), std::move(f)};
}

// Direct pair counting; the independent oracle for autocorrelation().
inline Autocorrelation naive_autocorrelation(const DenseSet& a) {
  std::vector<std::uint64_t> counts(a.order(), 0);
  const auto pts = a.points();
  for (Point x : pts)
    for (Point y : pts) ++counts[x ^ y];
  return {a.dim(), std::move(counts)};
}

// D_c(A) membership is N_A(x) * c.den * 2^n > c.num * |A|^2. Since N_A(x) is an
// integer this is N_A(x) >= floor(c.num |A|^2 / (c.den 2^n)) + 1.
struct PopularityThreshold {
  Rational alpha;
  Rational c;
  BigInt min_count;

  // Saturates when no count can reach the threshold.
  std::uint64_t min_count_u64() const {
    if (min_count > BigInt(std::numeric_limits<std::uint64_t>::max()))
      return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(min_count);
  }

  std::string describe() const {
    return "N_A(x) * " + c.den().str() + " * 2^n > " + c.num().str() + " * |A|^2  <=>  N_A(x) >= " +
           min_count.str();
  }
};

inline PopularityThreshold popularity_threshold(GroupDim dim, std::uint64_t card, const Rational& c) {
  const BigInt lhs = c.num() * BigInt(card) * BigInt(card);
  const BigInt rhs = c.den() * BigInt(dim.order());
  return {Rational(BigInt(card), BigInt(dim.order())), c, lhs / rhs + 1};
}

inline DenseSet popular_difference_set(const Autocorrelation& ac, std::uint64_t card, const Rational& c) {
  const std::uint64_t min_count = popularity_threshold(ac.dim, card, c).min_count_u64();
  DenseSet out(ac.dim);
  for (std::uint64_t x = 0; x < ac.counts.size(); ++x)
    if (ac.counts[x] >= min_count) out.insert(x);
  return out;
}

inline DenseSet popular_difference_set(const DenseSet& a, const Rational& c) {
  return popular_difference_set(autocorrelation(a), a.size(), c);
}

struct DcReport {
  Rational alpha;
  std::string threshold;
  std::uint64_t dc_card = 0;
};

inline DcReport dc_threshold_report(const DenseSet& a, const Rational& c) {
  const auto threshold = popularity_threshold(a.dim(), a.size(), c);
  return {threshold.alpha, threshold.describe(), popular_difference_set(a, c).size()};
}

inline void write_autocorrelation_csv(std::ostream& out, const Autocorrelation& ac) {
  out << "x,count\n";
  for (std::uint64_t x = 0; x < ac.counts.size(); ++x) out << x << ',' << ac.counts[x] << '\n';
}

}  // namespace popdiff
