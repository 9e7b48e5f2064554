#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "popdiff/errors.hpp"
#include "popdiff/rational.hpp"
#include "popdiff/rng.hpp"
#include "popdiff/walsh.hpp"

namespace popdiff {

inline constexpr int kMaxDim = 30;

// Element of F_2^n stored as its index; coordinate j is bit j, addition is XOR.
using Point = std::uint32_t;

// Dimension n of the group F_2^n, 1 <= n <= kMaxDim.
class GroupDim {
 public:
  explicit GroupDim(int n) : n_(n) {
    if (n < 1 || n > kMaxDim)
      throw RangeError("dimension " + std::to_string(n) + " outside [1, " + std::to_string(kMaxDim) + "]");
  }

  int n() const noexcept { return n_; }
  std::uint64_t order() const noexcept { return std::uint64_t{1} << n_; }
  bool contains(std::uint64_t index) const noexcept { return index < order(); }

  friend bool operator==(GroupDim, GroupDim) = default;

 private:
  int n_;
};

namespace detail {

inline constexpr std::array<std::uint64_t, 6> kLowHalfMask = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0f0f0f0f0f0f0f0fULL,
    0x00ff00ff00ff00ffULL, 0x0000ffff0000ffffULL, 0x00000000ffffffffULL};

// XOR-permutes bit positions inside one word by the low six bits of t.
inline std::uint64_t permute_word(std::uint64_t w, std::uint64_t t) {
  for (int j = 0; j < 6; ++j) {
    if ((t >> j) & 1) {
      const int s = 1 << j;
      w = ((w & kLowHalfMask[j]) << s) | ((w >> s) & kLowHalfMask[j]);
    }
  }
  return w;
}

}  // namespace detail

// Subset of F_2^n as a bit vector; bit i is membership of index i.
class DenseSet {
 public:
  explicit DenseSet(GroupDim dim) : dim_(dim), words_(word_count(dim), 0) {}

  static DenseSet full(GroupDim dim) {
    DenseSet s(dim);
    std::fill(s.words_.begin(), s.words_.end(), ~std::uint64_t{0});
    s.words_.back() &= s.tail_mask();
    s.card_ = dim.order();
    return s;
  }

  GroupDim dim() const noexcept { return dim_; }
  std::uint64_t order() const noexcept { return dim_.order(); }
  std::uint64_t size() const noexcept { return card_; }
  bool empty() const noexcept { return card_ == 0; }

  Rational density() const { return Rational(BigInt(card_), BigInt(order())); }

  bool contains(std::uint64_t x) const {
    return x < order() && ((words_[x >> 6] >> (x & 63)) & 1);
  }

  void insert(std::uint64_t x) {
    check_point(x);
    std::uint64_t& w = words_[x >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (!(w & bit)) {
      w |= bit;
      ++card_;
    }
  }

  void erase(std::uint64_t x) {
    check_point(x);
    std::uint64_t& w = words_[x >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (w & bit) {
      w &= ~bit;
      --card_;
    }
  }

  void check_point(std::uint64_t x) const {
    if (x >= order())
      throw RangeError("point " + std::to_string(x) + " outside F_2^" + std::to_string(dim_.n()));
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  // Replaces the raw words; bits beyond 2^n must be clear.
  void assign_words(std::vector<std::uint64_t> words) {
    if (words.size() != words_.size()) throw DimensionError("word count mismatch");
    if (words.back() & ~tail_mask()) throw RangeError("bits set beyond 2^n");
    words_ = std::move(words);
    recount();
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int b = std::countr_zero(w);
        fn(static_cast<Point>((wi << 6) | static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
  }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(card_);
    for_each([&](Point p) { out.push_back(p); });
    return out;
  }

  bool is_subset_of(const DenseSet& other) const {
    require_same_dim(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  friend bool operator==(const DenseSet& a, const DenseSet& b) {
    return a.dim_ == b.dim_ && a.words_ == b.words_;
  }

  void require_same_dim(const DenseSet& other) const {
    if (!(dim_ == other.dim_))
      throw DimensionError("sets live in F_2^" + std::to_string(dim_.n()) + " and F_2^" +
                           std::to_string(other.dim_.n()));
  }

  DenseSet& operator&=(const DenseSet& other) {
    require_same_dim(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    recount();
    return *this;
  }

  DenseSet& operator|=(const DenseSet& other) {
    require_same_dim(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    recount();
    return *this;
  }

  void complement_in_place() {
    for (auto& w : words_) w = ~w;
    words_.back() &= tail_mask();
    card_ = order() - card_;
  }

  // {t + a : a in this}
  DenseSet translated(std::uint64_t t) const {
    check_point(t);
    DenseSet out(dim_);
    const std::uint64_t word_shift = t >> 6;
    for (std::size_t i = 0; i < words_.size(); ++i)
      out.words_[i ^ word_shift] = detail::permute_word(words_[i], t & 63);
    out.card_ = card_;
    return out;
  }

 private:
  static std::size_t word_count(GroupDim dim) {
    return dim.n() >= 6 ? static_cast<std::size_t>(dim.order() >> 6) : 1;
  }

  std::uint64_t tail_mask() const noexcept {
    return dim_.n() >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim_.order()) - 1;
  }

  void recount() {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    card_ = c;
  }

  GroupDim dim_;
  std::vector<std::uint64_t> words_;
  std::uint64_t card_ = 0;
};

inline DenseSet make_set(GroupDim dim, std::span<const Point> points) {
  DenseSet s(dim);
  for (Point p : points) s.insert(p);
  return s;
}

inline DenseSet make_set(GroupDim dim, std::initializer_list<Point> points) {
  return make_set(dim, std::span<const Point>(points.begin(), points.size()));
}

// Uniform subset of exactly the given cardinality.
inline DenseSet random_set(GroupDim dim, std::uint64_t cardinality, Rng& rng) {
  if (cardinality > dim.order())
    throw RangeError("cardinality " + std::to_string(cardinality) + " exceeds 2^" + std::to_string(dim.n()));
  DenseSet s(dim);
  for (std::uint64_t x : sample_distinct(dim.order(), cardinality, rng)) s.insert(x);
  return s;
}

inline DenseSet translate(const DenseSet& a, Point t) { return a.translated(t); }

inline DenseSet intersect(DenseSet a, const DenseSet& b) { return a &= b; }
inline DenseSet unite(DenseSet a, const DenseSet& b) { return a |= b; }
inline DenseSet complement(DenseSet a) {
  a.complement_in_place();
  return a;
}

// O(|A||B|) double loop.
inline DenseSet sumset_naive(const DenseSet& a, const DenseSet& b) {
  a.require_same_dim(b);
  DenseSet out(a.dim());
  const auto bs = b.points();
  a.for_each([&](Point x) {
    for (Point y : bs) out.insert(x ^ y);
  });
  return out;
}

// Cross-correlation counts #{(a, b) in A x B : a + b = x}, exact.
inline std::vector<std::uint64_t> convolution_counts(const DenseSet& a, const DenseSet& b) {
  a.require_same_dim(b);
  const std::uint64_t order = a.order();
  std::vector<std::uint64_t> fa(order, 0), fb(order, 0);
  a.for_each([&](Point x) { fa[x] = 1; });
  b.for_each([&](Point x) { fb[x] = 1; });
  walsh_hadamard(fa);
  walsh_hadamard(fb);
  for (std::uint64_t i = 0; i < order; ++i) fa[i] *= fb[i];
  walsh_hadamard(fa);
  const int n = a.dim().n();
  for (auto& v : fa) v >>= n;
  return fa;
}

// Support of 1_A * 1_B.
inline DenseSet sumset_convolution(const DenseSet& a, const DenseSet& b) {
  const auto counts = convolution_counts(a, b);
  DenseSet out(a.dim());
  for (std::uint64_t x = 0; x < counts.size(); ++x)
    if (counts[x] != 0) out.insert(x);
  return out;
}

inline DenseSet sumset(const DenseSet& a, const DenseSet& b) {
  a.require_same_dim(b);
  const double naive_cost = static_cast<double>(a.size()) * static_cast<double>(b.size());
  const double transform_cost = 3.0 * a.dim().n() * static_cast<double>(a.order());
  return naive_cost <= transform_cost ? sumset_naive(a, b) : sumset_convolution(a, b);
}

// Span of the given vectors (which may be dependent).
inline DenseSet linear_subspace(GroupDim dim, std::span<const Point> basis) {
  std::vector<Point> span{0};
  for (Point v : basis) {
    if (!dim.contains(v)) throw RangeError("basis vector " + std::to_string(v) + " out of range");
    if (std::find(span.begin(), span.end(), v) != span.end()) continue;
    const std::size_t current = span.size();
    for (std::size_t i = 0; i < current; ++i) span.push_back(span[i] ^ v);
  }
  return make_set(dim, span);
}

inline DenseSet linear_subspace(GroupDim dim, std::initializer_list<Point> basis) {
  return linear_subspace(dim, std::span<const Point>(basis.begin(), basis.size()));
}

// {x : popcount(x) >= weight_threshold}
inline DenseSet niveau_set(GroupDim dim, int weight_threshold) {
  if (weight_threshold < 0 || weight_threshold > dim.n())
    throw RangeError("weight threshold " + std::to_string(weight_threshold) + " outside [0, n]");
  DenseSet out(dim);
  for (std::uint64_t x = 0; x < dim.order(); ++x)
    if (std::popcount(x) >= weight_threshold) out.insert(x);
  return out;
}

}  // namespace popdiff
