#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include "popdiff/errors.hpp"
#include "popdiff/f2n.hpp"

namespace popdiff {

inline constexpr int kMaxSearchDim = 22;
inline constexpr std::uint64_t kUnlimitedNodes = ~std::uint64_t{0};
// Element tests spent on the codimension pre-pass before handing over to DFS.
inline constexpr std::uint64_t kQuickNodes = 4096;
inline constexpr std::uint64_t kDualBudget = std::uint64_t{1} << 25;

inline int leading_bit(Point v) { return 31 - std::countl_zero(v); }

// Reduced row echelon basis with pivot = leading bit, listed in ascending
// order. Every pivot bit is clear in all other basis vectors, so equal spans
// give equal bases.
inline std::vector<Point> canonical_basis(std::span<const Point> vectors) {
  std::vector<Point> basis;
  for (Point v : vectors) {
    for (Point b : basis)
      if ((v >> leading_bit(b)) & 1) v ^= b;
    if (v == 0) continue;
    const int pivot = leading_bit(v);
    for (Point& b : basis)
      if ((b >> pivot) & 1) b ^= v;
    basis.push_back(v);
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

struct SubspaceBasis {
  GroupDim dim;
  std::vector<Point> vectors;

  int dimension() const { return static_cast<int>(vectors.size()); }
  std::uint64_t cardinality() const { return std::uint64_t{1} << vectors.size(); }
  DenseSet span() const { return linear_subspace(dim, vectors); }
};

// span(basis) subset of D, checked element by element.
inline bool is_subspace_subset(const DenseSet& d, std::span<const Point> basis) {
  std::vector<Point> span{0};
  if (!d.contains(0)) return false;
  for (Point v : basis) {
    const std::size_t current = span.size();
    for (std::size_t i = 0; i < current; ++i) {
      const Point x = span[i] ^ v;
      if (x == 0) continue;
      if (!d.contains(x)) return false;
      span.push_back(x);
    }
  }
  return true;
}

struct SubspaceSearchResult {
  SubspaceBasis basis;
  bool zero_in_set = true;  // false: no linear subspace fits, basis is empty
  std::uint64_t nodes = 0;
};

namespace detail {

inline int floor_log2(std::uint64_t x) { return 63 - std::countl_zero(x); }

// Depth-first search over reduced echelon bases in ascending order.
//
// A node holds the current basis B and the set R of usable next vectors:
// x with x + span(B) inside D, leading bit above every pivot of B, and clear
// at those pivots. Each subspace containing span(B) is reached exactly once by
// taking its basis vectors in increasing order, and all nonzero elements of
// any extension W lie in R. Adding w leaves {x in R : x + w in R, leading bit
// above lead(w), bit lead(w) clear}.
//
// Pruning: a t-dimensional W inside R needs |R| >= 2^t - 1, and every w in W
// has w + x in R for the 2^t - 2 other nonzero x in W. Elements of R with
// fewer such partners are peeled off until none remain.
class SubspaceSearcher {
 public:
  // ceiling: no subspace of larger dimension exists. floor: one of dimension
  // floor + 1 is known to exist, so smaller ones need not be recorded.
  SubspaceSearcher(const DenseSet& d, int ceiling, int floor, std::uint64_t max_nodes)
      : words_(d.words().size()),
        ceiling_(ceiling),
        best_dim_(floor),
        max_nodes_(max_nodes),
        bits_(static_cast<std::size_t>(d.dim().n()) + 1, Bits(words_, 0)) {}

  void run(const DenseSet& d) {
    std::vector<Point> r = d.points();
    r.erase(r.begin());  // 0
    visit(std::move(r));
  }

  std::vector<Point> best;
  std::uint64_t nodes = 0;

 private:
  using Bits = std::vector<std::uint64_t>;

  static bool test(const Bits& b, Point x) { return (b[x >> 6] >> (x & 63)) & 1; }
  static void set(Bits& b, Point x) { b[x >> 6] |= std::uint64_t{1} << (x & 63); }
  static void clear(Bits& b, Point x) { b[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

  // #{y in R : x + y in R}, by word-parallel translation or by scanning R.
  std::uint64_t degree(const Bits& b, const std::vector<Point>& r, std::size_t from, Point x) const {
    std::uint64_t c = 0;
    if (r.size() - from < words_) {
      for (std::size_t i = from; i < r.size(); ++i) c += test(b, x ^ r[i]);
      return c;
    }
    const std::size_t shift = x >> 6;
    for (std::size_t i = 0; i < words_; ++i)
      c += static_cast<std::uint64_t>(std::popcount(b[i] & detail::permute_word(b[i ^ shift], x & 63)));
    return c;
  }

  // Drops elements of r[from..] with fewer than need partners, to a fixed point.
  void peel(Bits& b, std::vector<Point>& r, std::size_t from, std::uint64_t need) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = from; i < r.size(); ++i)
        if (degree(b, r, from, r[i]) < need) {
          clear(b, r[i]);
          r[i] = 0;
          changed = true;
        }
      if (changed) r.erase(std::remove(r.begin() + static_cast<std::ptrdiff_t>(from), r.end(), Point{0}), r.end());
    }
  }

  void visit(std::vector<Point> r) {
    if (++nodes > max_nodes_)
      throw SearchBudgetExceeded("subspace search exceeded " + std::to_string(max_nodes_) + " nodes");
    const int depth = static_cast<int>(current_.size());
    if (depth > best_dim_) {
      best_dim_ = depth;
      best = current_;
    }
    if (best_dim_ >= ceiling_) return;
    Bits& b = bits_[depth];
    for (Point x : r) set(b, x);

    std::size_t from = 0;  // r[from..] is the live part, ascending
    int peeled_for = -1;
    std::size_t peeled_size = 0;
    while (best_dim_ < ceiling_) {
      const int t = best_dim_ + 1 - depth;
      const std::size_t live = r.size() - from;
      if (t >= 2 && (peeled_for != best_dim_ || 2 * live <= peeled_size)) {
        peel(b, r, from, (std::uint64_t{1} << t) - 2);
        peeled_for = best_dim_;
        peeled_size = r.size() - from;
      }
      if (r.size() - from + 1 < (std::uint64_t{1} << t)) break;

      const Point w = r[from];
      const int lead = leading_bit(w);
      std::vector<Point> child;
      for (std::size_t i = from + 1; i < r.size(); ++i) {
        const Point x = r[i];
        if (leading_bit(x) > lead && !((x >> lead) & 1) && test(b, x ^ w)) child.push_back(x);
      }
      current_.push_back(w);
      visit(std::move(child));
      current_.pop_back();
      // later siblings never contain w
      clear(b, w);
      ++from;
    }
    for (std::size_t i = from; i < r.size(); ++i) clear(b, r[i]);
  }

  std::size_t words_;
  int ceiling_ = 0;
  int best_dim_ = -1;
  std::uint64_t max_nodes_;
  std::vector<Point> current_;
  std::vector<Bits> bits_;  // membership of each depth's live set, cleared on exit
};

// Some f with parity(f & e) = 1 for every e in es, by Gaussian elimination.
inline std::optional<Point> solve_all_ones(std::span<const Point> es) {
  constexpr std::uint64_t kRhs = std::uint64_t{1} << 32;
  std::vector<std::uint64_t> rows;  // pivot = leading bit of the low 32 bits
  for (Point e : es) {
    std::uint64_t row = e | kRhs;
    for (std::uint64_t b : rows)
      if ((row >> leading_bit(static_cast<Point>(b))) & 1) row ^= b;
    if (static_cast<Point>(row) == 0) {
      if (row & kRhs) return std::nullopt;
      continue;
    }
    const int pivot = leading_bit(static_cast<Point>(row));
    for (std::uint64_t& b : rows)
      if ((b >> pivot) & 1) b ^= row;
    rows.push_back(row);
  }
  // rows are fully reduced; the remaining bits of each row are free, set to 0
  Point f = 0;
  for (std::uint64_t b : rows)
    if (b & kRhs) f |= Point{1} << leading_bit(static_cast<Point>(b));
  return f;
}

inline bool parity(Point x) { return std::popcount(x) & 1; }

// Whether m functionals cover E, i.e. some subspace of codimension m misses
// E. The first uncovered element fixes one functional per level; the last
// level is a linear system. Gives up (nullopt) once `budget` element tests
// are spent.
inline std::optional<bool> covers(std::span<const Point> e, int n, int m, std::uint64_t& budget) {
  if (e.empty()) return true;
  if (m == 0) return false;
  if (m == 1) return solve_all_ones(e).has_value();
  std::vector<Point> rest;
  for (Point f = 1; f < (Point{1} << n); ++f) {
    if (!parity(f & e.front())) continue;
    if (budget < e.size()) return std::nullopt;
    budget -= e.size();
    rest.clear();
    for (Point x : e)
      if (!parity(f & x)) rest.push_back(x);
    const auto sub = covers(rest, n, m - 1, budget);
    if (!sub) return std::nullopt;
    if (*sub) return true;
  }
  return false;
}

}  // namespace detail

// Maximum-dimension linear subspace V subset of D; ties go to the
// lexicographically least canonical basis.
inline SubspaceSearchResult max_subspace_in(const DenseSet& d, std::uint64_t max_nodes = kUnlimitedNodes) {
  if (d.dim().n() > kMaxSearchDim)
    throw ParameterError("exact subspace search is limited to n <= " + std::to_string(kMaxSearchDim));
  SubspaceSearchResult out{SubspaceBasis{d.dim(), {}}, d.contains(0), 0};
  if (!out.zero_in_set) return out;

  // Most inputs finish quickly without help.
  const int n = d.dim().n();
  {
    detail::SubspaceSearcher quick(d, detail::floor_log2(d.size()), -1, std::min(max_nodes, kQuickNodes));
    try {
      quick.run(d);
      out.basis.vectors = std::move(quick.best);
      out.nodes = quick.nodes;
      return out;
    } catch (const SearchBudgetExceeded&) {
      if (max_nodes <= kQuickNodes) throw;
    }
  }

  // V inside D iff V misses E = G \ D, iff V lies in the common kernel of
  // functionals covering E. Small codimensions are settled this way first.
  int ceiling = detail::floor_log2(d.size());
  int exact = -1;
  const std::vector<Point> e = complement(d).points();
  std::uint64_t budget = kDualBudget;
  for (int m = 0; n - m >= 0 && exact < 0; ++m) {
    if (n - m > ceiling) continue;
    const auto found = detail::covers(e, n, m, budget);
    if (!found) break;
    if (*found)
      exact = n - m;
    else
      ceiling = n - m - 1;
  }
  if (exact >= 0) ceiling = exact;

  detail::SubspaceSearcher searcher(d, ceiling, exact >= 0 ? exact - 1 : -1, max_nodes);
  searcher.run(d);
  if (exact >= 0 && static_cast<int>(searcher.best.size()) != exact)
    throw InvariantViolation("subspace search missed a subspace of dimension " + std::to_string(exact));
  out.basis.vectors = std::move(searcher.best);
  out.nodes = searcher.nodes;
  return out;
}

struct AffineSubspace {
  Point offset = 0;
  SubspaceBasis basis;
};

// Largest coset t + V inside D, trying each t in D as base point. The node
// budget applies to each base point separately.
inline AffineSubspace max_affine_subspace_in(const DenseSet& d, std::uint64_t max_nodes = kUnlimitedNodes) {
  AffineSubspace best{0, SubspaceBasis{d.dim(), {}}};
  int best_dim = -1;
  d.for_each([&](Point t) {
    if (best_dim >= d.dim().n()) return;
    auto found = max_subspace_in(d.translated(t), max_nodes);
    if (found.basis.dimension() > best_dim) {
      best_dim = found.basis.dimension();
      best = {t, std::move(found.basis)};
    }
  });
  return best;
}

}  // namespace popdiff
