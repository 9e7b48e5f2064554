#include <gtest/gtest.h>

#include <algorithm>
#include <bit>

#include "oracles.hpp"
#include "popdiff/correlation.hpp"
#include "popdiff/subspace.hpp"

namespace popdiff {
namespace {

TEST(CanonicalBasisTest, EqualSpansGiveEqualBases) {
  EXPECT_EQ(canonical_basis(std::vector<Point>{3, 1}), (std::vector<Point>{1, 2}));
  EXPECT_EQ(canonical_basis(std::vector<Point>{1, 2}), (std::vector<Point>{1, 2}));
  EXPECT_EQ(canonical_basis(std::vector<Point>{5, 5, 0}), (std::vector<Point>{5}));
  Rng rng(1);
  const GroupDim n9(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> gens;
    for (int i = 0; i < 4; ++i) gens.push_back(static_cast<Point>(rng.uniform_below(512)));
    const auto basis = canonical_basis(gens);
    EXPECT_EQ(linear_subspace(n9, basis), linear_subspace(n9, gens));
    // a different generating set for the same span
    std::vector<Point> mixed = gens;
    for (std::size_t i = 1; i < mixed.size(); ++i) mixed[i] ^= mixed[i - 1];
    std::reverse(mixed.begin(), mixed.end());
    EXPECT_EQ(canonical_basis(mixed), basis);
  }
}

TEST(IsSubspaceSubsetTest, Examples) {
  const GroupDim n5(5);
  Rng rng(2);
  auto d = random_set(n5, 12, rng);
  d.insert(0);
  EXPECT_TRUE(is_subspace_subset(d, {}));
  const auto v = linear_subspace(n5, {3, 12});
  const std::vector<Point> basis{3, 12};
  EXPECT_TRUE(is_subspace_subset(v, basis));
  auto holed = v;
  holed.erase(15);
  EXPECT_FALSE(is_subspace_subset(holed, basis));
}

TEST(MaxSubspaceTest, Examples) {
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(max_subspace_in(DenseSet::full(GroupDim(n))).basis.dimension(), n);
  const GroupDim n6(6);
  EXPECT_EQ(max_subspace_in(make_set(n6, {0})).basis.dimension(), 0);
  const auto v = linear_subspace(n6, {5, 6, 24});
  const auto popular = popular_difference_set(v, Rational::parse("1/2"));
  ASSERT_EQ(popular, v);
  const auto found = max_subspace_in(popular);
  EXPECT_EQ(found.basis.dimension(), 3);
  EXPECT_EQ(found.basis.span(), v);
  EXPECT_EQ(found.basis.vectors, canonical_basis(std::vector<Point>{5, 6, 24}));
}

TEST(MaxSubspaceTest, ZeroMissing) {
  const auto found = max_subspace_in(make_set(GroupDim(4), {1, 2, 3}));
  EXPECT_FALSE(found.zero_in_set);
  EXPECT_EQ(found.basis.dimension(), 0);
}

TEST(MaxSubspaceTest, AgreesWithClosureEnumerationN3) {
  const auto subspaces = oracle::all_subspaces_by_closure(3);
  ASSERT_EQ(subspaces.size(), 16u);  // 1 + 7 + 7 + 1
  const GroupDim n3(3);
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    DenseSet d(n3);
    for (Point x = 0; x < 8; ++x)
      if ((mask >> x) & 1) d.insert(x);
    int best = 0;
    for (const auto& s : subspaces) {
      bool inside = true;
      std::uint64_t card = 0;
      for (Point x = 0; x < 8; ++x) {
        if (s[x]) ++card;
        if (s[x] && !d.contains(x)) inside = false;
      }
      if (inside) best = std::max(best, oracle::log2_exact(card));
    }
    const auto found = max_subspace_in(d);
    ASSERT_EQ(found.basis.dimension(), best) << mask;
    if (d.contains(0)) {
      ASSERT_TRUE(is_subspace_subset(d, found.basis.vectors));
    }
  }
}

TEST(MaxSubspaceTest, MonotoneOnChains) {
  Rng rng(3);
  const GroupDim n8(8);
  for (int chain = 0; chain < 10; ++chain) {
    DenseSet d = make_set(n8, {0});
    int last = 0;
    for (int step = 0; step < 12; ++step) {
      for (int i = 0; i < 16; ++i) d.insert(rng.uniform_below(256));
      const int dim = max_subspace_in(d).basis.dimension();
      EXPECT_GE(dim, last);
      last = dim;
    }
  }
}

TEST(MaxSubspaceTest, OutputIsValidAndCanonical) {
  Rng rng(4);
  for (int n = 4; n <= 10; ++n) {
    const GroupDim dim(n);
    for (int trial = 0; trial < 8; ++trial) {
      auto d = random_set(dim, dim.order() / 2 + rng.uniform_below(dim.order() / 2), rng);
      d.insert(0);
      const auto found = max_subspace_in(d);
      EXPECT_TRUE(found.basis.span().is_subset_of(d));
      EXPECT_EQ(found.basis.vectors, canonical_basis(found.basis.vectors));
    }
  }
}

TEST(MaxSubspaceTest, RefusesAboveCap) {
  EXPECT_THROW(max_subspace_in(DenseSet(GroupDim(kMaxSearchDim + 1))), ParameterError);
}

TEST(MaxSubspaceTest, HammingBallWithSmallComplement) {
  // weight <= 13 in F_2^16 misses 697 points; kernel of one functional is not enough
  const GroupDim n16(16);
  DenseSet d(n16);
  for (Point x = 0; x < n16.order(); ++x)
    if (std::popcount(x) <= 13) d.insert(x);
  const auto found = max_subspace_in(d);
  EXPECT_TRUE(found.basis.span().is_subset_of(d));
  // the span of any 13 unit vectors fits
  EXPECT_GE(found.basis.dimension(), 13);
}

TEST(MaxSubspaceTest, BudgetIsEnforced) {
  const GroupDim n12(12);
  DenseSet d(n12);
  for (Point x = 0; x < n12.order(); ++x)
    if (std::popcount(x) <= 6) d.insert(x);
  EXPECT_THROW(max_subspace_in(d, 50), SearchBudgetExceeded);
}

TEST(MaxAffineSubspaceTest, FindsCosets) {
  const GroupDim n6(6);
  const auto coset = translate(linear_subspace(n6, {1, 2, 4}), 40);
  const auto found = max_affine_subspace_in(coset);
  EXPECT_EQ(found.basis.dimension(), 3);
  EXPECT_EQ(translate(found.basis.span(), found.offset), coset);
  // no linear subspace beyond {0}... and not even 0 here
  EXPECT_FALSE(max_subspace_in(coset).zero_in_set);
}

}  // namespace
}  // namespace popdiff
