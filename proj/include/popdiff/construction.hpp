#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "popdiff/correlation.hpp"
#include "popdiff/errors.hpp"
#include "popdiff/f2n.hpp"
#include "popdiff/f2set_io.hpp"
#include "popdiff/rational.hpp"
#include "popdiff/rng.hpp"

namespace popdiff {

// Least r >= 1 with c^r <= sigma / 2, i.e. r = ceil(log(2/sigma) / log(1/c))
// clamped below at 1. Decided by exact powering:
//   2 * sigma.den * c.num^r <= sigma.num * c.den^r.
inline std::uint64_t lemma_r(const Rational& sigma, const Rational& c) {
  if (c >= Rational(1)) throw ParameterError("lemma needs c < 1, got c = " + c.to_string());
  if (sigma.is_zero()) throw ParameterError("sigma must be positive");
  BigInt cn = 1, cd = 1;
  for (std::uint64_t r = 1;; ++r) {
    cn *= c.num();
    cd *= c.den();
    if (2 * sigma.den() * cn <= sigma.num() * cd) return r;
  }
}

// Decides ceil(2^n alpha^r / sqrt(2)) >= k exactly. For k >= 2 this is
// 2^n alpha^r / sqrt(2) > k - 1, i.e. |A|^{2r} > (k-1)^2 * 2^{2n(r-1)+1}.
inline bool restrict_holds(int n, std::uint64_t card, std::uint64_t r, std::uint64_t k) {
  if (k <= 1) return card > 0;
  const BigInt lhs = pow_big(BigInt(card), 2 * r);
  const BigInt km1 = BigInt(k - 1);
  return lhs > km1 * km1 * pow2_big(2 * static_cast<std::uint64_t>(n) * (r - 1) + 1);
}

// Largest k with restrict_holds(n, card, r, k); card >= 1.
inline BigInt restrict_max_k(int n, std::uint64_t card, std::uint64_t r) {
  const BigInt lhs = pow_big(BigInt(card), 2 * r);
  const BigInt scale = pow2_big(2 * static_cast<std::uint64_t>(n) * (r - 1) + 1);
  // (k-1)^2 * scale < lhs  <=>  (k-1)^2 <= (lhs - 1) / scale
  return boost::multiprecision::sqrt(BigInt((lhs - 1) / scale)) + 1;
}

struct TheoremBound {
  std::uint64_t value = 0;
  bool exact = false;
  bool boundary_ambiguous = false;
};

// floor(alpha^3 * 2^{n (1 - log(1/alpha) / log(1/c))} / 12).
//
// With alpha = 2^-a and c = 2^-b and b | n(b - a) the exponent is an integer
// and the floor is computed in integers. Otherwise the value is evaluated with
// 100-digit binary floating point and flagged when it lies within 2^-20 of an
// integer.
inline TheoremBound theorem_bound(int n, const Rational& alpha, const Rational& c) {
  if (c.is_zero() || c >= Rational(1))
    throw ParameterError("theorem bound needs 0 < c < 1, got c = " + c.to_string());
  if (alpha.is_zero() || alpha > Rational(1))
    throw ParameterError("theorem bound needs 0 < alpha <= 1, got alpha = " + alpha.to_string());
  const auto a = alpha.dyadic_reciprocal_exponent();
  const auto b = c.dyadic_reciprocal_exponent();
  if (a && b) {
    const std::int64_t numer = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(*b) - static_cast<std::int64_t>(*a));
    const std::int64_t bb = static_cast<std::int64_t>(*b);
    if (numer % bb == 0) {
      const std::int64_t shift = numer / bb - 3 * static_cast<std::int64_t>(*a);
      TheoremBound out;
      out.exact = true;
      out.value = shift < 0 ? 0 : (std::uint64_t{1} << shift) / 12;
      return out;
    }
  }
  using Float = boost::multiprecision::cpp_bin_float_100;
  const Float alpha_f = Float(alpha.num()) / Float(alpha.den());
  const Float log_inv_alpha = log(Float(alpha.den()) / Float(alpha.num()));
  const Float log_inv_c = log(Float(c.den()) / Float(c.num()));
  const Float exponent = Float(n) * (1 - log_inv_alpha / log_inv_c);
  const Float value = alpha_f * alpha_f * alpha_f * pow(Float(2), exponent) / 12;
  const Float floored = floor(value);
  const Float tolerance = ldexp(Float(1), -20);
  TheoremBound out;
  out.value = static_cast<std::uint64_t>(floored);
  out.boundary_ambiguous = (value - floored) < tolerance || (floored + 1 - value) < tolerance;
  return out;
}

// Chosen sigma = 1 / sigma_inv and lemma exponent r, with the integer
// thresholds every later stage compares against.
struct ConstructionPlan {
  int n = 0;
  std::uint64_t card_a = 0;
  Rational c;
  std::uint64_t sigma_inv = 0;
  std::uint64_t r = 0;
  std::uint64_t target_a1 = 0;  // floor(sigma_inv / 4)
  std::uint64_t guarantee = 0;  // floor(target_a1 / 2)
  bool trivial = true;
  // Lemma acceptance: |A'|^2 - sigma_inv * S >= ceil(|A|^{2r} / 2^{2n(r-1)+1}).
  BigInt lemma_min_excess = 0;
  // A_1 acceptance: pairs in D >= ceil((1 - 2 sigma) m^2).
  BigInt pair_min = 0;
  // A_2 filter: #{y in A_1 : x + y in D} >= ceil((1 - 3 sigma) m).
  std::uint64_t filter_min = 0;

  Rational sigma() const { return Rational(BigInt(1), BigInt(sigma_inv)); }
  friend bool operator==(const ConstructionPlan&, const ConstructionPlan&) = default;
};

inline void fill_thresholds(ConstructionPlan& plan) {
  const BigInt k(plan.sigma_inv);
  const BigInt m(plan.target_a1);
  plan.lemma_min_excess = ceil_div(pow_big(BigInt(plan.card_a), 2 * plan.r),
                                   pow2_big(2 * static_cast<std::uint64_t>(plan.n) * (plan.r - 1) + 1));
  plan.pair_min = k > 2 ? ceil_div((k - 2) * m * m, k) : BigInt(0);
  plan.filter_min = k > 3 ? static_cast<std::uint64_t>(ceil_div((k - 3) * m, k)) : 0;
}

// Finite search over r = 1, 2, ... for the largest integer sigma_inv that
// satisfies both sigma_inv <= c^-r / 2 and the restrict condition at r. The
// loop stops at the first r with c^r <= 2^-2n, or earlier once the restrict
// cap (non-increasing in r) is the binding constraint.
inline ConstructionPlan choose_sigma(int n, std::uint64_t card_a, const Rational& c) {
  const GroupDim dim(n);
  if (card_a == 0 || card_a > dim.order()) throw RangeError("|A| must lie in [1, 2^n]");
  ConstructionPlan plan;
  plan.n = n;
  plan.card_a = card_a;
  plan.c = c;
  if (c >= Rational(1)) return plan;

  const BigInt cutoff = pow2_big(2 * static_cast<std::uint64_t>(n));
  BigInt best = 0;
  BigInt cn = 1, cd = 1;
  for (std::uint64_t r = 1;; ++r) {
    cn *= c.num();
    cd *= c.den();
    const BigInt k_restrict = restrict_max_k(n, card_a, r);
    const bool lemma_unbounded = cn == 0;
    const BigInt k_lemma = lemma_unbounded ? k_restrict : cd / (2 * cn);
    const BigInt k = k_lemma < k_restrict ? k_lemma : k_restrict;
    if (k > best) best = k;
    if (k_restrict <= k_lemma || cn * cutoff <= cd) break;
  }
  if (best == 0) return plan;

  plan.sigma_inv = static_cast<std::uint64_t>(best);
  plan.r = lemma_r(plan.sigma(), c);
  plan.target_a1 = plan.sigma_inv / 4;
  plan.guarantee = plan.target_a1 / 2;
  fill_thresholds(plan);
  plan.trivial = plan.guarantee < 1 || Rational(BigInt(card_a), BigInt(dim.order())) <= c;
  return plan;
}

// Plan invariants: r matches sigma, restrict holds, and 3 sigma m < 1.
inline bool plan_consistent(const ConstructionPlan& plan) {
  if (plan.sigma_inv == 0 || plan.r == 0) return false;
  if (lemma_r(plan.sigma(), plan.c) != plan.r) return false;
  if (!restrict_holds(plan.n, plan.card_a, plan.r, plan.sigma_inv)) return false;
  if (plan.target_a1 != plan.sigma_inv / 4 || plan.guarantee != plan.target_a1 / 2) return false;
  if (!(3 * plan.target_a1 < plan.sigma_inv)) return false;
  ConstructionPlan recomputed = plan;
  fill_thresholds(recomputed);
  return recomputed == plan;
}

struct TranslateSample {
  DenseSet set;
  std::vector<Point> translates;
};

// A' = intersection of X_i + A over r independent uniform translates X_i.
inline TranslateSample sample_intersection(const DenseSet& a, std::uint64_t r, Rng& rng) {
  if (r < 1) throw ParameterError("r must be at least 1");
  TranslateSample out{DenseSet::full(a.dim()), {}};
  out.translates.reserve(r);
  for (std::uint64_t i = 0; i < r; ++i) {
    const auto x = static_cast<Point>(rng.uniform_below(a.order()));
    out.translates.push_back(x);
    out.set &= a.translated(x);
  }
  return out;
}

// Intersection of the given translates of A.
inline DenseSet intersect_translates(const DenseSet& a, const std::vector<Point>& translates) {
  DenseSet out = DenseSet::full(a.dim());
  for (Point x : translates) out &= a.translated(x);
  return out;
}

struct LemmaCheck {
  bool accepted = false;
  std::uint64_t s_count = 0;  // ordered pairs of A'^2 with unpopular sum
  BigInt excess = 0;          // s |A'|^2 - t S with sigma = s / t
};

// Accepts iff (s |A'|^2 - t S) * 2^{2n(r-1)+1} >= s |A|^{2r}, the integer form
// of P(A'^2) - sigma^-1 P(S) >= alpha^{2r} / 2.
inline LemmaCheck lemma_accept(const DenseSet& a_prime, const DenseSet& a, const DenseSet& popular,
                               const Rational& sigma, std::uint64_t r) {
  a_prime.require_same_dim(a);
  a_prime.require_same_dim(popular);
  LemmaCheck out;
  if (!a_prime.empty()) {
    const auto ac = autocorrelation(a_prime);
    for (std::uint64_t x = 0; x < ac.counts.size(); ++x)
      if (!popular.contains(x)) out.s_count += ac.counts[x];
  }
  const BigInt card(a_prime.size());
  out.excess = sigma.num() * card * card - sigma.den() * BigInt(out.s_count);
  const int n = a.dim().n();
  const BigInt lhs = out.excess * pow2_big(2 * static_cast<std::uint64_t>(n) * (r - 1) + 1);
  out.accepted = lhs >= sigma.num() * pow_big(BigInt(a.size()), 2 * r);
  return out;
}

inline LemmaCheck lemma_accept(const DenseSet& a_prime, const DenseSet& a, const Rational& c,
                               const Rational& sigma, std::uint64_t r) {
  return lemma_accept(a_prime, a, popular_difference_set(a, c), sigma, r);
}

// Ordered pairs (x, y) in S^2 with x + y in D, by bit-parallel translate
// intersections (no transform involved).
inline std::uint64_t pairs_in(const DenseSet& s, const DenseSet& popular) {
  std::uint64_t total = 0;
  s.for_each([&](Point y) { total += intersect(s.translated(y), popular).size(); });
  return total;
}

struct LemmaAudit {
  bool size_bound = false;    // 2 |A_0|^2 2^{2n(r-1)} >= |A|^{2r}
  bool pair_density = false;  // pairs in D >= (1 - sigma) |A_0|^2
  bool restrict_size = false; // |A_0| >= sigma_inv
  std::uint64_t pairs_in_d = 0;

  bool ok() const { return size_bound && pair_density && restrict_size; }
};

inline LemmaAudit audit_lemma_set(const DenseSet& a0, const DenseSet& a, const DenseSet& popular,
                                  const ConstructionPlan& plan) {
  LemmaAudit audit;
  const BigInt card(a0.size());
  const BigInt k(plan.sigma_inv);
  audit.size_bound = 2 * card * card * pow2_big(2 * static_cast<std::uint64_t>(plan.n) * (plan.r - 1)) >=
                     pow_big(BigInt(a.size()), 2 * plan.r);
  audit.pairs_in_d = pairs_in(a0, popular);
  audit.pair_density = k * BigInt(audit.pairs_in_d) >= (k - 1) * card * card;
  audit.restrict_size = a0.size() >= plan.sigma_inv;
  return audit;
}

struct LemmaResult {
  DenseSet a0;
  std::vector<Point> translates;
  std::uint64_t trials = 0;
  std::uint64_t s_count = 0;
  std::uint64_t pairs_in_d = 0;
};

// Rejection-samples translate intersections until lemma_accept holds, then
// re-asserts the two facts acceptance implies.
inline LemmaResult find_lemma_set(const DenseSet& a, const DenseSet& popular, const ConstructionPlan& plan,
                                  Rng& rng, std::uint64_t max_trials) {
  if (max_trials < 1) throw ParameterError("max_trials must be at least 1");
  std::optional<BigInt> best_deficit;
  for (std::uint64_t trial = 1; trial <= max_trials; ++trial) {
    auto sample = sample_intersection(a, plan.r, rng);
    const auto check = lemma_accept(sample.set, a, popular, plan.sigma(), plan.r);
    if (!check.accepted) {
      const BigInt deficit = plan.lemma_min_excess - check.excess;
      if (!best_deficit || deficit < *best_deficit) best_deficit = deficit;
      continue;
    }
    const auto audit = audit_lemma_set(sample.set, a, popular, plan);
    if (!audit.ok()) throw InvariantViolation("accepted lemma set fails its implied bounds");
    const std::uint64_t card = sample.set.size();
    if (audit.pairs_in_d + check.s_count != card * card)
      throw InvariantViolation("transform and translate pair counts disagree");
    return {std::move(sample.set), std::move(sample.translates), trial, check.s_count, audit.pairs_in_d};
  }
  throw RetryExhausted("lemma", max_trials, best_deficit ? best_deficit->str() : "n/a");
}

inline std::uint64_t pairs_in_direct(const std::vector<Point>& pts, const DenseSet& popular) {
  std::uint64_t pairs = 0;
  for (Point x : pts)
    for (Point y : pts) pairs += popular.contains(x ^ y) ? 1 : 0;
  return pairs;
}

struct RefineResult {
  DenseSet a1;
  std::uint64_t trials = 0;
  std::uint64_t pairs_in_d = 0;
};

// Uniform m-subsets of A_0 until pairs in D >= (1 - 2 sigma) m^2.
inline RefineResult refine_A1(const DenseSet& a0, const ConstructionPlan& plan, const DenseSet& popular,
                              Rng& rng, std::uint64_t max_trials) {
  const std::uint64_t m = plan.target_a1;
  if (m < 1) throw PlanInfeasible("target |A_1| is zero");
  if (a0.size() < m)
    throw PlanInfeasible("|A_0| = " + std::to_string(a0.size()) + " < target " + std::to_string(m));
  if (max_trials < 1) throw ParameterError("max_trials must be at least 1");
  const auto members = a0.points();
  std::optional<BigInt> best_deficit;
  for (std::uint64_t trial = 1; trial <= max_trials; ++trial) {
    std::vector<Point> chosen;
    chosen.reserve(m);
    for (std::uint64_t i : sample_distinct(members.size(), m, rng)) chosen.push_back(members[i]);
    const std::uint64_t pairs = pairs_in_direct(chosen, popular);
    if (BigInt(pairs) >= plan.pair_min) return {make_set(a0.dim(), chosen), trial, pairs};
    const BigInt deficit = plan.pair_min - pairs;
    if (!best_deficit || deficit < *best_deficit) best_deficit = deficit;
  }
  throw RetryExhausted("refine", max_trials, best_deficit ? best_deficit->str() : "n/a");
}

// A_2 = {x in A_1 : #{y in A_1 : x + y in D} >= (1 - 3 sigma) m}.
inline DenseSet filter_A2(const DenseSet& a1, const ConstructionPlan& plan, const DenseSet& popular) {
  if (!(3 * plan.target_a1 < plan.sigma_inv)) throw PlanInfeasible("plan violates 3 sigma m < 1");
  const auto members = a1.points();
  DenseSet a2(a1.dim());
  for (Point x : members) {
    std::uint64_t count = 0;
    for (Point y : members) count += popular.contains(x ^ y) ? 1 : 0;
    if (count >= plan.filter_min) a2.insert(x);
  }
  // The threshold exceeds m - 1, so survivors see every sum in D.
  a2.for_each([&](Point x) {
    if (!a1.translated(x).is_subset_of(popular)) throw InvariantViolation("filter kept x with x + A_1 not in D");
  });
  if (2 * a2.size() < a1.size()) throw InvariantViolation("|A_2| < |A_1| / 2");
  return a2;
}

// A2 + A2 subset of D by naive sumset.
inline bool verify_containment(const DenseSet& a2, const DenseSet& popular) {
  return sumset_naive(a2, a2).is_subset_of(popular);
}

struct Budgets {
  std::uint64_t lemma_trials = 200;
  std::uint64_t refine_trials = 200;
};

struct StageStats {
  std::uint64_t lemma_trials = 0;
  std::uint64_t a0_card = 0;
  std::uint64_t s_count = 0;
  std::uint64_t a0_pairs_in_d = 0;
  std::uint64_t refine_trials = 0;
  std::uint64_t a1_pairs_in_d = 0;
  std::uint64_t a2_card = 0;

  friend bool operator==(const StageStats&, const StageStats&) = default;
};

struct Certificate {
  explicit Certificate(DenseSet input) : a(std::move(input)), a2(a.dim()) {}

  DenseSet a;
  Rational c;
  std::uint64_t seed = 0;
  Budgets budgets;
  bool exploratory = false;
  ConstructionPlan plan;
  std::vector<Point> translates;
  std::optional<DenseSet> a0;
  std::optional<DenseSet> a1;
  DenseSet a2;
  StageStats stats;
  std::uint64_t dc_card = 0;
  std::optional<std::uint64_t> bound;
  bool trivial = false;
  bool verified = false;
  bool guarantee_met = false;

  int n() const { return a.dim().n(); }
  std::string set_hash() const;
};

inline std::string Certificate::set_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_hex(a))));
  return std::string("fnv1a64:") + buf;
}

inline std::optional<std::uint64_t> bound_if_defined(const DenseSet& a, const Rational& c) {
  if (a.empty() || c.is_zero() || c >= Rational(1)) return std::nullopt;
  return theorem_bound(a.dim().n(), a.density(), c).value;
}

// Full pipeline: plan, lemma set A_0, random A_1, filtered A_2, containment.
// Without exploratory mode c must lie in (0, 1/2].
inline Certificate construct_popular_sumset(const DenseSet& a, const Rational& c, std::uint64_t seed,
                                            const Budgets& budgets = {}, bool exploratory = false) {
  if (a.empty()) throw DegenerateInput("A is empty");
  if (!exploratory && (c.is_zero() || c > Rational(BigInt(1), BigInt(2))))
    throw ParameterError("c = " + c.to_string() + " outside (0, 1/2]; use exploratory mode");

  const DenseSet popular = popular_difference_set(a, c);
  Certificate cert(a);
  cert.c = c;
  cert.seed = seed;
  cert.budgets = budgets;
  cert.exploratory = exploratory;
  cert.plan = choose_sigma(a.dim().n(), a.size(), c);
  cert.dc_card = popular.size();
  cert.bound = bound_if_defined(a, c);

  if (cert.plan.trivial) {
    if (!popular.contains(0))
      throw DegenerateInput("0 is not in D_c(A) (c * alpha >= 1); no certificate exists");
    cert.trivial = true;
    cert.a2.insert(0);
  } else {
    Rng rng(seed);
    auto lemma = find_lemma_set(a, popular, cert.plan, rng, budgets.lemma_trials);
    auto refined = refine_A1(lemma.a0, cert.plan, popular, rng, budgets.refine_trials);
    cert.a2 = filter_A2(refined.a1, cert.plan, popular);
    cert.translates = std::move(lemma.translates);
    cert.stats.lemma_trials = lemma.trials;
    cert.stats.a0_card = lemma.a0.size();
    cert.stats.s_count = lemma.s_count;
    cert.stats.a0_pairs_in_d = lemma.pairs_in_d;
    cert.stats.refine_trials = refined.trials;
    cert.stats.a1_pairs_in_d = refined.pairs_in_d;
    cert.a0 = std::move(lemma.a0);
    cert.a1 = std::move(refined.a1);
  }
  cert.stats.a2_card = cert.a2.size();
  cert.verified = verify_containment(cert.a2, popular);
  const std::uint64_t planned = cert.trivial ? 0 : cert.plan.guarantee;
  cert.guarantee_met = cert.a2.size() >= planned && (!cert.bound || cert.a2.size() >= *cert.bound);
  return cert;
}

}  // namespace popdiff
