#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "popdiff/construction.hpp"
#include "popdiff/correlation.hpp"
#include "popdiff/f2n.hpp"
#include "popdiff/rational.hpp"
#include "popdiff/rng.hpp"
#include "popdiff/subspace.hpp"

namespace popdiff {

enum class SetFamily { kRandom, kSubspace, kNiveau };

inline std::string to_string(SetFamily f) {
  switch (f) {
    case SetFamily::kRandom: return "random";
    case SetFamily::kSubspace: return "subspace";
    case SetFamily::kNiveau: return "niveau";
  }
  return "?";
}

inline SetFamily parse_family(const std::string& name) {
  if (name == "random") return SetFamily::kRandom;
  if (name == "subspace") return SetFamily::kSubspace;
  if (name == "niveau") return SetFamily::kNiveau;
  throw FormatError("unknown set family '" + name + "'");
}

// Random subspace of the given dimension: vectors drawn until the span reaches it.
inline DenseSet random_subspace(GroupDim dim, int subspace_dim, Rng& rng) {
  if (subspace_dim < 0 || subspace_dim > dim.n()) throw RangeError("subspace dimension out of range");
  std::vector<Point> basis;
  while (static_cast<int>(basis.size()) < subspace_dim) {
    std::vector<Point> trial = basis;
    trial.push_back(static_cast<Point>(rng.uniform_below(dim.order())));
    trial = canonical_basis(trial);
    if (trial.size() > basis.size()) basis = std::move(trial);
  }
  return linear_subspace(dim, basis);
}

// Niveau set {wt >= w} for the largest w whose set still has at least `card` points.
inline DenseSet niveau_with_card_at_least(GroupDim dim, std::uint64_t card) {
  for (int w = dim.n(); w >= 0; --w) {
    DenseSet s = niveau_set(dim, w);
    if (s.size() >= card) return s;
  }
  return DenseSet::full(dim);
}

struct SweepConfig {
  std::vector<int> ns;
  std::vector<Rational> alphas;
  std::vector<Rational> cs;
  SetFamily family = SetFamily::kRandom;
  std::uint64_t seeds = 1;  // seeds 0 .. seeds-1 per cell
  Budgets budgets;
  int subspace_cap = 14;    // max-subspace column only when n <= cap
  std::uint64_t subspace_nodes = std::uint64_t{1} << 18;  // search budget per cell
  unsigned threads = 1;
};

struct SweepRow {
  int n = 0;
  Rational alpha;
  Rational c;
  SetFamily family = SetFamily::kRandom;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> card_a;
  std::optional<std::uint64_t> dc_card;
  std::optional<int> max_subspace_dim;
  std::optional<std::uint64_t> achieved;
  std::optional<std::uint64_t> plan_guarantee;
  std::optional<std::uint64_t> theorem_bound;
  std::optional<bool> bound_dominance;
  std::optional<bool> trivial;
  bool success = false;
  std::string reason;
};

inline constexpr const char* kSweepHeader =
    "n,alpha,c,family,seed,card_A,dc_card,max_subspace_dim,achieved_card,plan_guarantee,theorem_bound,"
    "bound_dominance,trivial,success,reason";

inline SweepRow run_sweep_cell(const SweepConfig& config, int n, const Rational& alpha, const Rational& c,
                               std::uint64_t seed) {
  SweepRow row;
  row.n = n;
  row.alpha = alpha;
  row.c = c;
  row.family = config.family;
  row.seed = seed;
  try {
    const GroupDim dim(n);
    const Rational scaled = alpha * Rational(BigInt(dim.order()), BigInt(1));
    if (scaled.den() != 1) {
      row.reason = "alpha*2^n is not an integer";
      return row;
    }
    if (alpha > Rational(1) || alpha.is_zero()) {
      row.reason = "alpha outside (0; 1]";
      return row;
    }
    const auto card = static_cast<std::uint64_t>(scaled.num());
    Rng rng(seed);
    std::optional<DenseSet> a;
    switch (config.family) {
      case SetFamily::kRandom: a = random_set(dim, card, rng); break;
      case SetFamily::kSubspace:
        if ((card & (card - 1)) != 0) {
          row.reason = "alpha*2^n is not a power of two";
          return row;
        }
        a = random_subspace(dim, std::countr_zero(card), rng);
        break;
      case SetFamily::kNiveau: a = niveau_with_card_at_least(dim, card); break;
    }
    row.card_a = a->size();
    const DenseSet popular = popular_difference_set(*a, c);
    row.dc_card = popular.size();
    if (n <= config.subspace_cap && n <= kMaxSearchDim) {
      try {
        row.max_subspace_dim = max_subspace_in(popular, config.subspace_nodes).basis.dimension();
      } catch (const SearchBudgetExceeded& e) {
        row.reason = std::string("max_subspace_dim: ") + e.what();
      }
    }
    const auto plan = choose_sigma(n, a->size(), c);
    row.plan_guarantee = plan.guarantee;
    row.trivial = plan.trivial;
    if (auto bound = bound_if_defined(*a, c)) {
      row.theorem_bound = *bound;
      row.bound_dominance = plan.guarantee >= *bound;
    }
    const auto cert = construct_popular_sumset(*a, c, seed, config.budgets, true);
    row.achieved = cert.a2.size();
    row.success = cert.verified;
    if (!cert.verified) row.reason = "containment failed";
  } catch (const std::exception& e) {
    row.reason = e.what();
  }
  for (char& ch : row.reason)
    if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
  return row;
}

inline std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  struct Cell {
    int n;
    const Rational* alpha;
    const Rational* c;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int n : config.ns)
    for (const auto& alpha : config.alphas)
      for (const auto& c : config.cs)
        for (std::uint64_t s = 0; s < config.seeds; ++s) cells.push_back({n, &alpha, &c, s});

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      rows[i] = run_sweep_cell(config, cells[i].n, *cells[i].alpha, *cells[i].c, cells[i].seed);
  };
  const unsigned threads = std::max(1u, config.threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto field = [&](const auto& opt) {
    if (opt) out << *opt;
    out << ',';
  };
  auto flag = [&](const std::optional<bool>& opt) {
    if (opt) out << (*opt ? "true" : "false");
    out << ',';
  };
  out << kSweepHeader << '\n';
  for (const auto& row : rows) {
    out << row.n << ',' << row.alpha.to_string() << ',' << row.c.to_string() << ',' << to_string(row.family) << ','
        << row.seed << ',';
    field(row.card_a);
    field(row.dc_card);
    field(row.max_subspace_dim);
    field(row.achieved);
    field(row.plan_guarantee);
    field(row.theorem_bound);
    flag(row.bound_dominance);
    flag(row.trivial);
    out << (row.success ? "true" : "false") << ',' << row.reason << '\n';
  }
}

}  // namespace popdiff
