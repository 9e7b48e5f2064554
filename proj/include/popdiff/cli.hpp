#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "popdiff/certificate.hpp"
#include "popdiff/construction.hpp"
#include "popdiff/correlation.hpp"
#include "popdiff/f2set_io.hpp"
#include "popdiff/subspace.hpp"
#include "popdiff/sweep.hpp"

namespace popdiff::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRetryExhausted = 2, kVerifyFailed = 3 };

namespace detail {

inline std::string hex_point(Point p) {
  std::ostringstream s;
  s << "0x" << std::hex << p;
  return s.str();
}

template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw FormatError("cannot write '" + path + "'");
  fn(file);
}

inline std::vector<Rational> parse_rationals(const std::vector<std::string>& texts) {
  std::vector<Rational> out;
  for (const auto& t : texts) out.push_back(Rational::parse(t));
  return out;
}

}  // namespace detail

struct GenArgs {
  int n = 0;
  std::string family = "random";
  std::uint64_t card = 0;
  int dim = 0;
  int wmin = 0;
  std::uint64_t seed = 0;
  std::string out;
};

inline int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream&) {
  const GroupDim dim(args.n);
  Rng rng(args.seed);
  std::optional<DenseSet> set;
  switch (parse_family(args.family)) {
    case SetFamily::kRandom: set = random_set(dim, args.card, rng); break;
    case SetFamily::kSubspace: set = random_subspace(dim, args.dim, rng); break;
    case SetFamily::kNiveau: set = niveau_set(dim, args.wmin); break;
  }
  detail::with_output(args.out, out, [&](std::ostream& s) { write_f2set(s, *set); });
  return kOk;
}

struct DcsetArgs {
  std::string in;
  std::string c;
  std::string out;
  std::string autocorr_csv;
};

inline int cmd_dcset(const DcsetArgs& args, std::ostream& out, std::ostream& err) {
  const DenseSet a = load_f2set(args.in);
  const Rational c = Rational::parse(args.c);
  const auto ac = autocorrelation(a);
  const DenseSet popular = popular_difference_set(ac, a.size(), c);
  const auto threshold = popularity_threshold(a.dim(), a.size(), c);
  std::ostream& report = args.out.empty() || args.out == "-" ? err : out;
  report << "n=" << a.dim().n() << " |A|=" << a.size() << " alpha=" << threshold.alpha.to_string()
         << " c=" << c.to_string() << '\n'
         << "threshold: " << threshold.describe() << '\n'
         << "|D_c(A)|=" << popular.size() << '\n';
  detail::with_output(args.out, out, [&](std::ostream& s) { write_f2set(s, popular); });
  if (!args.autocorr_csv.empty())
    detail::with_output(args.autocorr_csv, out, [&](std::ostream& s) { write_autocorrelation_csv(s, ac); });
  return kOk;
}

struct ConstructArgs {
  std::string in;
  std::string c;
  std::uint64_t seed = 0;
  Budgets budgets;
  bool exploratory = false;
  std::string out;
};

inline int cmd_construct(const ConstructArgs& args, std::ostream& out, std::ostream& err) {
  const DenseSet a = load_f2set(args.in);
  const Rational c = Rational::parse(args.c);
  Certificate cert = [&] {
    try {
      return construct_popular_sumset(a, c, args.seed, args.budgets, args.exploratory);
    } catch (const RetryExhausted& e) {
      err << "construct: retry exhausted in stage " << e.stage() << ": " << e.what() << '\n';
      throw;
    }
  }();
  detail::with_output(args.out, out, [&](std::ostream& s) { s << dump_certificate(cert); });
  err << "sigma=" << plan_to_json(cert.plan).at("sigma").get<std::string>() << " r=" << cert.plan.r << " |A'|=" << cert.a2.size()
      << " guarantee=" << cert.plan.guarantee;
  if (cert.bound) err << " theorem_bound=" << *cert.bound;
  err << (cert.trivial ? " trivial" : "") << (cert.verified ? " verified" : " NOT VERIFIED") << '\n';
  return cert.verified ? kOk : kVerifyFailed;
}

struct VerifyArgs {
  std::string cert;
};

inline int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream&) {
  const Json doc = load_json(args.cert);
  const auto outcome = verify_certificate(doc);
  if (outcome.ok) {
    out << "verified\n";
    return kOk;
  }
  out << "FAILED " << outcome.failed_check << ": " << outcome.detail << '\n';
  return kVerifyFailed;
}

struct SweepArgs {
  std::vector<int> ns;
  std::vector<std::string> alphas;
  std::vector<std::string> cs;
  std::string family = "random";
  std::uint64_t seeds = 1;
  Budgets budgets;
  int subspace_cap = 14;
  std::uint64_t subspace_nodes = std::uint64_t{1} << 18;
  unsigned threads = 1;
  std::string out;
};

inline int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream&) {
  SweepConfig config;
  config.ns = args.ns;
  config.alphas = detail::parse_rationals(args.alphas);
  config.cs = detail::parse_rationals(args.cs);
  config.family = parse_family(args.family);
  config.seeds = args.seeds;
  config.budgets = args.budgets;
  config.subspace_cap = args.subspace_cap;
  config.subspace_nodes = args.subspace_nodes;
  config.threads = args.threads;
  const auto rows = run_sweep(config);
  detail::with_output(args.out, out, [&](std::ostream& s) { write_sweep_csv(s, rows); });
  return kOk;
}

struct BoundArgs {
  int n = 0;
  std::string alpha;
  std::string c;
};

inline int cmd_bound(const BoundArgs& args, std::ostream& out, std::ostream& err) {
  const auto bound = theorem_bound(args.n, Rational::parse(args.alpha), Rational::parse(args.c));
  out << bound.value << '\n';
  if (!bound.exact) err << (bound.boundary_ambiguous ? "boundary-ambiguous\n" : "evaluated in floating point\n");
  return kOk;
}

struct SubspaceArgs {
  std::string in;
  bool affine = false;
  std::uint64_t max_nodes = kUnlimitedNodes;
};

inline int cmd_subspace(const SubspaceArgs& args, std::ostream& out, std::ostream&) {
  const DenseSet d = load_f2set(args.in);
  if (d.dim().n() > kMaxSearchDim)
    throw ParameterError("refusing exact subspace search above n = " + std::to_string(kMaxSearchDim));
  std::vector<Point> basis;
  if (args.affine) {
    const auto found = max_affine_subspace_in(d, args.max_nodes);
    out << "offset " << detail::hex_point(found.offset) << '\n';
    basis = found.basis.vectors;
  } else {
    const auto found = max_subspace_in(d, args.max_nodes);
    if (!found.zero_in_set) out << "note: 0 is not in the set\n";
    basis = found.basis.vectors;
  }
  out << "dimension " << basis.size() << '\n' << "cardinality " << (std::uint64_t{1} << basis.size()) << '\n';
  out << "basis";
  for (Point v : basis) out << ' ' << detail::hex_point(v);
  out << '\n';
  return kOk;
}

// Parses argv-style arguments (without the program name) and dispatches.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Popular difference sets over F_2^n: construction, certification, exploration", "popdiff"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a set and write it as F2SET v1");
  gen_cmd->add_option("--n", gen.n, "Group dimension")->required();
  gen_cmd->add_option("--family", gen.family, "random | subspace | niveau");
  gen_cmd->add_option("--card", gen.card, "Cardinality (random family)");
  gen_cmd->add_option("--dim", gen.dim, "Subspace dimension (subspace family)");
  gen_cmd->add_option("--wmin", gen.wmin, "Minimum Hamming weight (niveau family)");
  gen_cmd->add_option("--seed", gen.seed, "64-bit seed");
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  DcsetArgs dcset;
  auto* dcset_cmd = app.add_subcommand("dcset", "Compute the popular difference set D_c(A)");
  dcset_cmd->add_option("--in", dcset.in, "Input F2SET file")->required();
  dcset_cmd->add_option("--c", dcset.c, "Parameter c as p/q")->required();
  dcset_cmd->add_option("--out", dcset.out, "Output F2SET file (default stdout)");
  dcset_cmd->add_option("--autocorr-csv", dcset.autocorr_csv, "Also dump N_A as CSV");

  ConstructArgs construct;
  auto* construct_cmd = app.add_subcommand("construct", "Build and certify A' with A'+A' in D_c(A)");
  construct_cmd->add_option("--in", construct.in, "Input F2SET file")->required();
  construct_cmd->add_option("--c", construct.c, "Parameter c as p/q")->required();
  construct_cmd->add_option("--seed", construct.seed, "64-bit seed");
  construct_cmd->add_option("--lemma-trials", construct.budgets.lemma_trials, "Retry budget for the lemma stage");
  construct_cmd->add_option("--refine-trials", construct.budgets.refine_trials, "Retry budget for the A_1 stage");
  construct_cmd->add_flag("--exploratory", construct.exploratory, "Allow c outside (0, 1/2]");
  construct_cmd->add_option("--out", construct.out, "Certificate JSON (default stdout)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Replay a certificate from the file alone");
  verify_cmd->add_option("cert", verify.cert, "Certificate JSON")->required();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment grid and write CSV");
  sweep_cmd->add_option("--n", sweep.ns, "Dimensions")->delimiter(',')->required();
  sweep_cmd->add_option("--alpha", sweep.alphas, "Densities as p/q")->delimiter(',')->required();
  sweep_cmd->add_option("--c", sweep.cs, "Parameters as p/q")->delimiter(',')->required();
  sweep_cmd->add_option("--family", sweep.family, "random | subspace | niveau");
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds 0..seeds-1 per cell");
  sweep_cmd->add_option("--lemma-trials", sweep.budgets.lemma_trials, "Retry budget for the lemma stage");
  sweep_cmd->add_option("--refine-trials", sweep.budgets.refine_trials, "Retry budget for the A_1 stage");
  sweep_cmd->add_option("--subspace-cap", sweep.subspace_cap, "Largest n for the max-subspace column");
  sweep_cmd->add_option("--subspace-nodes", sweep.subspace_nodes, "Node budget for each max-subspace search");
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads");
  sweep_cmd->add_option("--out", sweep.out, "Output CSV (default stdout)");

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate the closed-form size bound");
  bound_cmd->add_option("--n", bound.n, "Group dimension")->required();
  bound_cmd->add_option("--alpha", bound.alpha, "Density as p/q")->required();
  bound_cmd->add_option("--c", bound.c, "Parameter c as p/q")->required();

  SubspaceArgs subspace;
  auto* subspace_cmd = app.add_subcommand("subspace", "Exact maximum linear subspace inside a set");
  subspace_cmd->add_option("--in", subspace.in, "Input F2SET file")->required();
  subspace_cmd->add_flag("--affine", subspace.affine, "Search cosets instead of linear subspaces");
  subspace_cmd->add_option("--max-nodes", subspace.max_nodes, "Give up after this many search nodes");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out, err);
    if (*dcset_cmd) return cmd_dcset(dcset, out, err);
    if (*construct_cmd) return cmd_construct(construct, out, err);
    if (*verify_cmd) return cmd_verify(verify, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep, out, err);
    if (*bound_cmd) return cmd_bound(bound, out, err);
    if (*subspace_cmd) return cmd_subspace(subspace, out, err);
  } catch (const RetryExhausted&) {
    return kRetryExhausted;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace popdiff::cli
