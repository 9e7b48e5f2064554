#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "popdiff/construction.hpp"
#include "popdiff/correlation.hpp"
#include "popdiff/errors.hpp"
#include "popdiff/f2set_io.hpp"

namespace popdiff {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCertificateFormat = "popdiff-certificate v1";

inline Json plan_to_json(const ConstructionPlan& plan) {
  return Json{{"sigma", plan.sigma_inv ? plan.sigma().to_string() : std::string("0")},
              {"r", plan.r},
              {"target_A1_size", plan.target_a1},
              {"guarantee", plan.guarantee},
              {"trivial", plan.trivial},
              {"lemma_min_excess", plan.lemma_min_excess.str()},
              {"pair_min", plan.pair_min.str()},
              {"filter_min", plan.filter_min}};
}

inline Json to_json(const Certificate& cert) {
  auto optional_set = [](const std::optional<DenseSet>& s) { return s ? Json(to_hex(*s)) : Json(nullptr); };
  Json doc;
  doc["format"] = kCertificateFormat;
  doc["input"] = Json{{"n", cert.n()},
                      {"card_A", cert.a.size()},
                      {"c", cert.c.to_string()},
                      {"set_hash", cert.set_hash()},
                      {"A", to_hex(cert.a)}};
  doc["seed"] = cert.seed;
  doc["budgets"] = Json{{"lemma_trials", cert.budgets.lemma_trials}, {"refine_trials", cert.budgets.refine_trials}};
  doc["exploratory"] = cert.exploratory;
  doc["plan"] = plan_to_json(cert.plan);
  doc["translates"] = cert.translates;
  doc["A_0"] = optional_set(cert.a0);
  doc["A_1"] = optional_set(cert.a1);
  doc["A_2"] = to_hex(cert.a2);
  doc["stats"] = Json{{"lemma_trials", cert.stats.lemma_trials},   {"A0_card", cert.stats.a0_card},
                      {"S_count", cert.stats.s_count},             {"A0_pairs_in_D", cert.stats.a0_pairs_in_d},
                      {"refine_trials", cert.stats.refine_trials}, {"A1_pairs_in_D", cert.stats.a1_pairs_in_d},
                      {"A2_card", cert.stats.a2_card}};
  doc["dc_card"] = cert.dc_card;
  doc["theorem_bound"] = cert.bound ? Json(*cert.bound) : Json(nullptr);
  doc["trivial"] = cert.trivial;
  doc["verified"] = cert.verified;
  doc["guarantee_met"] = cert.guarantee_met;
  return doc;
}

inline std::string dump_certificate(const Certificate& cert) { return to_json(cert).dump(2) + "\n"; }

// Fields a replay needs; everything else is recomputed, never trusted.
struct CertificateInputs {
  DenseSet a;
  Rational c;
  std::uint64_t seed = 0;
  Budgets budgets;
  bool exploratory = false;
};

inline CertificateInputs certificate_inputs(const Json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kCertificateFormat) throw FormatError("unknown certificate format");
    const auto& input = doc.at("input");
    const GroupDim dim(input.at("n").get<int>());
    CertificateInputs in{from_hex(dim, input.at("A").get<std::string>()),
                         Rational::parse(input.at("c").get<std::string>()),
                         doc.at("seed").get<std::uint64_t>(),
                         {doc.at("budgets").at("lemma_trials").get<std::uint64_t>(),
                          doc.at("budgets").at("refine_trials").get<std::uint64_t>()},
                         doc.at("exploratory").get<bool>()};
    return in;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("certificate schema: ") + e.what());
  } catch (const RangeError& e) {
    throw FormatError(std::string("certificate schema: ") + e.what());
  }
}

struct VerifyOutcome {
  bool ok = false;
  std::string failed_check;  // empty when ok
  std::string detail;
};

namespace detail {

inline std::optional<DenseSet> stored_set(const Json& doc, const char* key, GroupDim dim) {
  const auto& v = doc.at(key);
  if (v.is_null()) return std::nullopt;
  return from_hex(dim, v.get<std::string>());
}

inline VerifyOutcome fail(std::string check, std::string detail) { return {false, std::move(check), std::move(detail)}; }

inline VerifyOutcome verify_fields(const Json& doc) {
  CertificateInputs in{DenseSet(GroupDim(1)), Rational(), 0, {}, false};
  std::optional<DenseSet> a0, a1;
  DenseSet a2(GroupDim(1));
  std::vector<Point> translates;
  try {
    in = certificate_inputs(doc);
    const GroupDim dim = in.a.dim();
    a0 = stored_set(doc, "A_0", dim);
    a1 = stored_set(doc, "A_1", dim);
    a2 = from_hex(dim, doc.at("A_2").get<std::string>());
    translates = doc.at("translates").get<std::vector<Point>>();
    for (Point t : translates) in.a.check_point(t);
  } catch (const std::exception& e) {
    return fail("schema", e.what());
  }

  const auto& input = doc.at("input");
  if (input.at("set_hash") != Certificate(in.a).set_hash()) return fail("input", "set hash does not match A");
  if (input.at("card_A") != in.a.size()) return fail("input", "card_A does not match A");
  if (in.a.empty()) return fail("input", "A is empty");

  const DenseSet popular = popular_difference_set(in.a, in.c);
  if (!verify_containment(a2, popular)) return fail("containment", "A_2 + A_2 is not contained in D_c(A)");

  const bool trivial = doc.at("trivial").is_boolean() && doc.at("trivial").get<bool>();
  if (!trivial) {
    if (!a0 || !a1) return fail("structure", "missing A_0 or A_1");
    if (intersect_translates(in.a, translates) != *a0)
      return fail("structure", "A_0 is not the intersection of the stored translates of A");
    if (!a1->is_subset_of(*a0) || !a2.is_subset_of(*a1))
      return fail("structure", "A_2 subset A_1 subset A_0 fails");
  }

  ConstructionPlan plan;
  try {
    plan = choose_sigma(in.a.dim().n(), in.a.size(), in.c);
  } catch (const std::exception& e) {
    return fail("plan", e.what());
  }
  if (doc.at("plan") != plan_to_json(plan)) return fail("plan", "stored plan differs from recomputed plan");

  if (!trivial) {
    if (!plan_consistent(plan)) return fail("plan", "recomputed plan is inconsistent");
    if (!audit_lemma_set(*a0, in.a, popular, plan).ok())
      return fail("audit", "A_0 violates the lemma size or pair-density bound");
    for (Point x : a2.points())
      if (!a1->translated(x).is_subset_of(popular)) return fail("audit", "x + A_1 not in D for some x in A_2");
    if (2 * a2.size() < a1->size()) return fail("audit", "|A_2| < |A_1| / 2");
  }

  std::optional<Certificate> replayed;
  try {
    replayed = construct_popular_sumset(in.a, in.c, in.seed, in.budgets, in.exploratory);
  } catch (const std::exception& e) {
    return fail("replay", e.what());
  }
  const Json expected = to_json(*replayed);
  for (const auto& [key, value] : expected.items()) {
    if (!doc.contains(key) || doc.at(key) != value) return fail("replay", "field '" + key + "' differs");
  }
  if (doc.size() != expected.size()) return fail("replay", "unexpected extra fields");
  if (!replayed->verified) return fail("containment", "replayed construction is not verified");
  return {true, "", ""};
}

}  // namespace detail

// Replays a certificate from the document alone. Checks run in order and the
// first failure is reported:
//   schema, input, containment, structure, plan, audit, replay.
inline VerifyOutcome verify_certificate(const Json& doc) {
  try {
    return detail::verify_fields(doc);
  } catch (const nlohmann::json::exception& e) {
    return detail::fail("schema", e.what());
  }
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace popdiff
