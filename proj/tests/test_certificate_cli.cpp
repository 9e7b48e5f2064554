#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "popdiff/certificate.hpp"
#include "popdiff/cli.hpp"

namespace popdiff {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    Rng rng(static_cast<std::uint64_t>(::testing::UnitTest::GetInstance()->random_seed()) ^
            reinterpret_cast<std::uintptr_t>(this));
    path_ = fs::temp_directory_path() / ("popdiff_test_" + std::to_string(rng.next()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

Certificate sample_certificate(std::uint64_t seed = 3) {
  Rng rng(seed);
  const auto a = random_set(GroupDim(12), 2048, rng);
  return construct_popular_sumset(a, Rational::parse("1/8"), seed);
}

TEST(CertificateJsonTest, FreshCertificateVerifies) {
  const auto cert = sample_certificate();
  ASSERT_TRUE(cert.verified);
  const Json doc = Json::parse(dump_certificate(cert));
  EXPECT_EQ(doc.at("format"), kCertificateFormat);
  EXPECT_EQ(doc.at("input").at("card_A"), 2048u);
  EXPECT_EQ(doc.at("input").at("c"), "1/8");
  EXPECT_EQ(doc.at("A_2").get<std::string>().size(), hex_length(GroupDim(12)));
  const auto outcome = verify_certificate(doc);
  EXPECT_TRUE(outcome.ok) << outcome.failed_check << ": " << outcome.detail;
  EXPECT_EQ(doc.dump(2) + "\n", dump_certificate(cert));
}

TEST(CertificateJsonTest, KeyOrderIsStable) {
  const Json doc = to_json(sample_certificate());
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  const std::vector<std::string> expected = {"format", "input", "seed", "budgets", "exploratory", "plan",
                                             "translates", "A_0", "A_1", "A_2", "stats", "dc_card",
                                             "theorem_bound", "trivial", "verified", "guarantee_met"};
  EXPECT_EQ(keys, expected);
}

TEST(CertificateJsonTest, InputsRoundTrip) {
  const auto cert = sample_certificate(5);
  const auto in = certificate_inputs(to_json(cert));
  EXPECT_EQ(in.a, cert.a);
  EXPECT_EQ(in.c, cert.c);
  EXPECT_EQ(in.seed, 5u);
  EXPECT_EQ(in.budgets.lemma_trials, cert.budgets.lemma_trials);
  EXPECT_FALSE(in.exploratory);
}

// Each edit must be caught; the check that catches it is recorded too.
TEST(CertificateTamperTest, EditsAreRejected) {
  const Json good = to_json(sample_certificate());
  const GroupDim dim(12);
  const DenseSet a2 = from_hex(dim, good.at("A_2").get<std::string>());
  const DenseSet a = from_hex(dim, good.at("input").at("A").get<std::string>());

  auto with = [&](auto&& edit) {
    Json doc = good;
    edit(doc);
    return verify_certificate(doc);
  };

  Point outside = 0;
  while (a2.contains(outside)) ++outside;
  struct Case {
    const char* name;
    VerifyOutcome outcome;
  };
  const std::vector<Case> cases = {
      {"add to A_2", with([&](Json& d) {
         auto s = a2;
         s.insert(outside);
         d["A_2"] = to_hex(s);
       })},
      {"seed", with([](Json& d) { d["seed"] = d["seed"].get<std::uint64_t>() + 1; })},
      {"threshold", with([](Json& d) { d["plan"]["filter_min"] = d["plan"]["filter_min"].get<std::uint64_t>() - 1; })},
      {"big threshold", with([](Json& d) { d["plan"]["pair_min"] = "1"; })},
      {"translates", with([](Json& d) { d["translates"][0] = d["translates"][0].get<Point>() ^ 1; })},
      {"stats", with([](Json& d) { d["stats"]["lemma_trials"] = d["stats"]["lemma_trials"].get<std::uint64_t>() + 1; })},
      {"flag", with([](Json& d) { d["guarantee_met"] = !d["guarantee_met"].get<bool>(); })},
      {"input set", with([&](Json& d) {
         auto s = a;
         s.erase(s.points().front());
         d["input"]["A"] = to_hex(s);
       })},
      {"c", with([](Json& d) { d["input"]["c"] = "1/7"; })},
      {"missing key", with([](Json& d) { d.erase("stats"); })},
      {"format", with([](Json& d) { d["format"] = "other"; })},
      {"extra key", with([](Json& d) { d["note"] = 1; })},
  };
  for (const auto& c : cases) EXPECT_FALSE(c.outcome.ok) << c.name;
  EXPECT_EQ(cases[7].outcome.failed_check, "input");
  EXPECT_EQ(cases[9].outcome.failed_check, "replay");
  EXPECT_EQ(cases[10].outcome.failed_check, "schema");
}

// With A a hyperplane V and c = 1/4, D_c(A) = V, so a point from the other
// coset breaks containment, the first semantic check.
TEST(CertificateTamperTest, ContainmentIsCheckedFirst) {
  std::vector<Point> basis;
  for (int j = 0; j < 9; ++j) basis.push_back(Point{1} << j);
  const auto v = linear_subspace(GroupDim(10), basis);
  const auto cert = construct_popular_sumset(v, Rational::parse("1/4"), 0);
  ASSERT_TRUE(cert.verified);
  Json doc = to_json(cert);
  ASSERT_TRUE(verify_certificate(doc).ok);
  auto a2 = cert.a2;
  const Point first = a2.points().front();
  a2.insert(first ^ 512);
  doc["A_2"] = to_hex(a2);
  const auto outcome = verify_certificate(doc);
  EXPECT_FALSE(outcome.ok);
  EXPECT_EQ(outcome.failed_check, "containment");
}

TEST(CliTest, GenDcsetConstructVerify) {
  TempDir dir;
  const auto set = dir.file("a.f2set");
  ASSERT_EQ(cli({"gen", "--n", "12", "--card", "2048", "--seed", "1", "--out", set}).code, 0);
  EXPECT_EQ(load_f2set(set).size(), 2048u);

  const auto d = cli({"dcset", "--in", set, "--c", "1/8"});
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.err.find("|D_c(A)|="), std::string::npos);
  EXPECT_EQ(parse_f2set(d.out), popular_difference_set(load_f2set(set), Rational::parse("1/8")));

  const auto cert = dir.file("cert.json");
  const auto c = cli({"construct", "--in", set, "--c", "1/8", "--seed", "4", "--out", cert});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.err.find("verified"), std::string::npos);
  const auto v = cli({"verify", cert});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, "verified\n");

  Json doc = load_json(cert);
  doc["seed"] = 5;
  std::ofstream(dir.file("bad.json")) << doc.dump(2);
  const auto bad = cli({"verify", dir.file("bad.json")});
  EXPECT_EQ(bad.code, 3);
  EXPECT_EQ(bad.out.rfind("FAILED ", 0), 0u);
}

TEST(CliTest, GenFamilies) {
  const auto sub = cli({"gen", "--n", "6", "--family", "subspace", "--dim", "3", "--seed", "2"});
  ASSERT_EQ(sub.code, 0);
  const auto v = parse_f2set(sub.out);
  EXPECT_EQ(v.size(), 8u);
  EXPECT_EQ(sumset(v, v), v);
  const auto niv = cli({"gen", "--n", "4", "--family", "niveau", "--wmin", "3"});
  ASSERT_EQ(niv.code, 0);
  EXPECT_EQ(parse_f2set(niv.out), make_set(GroupDim(4), {7, 11, 13, 14, 15}));
}

TEST(CliTest, Bound) {
  EXPECT_EQ(cli({"bound", "--n", "16", "--alpha", "1/2", "--c", "1/16"}).out, "42\n");
  EXPECT_EQ(cli({"bound", "--n", "20", "--alpha", "1/2", "--c", "1/4"}).out, "10\n");
  EXPECT_EQ(cli({"bound", "--n", "12", "--alpha", "1/2", "--c", "1/8"}).out, "2\n");
  EXPECT_EQ(cli({"bound", "--n", "12", "--alpha", "1/2", "--c", "1/2"}).out, "0\n");
}

TEST(CliTest, SweepCsv) {
  const auto r = cli({"sweep", "--n", "8,10", "--alpha", "1/2", "--c", "1/4", "--seeds", "2", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kSweepHeader);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 14);
  }
  EXPECT_EQ(rows, 4);
  // single-threaded rerun gives the same bytes
  EXPECT_EQ(cli({"sweep", "--n", "8,10", "--alpha", "1/2", "--c", "1/4", "--seeds", "2"}).out, r.out);
}

TEST(CliTest, Subspace) {
  TempDir dir;
  const auto set = dir.file("v.f2set");
  save_f2set(set, linear_subspace(GroupDim(5), {3, 12}));
  const auto r = cli({"subspace", "--in", set});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "dimension 2\ncardinality 4\nbasis 0x3 0xc\n");
  save_f2set(set, translate(linear_subspace(GroupDim(5), {3, 12}), 16));
  const auto aff = cli({"subspace", "--in", set, "--affine"});
  EXPECT_NE(aff.out.find("dimension 2"), std::string::npos);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"nonsense"}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"bound", "--n", "12", "--alpha", "0.5", "--c", "1/8"}).code, 1);
  EXPECT_EQ(cli({"dcset", "--in", "/nonexistent/file", "--c", "1/2"}).code, 1);
  EXPECT_EQ(cli({"verify", "/nonexistent/file"}).code, 1);

  TempDir dir;
  const auto set = dir.file("a.f2set");
  ASSERT_EQ(cli({"gen", "--n", "12", "--card", "2048", "--seed", "1", "--out", set}).code, 0);
  // c outside (0, 1/2] without --exploratory
  EXPECT_EQ(cli({"construct", "--in", set, "--c", "3/4"}).code, 1);
  EXPECT_EQ(cli({"construct", "--in", set, "--c", "1/8", "--lemma-trials", "0"}).code, 1);
  // on a hyperplane A_0 is empty unless all four translates pick the same coset
  const auto hyper = dir.file("h.f2set");
  ASSERT_EQ(cli({"gen", "--n", "10", "--family", "subspace", "--dim", "9", "--out", hyper}).code, 0);
  const auto exhausted = cli({"construct", "--in", hyper, "--c", "1/4", "--seed", "1", "--lemma-trials", "1"});
  EXPECT_EQ(exhausted.code, 2);
  EXPECT_NE(exhausted.err.find("stage lemma"), std::string::npos);
  EXPECT_EQ(cli({"construct", "--in", set, "--c", "1", "--exploratory"}).code, 0);
  save_f2set(set, DenseSet(GroupDim(4)));
  EXPECT_EQ(cli({"construct", "--in", set, "--c", "1/4"}).code, 1);
}

}  // namespace
}  // namespace popdiff
