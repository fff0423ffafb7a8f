#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hsnet::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hsnet-cli-" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig config(const std::string& text) {
    RunConfig c = parse_config(text);
    c.base_dir = dir_;
    return c;
  }

  fs::path dir_;
};

const char* kWorked = R"(
[domain]
lower = 0
upper = 1
[kernel]
term0 = constant(c=1)
[parameters]
p = 2
r = 1
gamma = 2
partition_delta = 1
magnitude_delta = 0.1
sigma = 0.1
[run]
samples = 200
)";

const char* kToy = R"(
[domain]
lower = 0
upper = 1
[kernel]
term0 = constant(c=1)
[parameters]
p = 2
r = 1
gamma = 1
partition_delta = 1
magnitude_intervals = 2
sigma = 1
[run]
samples = 100
)";

TEST_F(CliTest, ConfigRoundTrip) {
  const std::string text = R"(
[domain]
lower = 0, -1
upper = 1, 0.5
[kernel]
rows = 2
cols = 3
norm = frobenius
terms = 2
term0 = gaussian(beta=1.5)
coeff0 = 1, 0, 0, 0, 1, 0
term1 = separable(a=0.1, b=2)
coeff1 = 0.1, 0.2, 0.3, 0.4, 0.5, 0.6
metrics = estimated
metrics_resolution = 9
[parameters]
p = 2.5
r = 0.3
gamma = 0.7
partition_delta = 0.45
magnitude_intervals = 7
sigma = 0.9
lambda = 0.001
[run]
quadrature_order = 4
samples = 12
seed = 18446744073709551615
family_mode = sample
smoothness = mixed
boundary_fraction = 0.1
report = out/report.json
)";
  const RunConfig a = parse_config(text);
  const std::string once = serialize_config(a);
  const RunConfig b = parse_config(once);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_config(b), once);
  EXPECT_EQ(b.run.seed, 18446744073709551615ULL);
  EXPECT_EQ(b.kernel.coefficients[1][5], 0.6);
}

TEST_F(CliTest, ErrorsNameTheField) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  std::string worked = kWorked;
  const auto replaced = [&](const std::string& from, const std::string& to) {
    std::string t = worked;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  EXPECT_NE(message(replaced("p = 2", "p = 1")).find("parameters.p"), std::string::npos);
  EXPECT_NE(message(replaced("\nr = 1", "\nr = -1")).find("parameters.r"), std::string::npos);
  EXPECT_NE(message(replaced("sigma = 0.1", "sigma = 0.1\nepsilon = 0.5"))
                .find("epsilon"),
            std::string::npos);
  EXPECT_NE(message(replaced("samples = 200", "samplez = 200")).find("run.samplez"),
            std::string::npos);
  EXPECT_NE(message(replaced("[run]", "[extra]")).find("extra"), std::string::npos);
  EXPECT_NE(message(replaced("magnitude_delta = 0.1", "magnitude_delta = 0.3"))
                .find("magnitude_delta"),
            std::string::npos);
  EXPECT_FALSE(message(replaced("sigma = 0.1\n", "")).empty());
}

TEST_F(CliTest, BoundWorkedExample) {
  std::ostringstream out;
  EXPECT_EQ(cmd_bound(config(kWorked), {}, out), kPass);
  const Json j = Json::parse(out.str());
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_DOUBLE_EQ(j["bound"]["total"].get<double>(), 1.3);
  EXPECT_EQ(parse_config(j["config"].get<std::string>()), parse_config(kWorked));
}

TEST_F(CliTest, BoundZeroKernelIsLambda) {
  std::string text = kWorked;
  text.replace(text.find("term0 = constant(c=1)"), 21, "terms = 0");
  text += "";
  text.replace(text.find("sigma = 0.1"), 11, "sigma = 0.1\nlambda = 0.125");
  std::ostringstream out;
  EXPECT_EQ(cmd_bound(config(text), {}, out), kPass);
  EXPECT_EQ(Json::parse(out.str())["bound"]["total"].get<double>(), 0.125);
}

TEST_F(CliTest, BoundEpsilonMode) {
  const std::string text = R"(
[domain]
lower = 0
upper = 1
[kernel]
term0 = gaussian(beta=2)
[parameters]
p = 2
r = 1
epsilon = 0.5
)";
  std::ostringstream out;
  EXPECT_EQ(cmd_bound(config(text), {}, out), kPass);
  const Json j = Json::parse(out.str());
  EXPECT_TRUE(j.contains("selection"));
  EXPECT_LE(j["bound"]["total"].get<double>(), 0.5 + 1e-12);
}

TEST_F(CliTest, BuildToyFamily) {
  std::ostringstream out;
  EXPECT_EQ(cmd_build(config(kToy), {}, out), kPass);
  const Json j = Json::parse(out.str());
  EXPECT_EQ(j["family"]["count"], "5");
  const auto fam = lines(dir_ / "family.csv");
  const auto img = lines(dir_ / "images.csv");
  ASSERT_EQ(fam.size(), 6u);
  ASSERT_EQ(img.size(), 6u);
  EXPECT_EQ(fam[0], "member,j0,l0");
  EXPECT_EQ(fam[1], "0,0,0");
  EXPECT_EQ(img[0].rfind("member,y0_0", 0), 0u);
}

TEST_F(CliTest, BuildTinyRadiusLeavesZero) {
  std::string text = kToy;
  text.replace(text.find("\nr = 1\n"), 7, "\nr = 1e-9\n");
  std::ostringstream out;
  EXPECT_EQ(cmd_build(config(text), {}, out), kPass);
  EXPECT_EQ(Json::parse(out.str())["family"]["count"], "1");
  EXPECT_EQ(lines(dir_ / "images.csv").size(), 2u);
}

TEST_F(CliTest, BuildSamplingMode) {
  std::string text = kToy;
  text += "family_mode = sample\nfamily_samples = 100\n";
  std::ostringstream out;
  EXPECT_EQ(cmd_build(config(text), {}, out), kPass);
  const auto fam = lines(dir_ / "family.csv");
  EXPECT_EQ(fam.size(), 101u);
  EXPECT_EQ(lines(dir_ / "images.csv").size(), 101u);
}

TEST_F(CliTest, BuildOverCapWritesCountAndFails) {
  std::string text = kToy;
  text.replace(text.find("partition_delta = 1"), 19, "partition_delta = 0.1");
  text += "enumeration_cap = 10\n";
  std::ostringstream out;
  EXPECT_EQ(cmd_build(config(text), {}, out), kResourceError);
  const Json j = Json::parse(out.str());
  EXPECT_FALSE(j["family"]["enumerated"].get<bool>());
  EXPECT_NE(j["family"]["count"], "unknown");
}

TEST_F(CliTest, VerifyPassesForcedFailureFails) {
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(config(kWorked), {}, out), kPass);
  EXPECT_TRUE(Json::parse(out.str())["pass"].get<bool>());
  std::string text = kWorked;
  text += "bound_scale = 0.01\n";
  std::ostringstream bad;
  EXPECT_EQ(cmd_verify(config(text), {}, bad), kVerificationFailed);
  EXPECT_FALSE(Json::parse(bad.str())["pass"].get<bool>());
}

TEST_F(CliTest, VerifyIsByteIdentical) {
  const RunConfig c = config(kWorked);
  std::ostringstream summary;
  cmd_verify(c, {"a.json"}, summary);
  cmd_verify(c, {"b.json"}, summary);
  const std::string a = read_file(dir_ / "a.json");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, read_file(dir_ / "b.json"));
  EXPECT_NE(summary.str().find("PASS"), std::string::npos);
}

TEST_F(CliTest, SweepSigmaAndGamma) {
  const RunConfig c = config(kWorked);
  std::ostringstream out;
  EXPECT_EQ(cmd_sweep(c, {"sigma", {0.4, 0.2, 0.1}, "sigma.csv"}, out), kPass);
  const auto rows = lines(dir_ / "sigma.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].rfind("sigma,total,", 0), 0u);
  std::vector<double> totals;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto first = rows[i].find(',');
    totals.push_back(std::stod(rows[i].substr(first + 1)));
  }
  EXPECT_GT(totals[0], totals[1]);
  EXPECT_GT(totals[1], totals[2]);

  EXPECT_EQ(cmd_sweep(c, {"gamma", {1.0, 2.0, 4.0}, "gamma.csv"}, out), kPass);
  const auto grows = lines(dir_ / "gamma.csv");
  ASSERT_EQ(grows.size(), 4u);
  std::vector<double> tails;
  for (std::size_t i = 1; i < grows.size(); ++i) {
    std::stringstream ss(grows[i]);
    std::string cell;
    for (int col = 0; col <= 3; ++col) std::getline(ss, cell, ',');
    tails.push_back(std::stod(cell));
  }
  EXPECT_GT(tails[0], tails[1]);
  EXPECT_GT(tails[1], tails[2]);

  EXPECT_EQ(cmd_sweep(c, {"sigma", {0.3}, "one.csv"}, out), kPass);
  EXPECT_EQ(lines(dir_ / "one.csv").size(), 2u);
}

TEST_F(CliTest, SweepRejectsUnknownAxis) {
  std::ostringstream out;
  EXPECT_THROW(cmd_sweep(config(kWorked), {"beta", {1.0}, ""}, out), ConfigError);
}

TEST_F(CliTest, TabulatedKernelMatchesBuiltinBound) {
  const std::string builtin = R"(
[domain]
lower = 0
upper = 1
[kernel]
term0 = dot
[parameters]
p = 2
r = 1
gamma = 2
partition_delta = 0.5
magnitude_intervals = 20
sigma = 1
)";
  std::ostringstream out;
  EXPECT_EQ(cmd_tabulate(config(builtin), 5, "dot.tbl", true, out), kPass);
  std::string table = builtin;
  table.replace(table.find("term0 = dot"), 11, "table = dot.tbl");
  std::ostringstream a, b;
  cmd_bound(config(builtin), {}, a);
  cmd_bound(config(table), {}, b);
  EXPECT_NEAR(Json::parse(a.str())["bound"]["total"].get<double>(),
              Json::parse(b.str())["bound"]["total"].get<double>(), 1e-12);
}

TEST_F(CliTest, AcceptanceConfigLoads) {
  const RunConfig c = load_config(fs::path(HSNET_TEST_DATA) / "constant_kernel.ini");
  EXPECT_EQ(c.parameters.magnitude_intervals, 40u);
  EXPECT_EQ(c.run.seed, 7u);
}

}  // namespace
}  // namespace hsnet::cli
