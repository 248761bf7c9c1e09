#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "json.hpp"
#include "output.hpp"
#include "rqcm/errors.hpp"

using namespace rqcm::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rqcm_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Output, IntegerLists) {
  EXPECT_EQ(parse_int_list("4..7"), (std::vector<int>{4, 5, 6, 7}));
  EXPECT_EQ(parse_int_list("4..10:3"), (std::vector<int>{4, 7, 10}));
  EXPECT_EQ(parse_int_list("2,4..5,9"), (std::vector<int>{2, 4, 5, 9}));
  EXPECT_THROW(parse_int_list("7..4"), rqcm::Error);
  EXPECT_THROW(parse_int_list("a"), rqcm::Error);
  EXPECT_THROW(parse_int_list(""), rqcm::Error);
}

TEST(Output, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 0.75372914026927684, 1e-300, -2.5e17}) {
    EXPECT_EQ(std::stod(fmt17(v)), v);
  }
}

TEST(Output, CsvRowWidthChecked) {
  std::ostringstream os;
  CsvWriter w(os, {"a", "b"});
  w.row({"1", "2"});
  EXPECT_EQ(os.str(), "a,b\n1,2\n");
  EXPECT_THROW(w.row({"1"}), rqcm::Error);
}

TEST(GapScan, HeaderAndByteIdenticalRerun) {
  GapScanOptions o;
  o.t = 2;
  o.n_list = "4..9";
  o.out = scratch("g1.csv").string();
  ASSERT_EQ(run_gap_scan(o), kExitOk);
  o.out = scratch("g2.csv").string();
  ASSERT_EQ(run_gap_scan(o), kExitOk);
  const std::string a = slurp(scratch("g1.csv")), b = slurp(scratch("g2.csv"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "n,dim,unit_multiplicity,lambda1,gap,meanfield_prediction,rel_dev");

  const auto doc = nlohmann::json::parse(slurp(scratch("g1.json")));
  EXPECT_EQ(doc["command"], "gap-scan");
  EXPECT_TRUE(doc.contains("version"));
  EXPECT_TRUE(doc.contains("seed"));
  EXPECT_EQ(doc["parameters"]["n"], "4..9");
  EXPECT_NEAR(doc["meanfield"]["a1"].get<double>(), 1.2, 1e-10);
}

TEST(GapScan, UnreadableGateSetIsAnError) {
  GapScanOptions o;
  o.dist = "/nonexistent/set.json";
  o.out = scratch("bad.csv").string();
  EXPECT_THROW(run_gap_scan(o), rqcm::FormatError);
}

TEST(Bound, WritesBothBounds) {
  BoundOptions o;
  o.gap = 0.12;
  o.n = 10;
  o.t = 2;
  o.json = scratch("bound.json").string();
  ASSERT_EQ(run_bound(o), kExitOk);
  const auto doc = nlohmann::json::parse(slurp(o.json));
  EXPECT_EQ(doc["k_c"], 174);
  EXPECT_EQ(doc["k_c_sharper"], 163);
  o.lambda1 = 0.5;
  EXPECT_THROW(run_bound(o), rqcm::InvalidArgument);  // two gap sources
}

TEST(MeanField, JsonFields) {
  MeanFieldOptions o;
  o.t = 2;
  o.json = scratch("mf.json").string();
  ASSERT_EQ(run_meanfield(o), kExitOk);
  const auto doc = nlohmann::json::parse(slurp(o.json));
  EXPECT_NEAR(doc["a1"].get<double>(), 1.2, 1e-10);
  EXPECT_EQ(doc["band"], "symmetric");
  EXPECT_EQ(doc["witness_terms"].size(), 3u);
}

TEST(McValidate, SmallRunWritesCsvAndVerdict) {
  McValidateOptions o;
  o.n = 3;
  o.depths = "1..12";
  o.replicas = 3000;
  o.min_fit_depth = 0;
  o.out = scratch("mc.csv").string();
  const int code = run_mc_validate(o);
  EXPECT_TRUE(code == kExitOk || code == kExitVerdict);
  const std::string csv = slurp(o.out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "depth,replicas,mean,stderr,signal,used_in_fit");
  const auto doc = nlohmann::json::parse(slurp(scratch("mc.json")));
  EXPECT_TRUE(doc["verdict"] == "consistent" || doc["verdict"] == "inconsistent");
  EXPECT_EQ(doc["seed"], 7);
}
