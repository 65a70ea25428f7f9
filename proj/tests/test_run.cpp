#include <sstream>

#include <gtest/gtest.h>

#include "subharmonic/io/run.hpp"
#include "support.hpp"

using namespace subharmonic;

namespace {

io::RunConfig hald_config() {
  io::RunConfig c;
  c.command = io::Command::Select;
  c.input = testing_support::data_path("hald.csv");
  c.nus = {0.95, 0.5};
  return c;
}

std::pair<int, std::string> run_capture(const io::RunConfig& c, std::string* warnings = nullptr) {
  std::ostringstream out;
  std::ostringstream warn;
  const int code = io::run(c, out, warn);
  if (warnings) *warnings = warn.str();
  return {code, out.str()};
}

}  // namespace

TEST(Run, SelectJsonIsDeterministicApartFromTimestamp) {
  const auto [c1, a] = run_capture(hald_config());
  const auto [c2, b] = run_capture(hald_config());
  ASSERT_EQ(c1, 0);
  ASSERT_EQ(c2, 0);
  auto ja = io::json::parse(a);
  auto jb = io::json::parse(b);
  EXPECT_TRUE(ja.contains("generated_at"));
  ja.erase("generated_at");
  jb.erase("generated_at");
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_EQ(ja["blocks"].size(), 3U);
  EXPECT_EQ(ja["blocks"][0]["models"][0]["model"], "{1,2}");
}

TEST(Run, TableLayout) {
  auto c = hald_config();
  c.format = io::Format::Table;
  c.methods = {Method::LaplacePhi, Method::BIC};
  c.nus = {0.95, 0.5, 0.0, -1.0, -2.0};
  std::string warnings;
  const auto [code, text] = run_capture(c, &warnings);
  ASSERT_EQ(code, 0);
  EXPECT_NE(text.find("nu = -2"), std::string::npos);
  EXPECT_NE(text.find("bic"), std::string::npos);
  EXPECT_NE(warnings.find("nu = -1"), std::string::npos);
  EXPECT_EQ(warnings.find("nu = 0.5"), std::string::npos);
}

TEST(Run, ErrorsBecomeJson) {
  auto c = hald_config();
  c.input = "/no/such/file.csv";
  const auto [code, text] = run_capture(c);
  EXPECT_NE(code, 0);
  const auto j = io::json::parse(text);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["error"]["code"], "IoError");

  c = hald_config();
  c.methods = {Method::ExactQuadrature};
  c.nus = {-1.0};
  const auto [code2, text2] = run_capture(c);
  EXPECT_NE(code2, 0);
  EXPECT_EQ(io::json::parse(text2)["error"]["code"], "InvalidConfig");

  c = hald_config();
  c.rel_tol = 0.1;
  EXPECT_NE(run_capture(c).first, 0);
}

TEST(Run, CheckVariantWithNullModel) {
  auto c = hald_config();
  c.variant = Variant::Check;
  c.prior = ModelPrior::Kind::UniformAll;
  c.methods = {Method::ExactQuadrature, Method::BIC};
  c.top = 0;
  const auto [code, text] = run_capture(c);
  ASSERT_EQ(code, 0) << text;
  EXPECT_EQ(io::json::parse(text)["blocks"][0]["models"].size(), 16U);
}

TEST(Run, BenchLaplaceErrorShrinks) {
  io::RunConfig c;
  c.command = io::Command::BenchLaplace;
  c.n_grid = {100, 1000, 10000};
  c.q = 2;
  c.nus = {0.5};
  c.r = 0.5;
  const auto [code, text] = run_capture(c);
  ASSERT_EQ(code, 0) << text;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("n,q,nu,k,r,log_exact", 0), 0U);
  double previous = INFINITY;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    const double abs_err = std::stod(cells[8]);
    EXPECT_LT(abs_err, previous);
    previous = abs_err;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(Run, SimulateAndSweepSmoke) {
  io::RunConfig c;
  c.command = io::Command::Simulate;
  c.replicates = 3;
  c.format = io::Format::Csv;
  const auto [code, text] = run_capture(c);
  ASSERT_EQ(code, 0) << text;
  EXPECT_EQ(text.rfind("rule,replicates", 0), 0U);

  c.command = io::Command::Sweep;
  c.n_grid = {50, 100};
  c.error = "t3";
  const auto [code2, text2] = run_capture(c);
  ASSERT_EQ(code2, 0) << text2;
  EXPECT_EQ(std::count(text2.begin(), text2.end(), '\n'), 1 + 2 * 2);
}

TEST(Run, ParseHelpers) {
  EXPECT_EQ(io::parse_error_model("t3").df, 3.0);
  EXPECT_EQ(io::parse_error_model("t:4.5").df, 4.5);
  EXPECT_EQ(io::parse_error_model("gaussian").family, ErrorModel::Family::Gaussian);
  EXPECT_THROW(io::parse_error_model("cauchy"), Error);
  EXPECT_EQ(io::parse_format("table"), io::Format::Table);
  EXPECT_THROW(io::parse_format("xml"), Error);
}
