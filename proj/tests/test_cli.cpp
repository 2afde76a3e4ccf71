#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "catmap_cli/cli.hpp"

namespace cli = catmap::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "catmap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(CliParsing, MatrixIsRowMajor) {
  const auto g = cli::parse_matrix("2,1,1,1");
  EXPECT_EQ(g, catmap::IntegerSymplecticMatrix::sl2(2, 1, 1, 1));
  EXPECT_THROW(cli::parse_matrix("1,1,1,1"), cli::InputError);
  EXPECT_THROW(cli::parse_matrix("1,2,3"), cli::InputError);
  EXPECT_THROW(cli::parse_matrix("1,x,0,1"), cli::InputError);
}

TEST(CliParsing, Grids) {
  EXPECT_EQ(cli::parse_grid("3..6"), (std::vector<std::int64_t>{3, 4, 5, 6}));
  EXPECT_EQ(cli::parse_grid("2,8,9"), (std::vector<std::int64_t>{2, 8, 9}));
  EXPECT_THROW(cli::parse_grid("0..3"), cli::InputError);
  EXPECT_THROW(cli::parse_grid("5,4"), cli::InputError);
  EXPECT_THROW(cli::parse_grid("4,4"), cli::InputError);
  EXPECT_THROW(cli::parse_grid("6..2"), cli::InputError);
}

TEST(CliParsing, TauAndTolerances) {
  EXPECT_EQ(cli::parse_tau("0.5,2"), catmap::Complex(0.5, 2));
  EXPECT_THROW(cli::parse_tau("0,-1"), cli::InputError);
  EXPECT_EQ(cli::parse_tolerance("egorov=1e-9").second, 1e-9);
  EXPECT_THROW(cli::parse_tolerance("egorov=0"), cli::InputError);
  EXPECT_THROW(cli::parse_tolerance("egorov"), cli::InputError);
}

TEST(CliFormatting, SeventeenDigitsRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 2.5066282746310002, 1e-300}) {
    const std::string s = cli::format_double(x);
    EXPECT_EQ(std::stod(s), x) << s;
  }
}

TEST(CliParallel, KeepsIndexOrder) {
  const auto v = cli::parallel_map<std::size_t>(100, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], i * i);
}

TEST(CliRun, QuantizeCatMap) {
  const Result r = invoke({"quantize", "--g", "2,1,1,1", "--N", "8", "--format", "json"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j.at("egorov_residual").get<double>(), 1e-10);
  EXPECT_TRUE(j.contains("conventions"));
}

TEST(CliRun, TraceOfFourierOverGrid) {
  const Result r = invoke({"trace", "--g", "0,-1,1,0", "--N", "1..16"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 16u);
  for (const auto& t : j) EXPECT_LE(t.at("magnitude_error").get<double>(), 1e-10);
}

TEST(CliRun, CsvHasOneHeader) {
  const Result r = invoke({"spectrum", "--g", "2,1,1,1", "--N", "3,5", "--format", "csv"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 1u + 3u + 5u);
  EXPECT_EQ(lines[0], "a,b,c,d,N,index,eigenphase");
}

TEST(CliRun, DeterministicOutput) {
  const std::vector<std::string> args = {"ergodic", "--g", "2,1,1,1", "--N", "5..9"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
}

TEST(CliRun, OneFilePerJob) {
  const auto dir = std::filesystem::temp_directory_path() / "catmap_cli_test_reports";
  std::filesystem::remove_all(dir);
  const Result r =
      invoke({"period-scan", "--g", "1,1,1,2", "--N", "2..5", "--output", dir.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 4u);
  std::filesystem::remove_all(dir);
}

TEST(CliExitCodes, InvalidMatrix) {
  EXPECT_EQ(invoke({"quantize", "--g", "1,1,1,1", "--N", "4"}).code, cli::kExitInvalidInput);
  EXPECT_EQ(invoke({"verify-all", "--quick", "--g", "1,1,1,1"}).code, cli::kExitInvalidInput);
}

TEST(CliExitCodes, BadFlagsAndHelp) {
  EXPECT_EQ(invoke({"quantize", "--N", "4"}).code, cli::kExitInvalidInput);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitInvalidInput);
  EXPECT_EQ(invoke({"trace", "--g", "1,0,0,1", "--N", "3"}).code, cli::kExitInvalidInput);
  EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST(CliExitCodes, ParityWarningAndStrictMode) {
  // N b d is odd for T at odd N
  const Result warn = invoke({"quantize", "--g", "1,1,0,1", "--N", "3"});
  EXPECT_EQ(warn.code, cli::kExitOk);
  EXPECT_NE(warn.err.find("warning"), std::string::npos);
  EXPECT_EQ(invoke({"quantize", "--g", "1,1,0,1", "--N", "3", "--strict-theta"}).code,
            cli::kExitParity);
  EXPECT_EQ(invoke({"quantize", "--g", "0,-1,1,0", "--N", "4", "--strict-theta"}).code,
            cli::kExitOk);
}

TEST(CliExitCodes, ToleranceViolation) {
  const Result r = invoke({"quantize", "--g", "2,1,1,1", "--N", "8", "--tol", "unitarity=1e-30"});
  EXPECT_EQ(r.code, cli::kExitNumerical);
  EXPECT_NE(r.err.find("unitarity_residual"), std::string::npos);
}

TEST(CliVerifyAll, QuickRunPasses) {
  const Result r = invoke({"verify-all", "--quick"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("pass").get<bool>());
  for (const auto& s : j.at("suites")) EXPECT_TRUE(s.at("pass").get<bool>()) << s.dump();
}

TEST(CliVerifyAll, CorruptedConventionBreaksEgorov) {
  const Result r = invoke({"verify-all", "--quick", "--inject-fault", "t-phase"});
  EXPECT_EQ(r.code, cli::kExitNumerical);
  EXPECT_NE(r.err.find("suite egorov failed"), std::string::npos) << r.err;
}
