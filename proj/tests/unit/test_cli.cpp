#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "gridarb/cli.hpp"
#include "gridarb/common/csv.hpp"
#include "gridarb/market.hpp"
#include "tree.hpp"

using namespace gridarb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gridarb_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

int lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"optimize"}).code, cli::kUsage);
  EXPECT_EQ(run({"optimize", "--scenario", "lm-nothing"}).code, cli::kUsage);
  EXPECT_EQ(run({"prices", "--config", "/no/such/file.ini"}).code, cli::kUsage);
  EXPECT_EQ(run({"prices", "--days", "x"}).code, cli::kUsage);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, cli::kOk);
  EXPECT_NE(help.out.find("optimize"), std::string::npos);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = GRIDARB_BIN;
  EXPECT_EQ(WEXITSTATUS(std::system((bin + " frobnicate >/dev/null 2>&1").c_str())), 1);
  EXPECT_EQ(WEXITSTATUS(std::system((bin + " --help >/dev/null 2>&1").c_str())), 0);
}

TEST(Cli, BadConfigIsDataError) {
  const auto dir = scratch("badcfg");
  fs::create_directories(dir);
  write_text_file(dir / "c.ini", "[market]\nseeds = 1\n");
  const auto r = run({"prices", "--config", (dir / "c.ini").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, cli::kDataError);
  EXPECT_NE(r.err.find("seeds"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, PricesHonourDaysAndSeed) {
  const auto dir = scratch("prices");
  ASSERT_EQ(run({"prices", "--days", "3", "--seed", "5", "--out", dir.string()}).code, cli::kOk);
  const auto text = read_text_file(dir / "prices.csv");
  EXPECT_EQ(lines(text), 73);
  EXPECT_EQ(text, prices_to_csv(synthesize_prices(5, 3)));
  fs::remove_all(dir);
}

TEST(Cli, ReplayWithoutScheduleFails) {
  const auto dir = scratch("noschedule");
  EXPECT_EQ(run({"replay", "--scenario", "lm-profit", "--out", dir.string()}).code,
            cli::kDataError);
  fs::remove_all(dir);
}

TEST(Cli, ShortStudyWritesLayoutAndReportIsIdempotent) {
  const auto dir = scratch("study");
  const auto r = run({"all", "--days", "3", "--seed", "7", "--out", dir.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  for (const char* id : {"lm-revenue", "lm-profit", "pbm-profit"}) {
    EXPECT_TRUE(fs::exists(dir / "schedules" / (std::string(id) + ".csv")));
    EXPECT_TRUE(fs::exists(dir / "ledgers" / (std::string(id) + "_ledger.csv")));
    EXPECT_TRUE(fs::exists(dir / "ledgers" / (std::string(id) + "_checkups.csv")));
    EXPECT_TRUE(fs::exists(dir / "figures" / ("histogram_" + std::string(id) + ".csv")));
    EXPECT_FALSE(fs::exists(dir / "ledgers" / (std::string(id) + ".checkpoint")));
  }
  const auto ledger = read_text_file(dir / "ledgers" / "lm-profit_ledger.csv");
  EXPECT_EQ(ledger.substr(0, ledger.find('\n')),
            "timestamp,power_w,voltage_v,temperature_k,fec_cum,revenue_cum_eur");
  EXPECT_EQ(lines(ledger), 1 + 3 * 96);

  const auto table = read_text_file(dir / "reports" / "comparison.csv");
  EXPECT_EQ(lines(table), 4);
  const auto header = table.substr(0, table.find('\n'));
  for (const char* col : {"revenue_simulated_eur", "revenue_replayed_eur", "revenue_error_pct",
                          "capacity_lost_simulated_pct", "net_profit_replayed_eur"}) {
    EXPECT_NE(header.find(col), std::string::npos) << header;
  }
  EXPECT_EQ(lines(read_text_file(dir / "reports" / "summary.csv")), 4);

  const auto before = oracle::read_tree(dir);
  ASSERT_EQ(run({"report", "--days", "3", "--out", dir.string()}).code, cli::kOk);
  EXPECT_EQ(oracle::read_tree(dir), before);
  fs::remove_all(dir);
}
