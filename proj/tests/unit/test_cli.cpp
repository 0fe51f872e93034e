#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;
using lmg::cli::main_entry;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lmgdrive");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Data rows only: comment lines and the column header are skipped.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lmgdrive_tests";
  fs::create_directories(dir);
  return dir / name;
}

TEST(CliParse, FlagsLandInConfig) {
  std::ostringstream sink;
  const char* argv[] = {"lmgdrive", "minima", "--gx0", "-1", "--gx1", "210", "--gy", "2", "--grid", "151", "--workers", "3"};
  const auto cfg = lmg::cli::parse_args(12, argv, sink);
  ASSERT_TRUE(cfg.has_value());
  EXPECT_EQ(cfg->command, "minima");
  EXPECT_DOUBLE_EQ(cfg->params.gamma0x, -1.0);
  EXPECT_DOUBLE_EQ(cfg->params.gamma1x, 210.0);
  EXPECT_EQ(cfg->grid, 151);
  EXPECT_EQ(cfg->workers, 3);
}

TEST(CliParse, RejectsBadCombinations) {
  EXPECT_EQ(run({"phase-diagram", "--sweep", "gy:0:2:3"}).code, lmg::cli::kUsage);
  EXPECT_EQ(run({"evolve", "--theta", "1"}).code, lmg::cli::kUsage);
  EXPECT_EQ(run({"evolve", "--theta", "1", "--phi", "0", "--minimum", "0"}).code, lmg::cli::kUsage);
  EXPECT_EQ(run({"quasienergies", "--m", "1"}).code, lmg::cli::kUsage);
  EXPECT_EQ(run({"minima", "--grid", "50"}).code, lmg::cli::kUsage);
  EXPECT_EQ(run({"minima", "--n", "0"}).code, lmg::cli::kUsage);
  EXPECT_EQ(run({"nonsense"}).code, lmg::cli::kUsage);
  EXPECT_EQ(run({}).code, lmg::cli::kUsage);
}

TEST(CliParse, HelpExitsCleanly) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, lmg::cli::kOk);
  EXPECT_NE(r.out.find("minima"), std::string::npos);
}

TEST(CliLandscape, RowCountAndOriginValue) {
  const auto r = run({"landscape", "--h", "-1", "--gx0", "0.5", "--gy", "2", "--grid", "21"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto data = rows(r.out);
  int inside = 0;
  for (int i = 0; i < 21; ++i)
    for (int k = 0; k < 21; ++k) {
      const double q = -1.0 + 0.1 * i, p = -1.0 + 0.1 * k;
      if (q * q + p * p <= 1.0 + 1e-12) ++inside;
    }
  EXPECT_EQ(static_cast<int>(data.size()), inside);
  bool found_origin = false;
  for (const auto& row : data) {
    if (std::stod(row[0]) == 0.0 && std::stod(row[1]) == 0.0) {
      found_origin = true;
      EXPECT_NEAR(std::stod(row[2]), -0.5, 1e-15);
    }
  }
  EXPECT_TRUE(found_origin);
}

TEST(CliMinima, ReproducibleAcrossWorkerCounts) {
  const std::vector<std::string> base = {"phase-diagram", "--gx0", "0.5", "--sweep", "gy:0.5:1.5:5",
                                         "--sweep", "gx1:0:20:3", "--grid", "101"};
  auto one = base;
  one.insert(one.end(), {"--workers", "1"});
  auto four = base;
  four.insert(four.end(), {"--workers", "4"});
  const auto a = run(one), b = run(four), c = run(one);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(rows(a.out), rows(b.out));
  EXPECT_EQ(rows(a.out).size(), 15u);
}

TEST(CliMinima, StrongDriveListsSymmetricPairs) {
  const auto r = run({"minima", "--gx0", "-1", "--gx1", "210", "--gy", "2", "--omega", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto data = rows(r.out);
  ASSERT_FALSE(data.empty());
  EXPECT_NEAR(std::stod(data[0][2]), -0.625, 1e-9);
  EXPECT_EQ(data[0][5], "minimum");
}

TEST(CliQuasienergies, UndrivenControlMatchesEffectiveSpectrum) {
  const auto r = run({"quasienergies", "--n", "6", "--gx0", "-1", "--gx1", "0", "--gy", "2", "--sweep",
                      "omega:40:60:2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto data = rows(r.out);
  EXPECT_EQ(data.size(), 14u);
  for (const auto& row : data) EXPECT_LT(std::stod(row[4]), 1e-8);
}

TEST(CliEvolve, StroboscopicRowsAndFooter) {
  const auto r = run({"evolve", "--n", "10", "--gx0", "-1", "--gx1", "210", "--gy", "2", "--minimum", "0",
                      "--frame", "stroboscopic", "--periods", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(rows(r.out).size(), 6u);
  EXPECT_NE(r.out.find("# confinement {"), std::string::npos);
}

TEST(CliEvolve, MinimumIndexOutOfRange) {
  const auto r = run({"evolve", "--n", "10", "--gx0", "0.5", "--gy", "0.5", "--minimum", "3", "--frame", "stroboscopic",
                      "--periods", "2"});
  EXPECT_EQ(r.code, lmg::cli::kUsage);
}

TEST(CliOutput, JsonHeaderParses) {
  const auto r = run({"minima", "--gx0", "0.5", "--gy", "2", "--format", "json", "--grid", "101"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("// ", 0), 0u);
  EXPECT_NE(r.out.find("\"config\""), std::string::npos);
}

TEST(CliOutput, ConfigFileWithFlagOverride) {
  const fs::path cfg = scratch("run.toml");
  {
    std::ofstream f(cfg);
    f << "gx0 = 0.5\ngy = 2.0\ngrid = 41\n";
  }
  const auto from_file = run({"landscape", "--config", cfg.string()});
  const auto overridden = run({"landscape", "--config", cfg.string(), "--grid", "11"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_NE(from_file.out.find("# grid=41"), std::string::npos);
  EXPECT_NE(overridden.out.find("# grid=11"), std::string::npos);
  EXPECT_NE(overridden.out.find("# gy=2"), std::string::npos);
}

TEST(CliOutput, AtomicWriteLeavesNoTemporary) {
  const fs::path target = scratch("landscape.csv");
  fs::remove(target);
  const auto r = run({"landscape", "--grid", "5", "--out", target.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(fs::exists(target));
  EXPECT_FALSE(fs::exists(target.string() + ".tmp"));

  EXPECT_THROW(lmg::cli::write_atomically((scratch("missing") / "dir" / "x.csv").string(), "x"), lmg::Error);
}

}  // namespace
