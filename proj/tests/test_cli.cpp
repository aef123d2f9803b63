#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tdesign_cli.hpp"

using namespace tdesign;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tdesign");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("tdesign-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p.string();
  }
  std::string path_string(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST(CliBound, NatsForTetrahedralOrder) {
  const auto r = run_cli({"bound", "-d", "2", "-t", "2", "--unit", "nat"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.28768207, 1e-8);
  EXPECT_EQ(j["source"], "closed_form");
  EXPECT_EQ(j["unit"], "nat");
}

TEST(CliBound, HolevoInBits) {
  const auto r = run_cli({"bound", "-d", "2", "-t", "1", "--unit", "bit"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["value"].get<double>(), 1.0);
}

TEST(CliBound, FallsBackToNumericOptimum) {
  const auto r = run_cli({"bound", "-d", "3", "-t", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["source"], "numeric_optimum");
  EXPECT_EQ(j["knots"].size(), 3u);
}

TEST(CliBound, UsageErrors) {
  EXPECT_EQ(run_cli({"bound", "-d", "1", "-t", "2"}).code, 2);
  EXPECT_EQ(run_cli({"bound", "-d", "2", "-t", "9"}).code, 2);
  EXPECT_EQ(run_cli({"bound", "-d", "2", "-t", "x"}).code, 2);
  EXPECT_EQ(run_cli({"bound", "-d", "2"}).code, 2);
  EXPECT_EQ(run_cli({"bound", "-d", "2", "-t", "2", "--unit", "hartley"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
}

TEST(CliTable, MatchesGoldenFile) {
  const auto r = run_cli({"table", "-d", "2,4,8,16", "-t", "1,2,3,4,5,inf"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(std::filesystem::path(TDESIGN_GOLDEN_DIR) / "table_d2-16.csv"));
}

TEST(CliTable, QubitSubentropy) {
  const auto r = run_cli({"table", "-d", "2", "-t", "inf"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, cli::csv_header());
  const auto cells = split(row, ',');
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[1], "inf");
  EXPECT_NEAR(std::stod(cells[2]), 0.19314718, 1e-8);
}

TEST(CliTable, RowsNonIncreasingForEachDimension) {
  const auto r = run_cli({"table", "-d", "2,4,8,16,32,64,128,256,512,1024"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::map<int, std::vector<double>> by_d;
  while (std::getline(in, line)) {
    const auto cells = split(line, ',');
    by_d[std::stoi(cells[0])].push_back(std::stod(cells[2]));
  }
  EXPECT_EQ(by_d.size(), 10u);
  for (const auto& [d, values] : by_d) {
    ASSERT_EQ(values.size(), 6u);
    for (std::size_t i = 1; i < values.size(); ++i) EXPECT_GE(values[i - 1] - values[i], -1e-12) << "d=" << d;
  }
}

TEST(CliTable, CsvParsesBackBitExactly) {
  const auto r = run_cli({"table", "-d", "2..12", "-t", "1,2,3,4,5,6,inf"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto cells = split(line, ',');
    ASSERT_EQ(cells.size(), 6u) << line;
    const auto b = best_bound(std::stoi(cells[0]), DesignOrder::parse(cells[1]));
    const double nats = std::strtod(cells[2].c_str(), nullptr);
    EXPECT_EQ(nats, b.value_nats) << line;
    EXPECT_EQ(std::strtod(cells[3].c_str(), nullptr), nats_to_bits(nats)) << line;
    EXPECT_EQ(cells[5], to_string(b.source));
    if (cells[1] == "1" || cells[1] == "6") {
      EXPECT_TRUE(cells[4].empty()) << line;
    } else {
      EXPECT_EQ(std::strtod(cells[4].c_str(), nullptr), asymptote(b.t)) << line;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 11 * 7);
}

TEST(CliTable, JsonFormat) {
  const auto r = run_cli({"table", "-d", "3", "-t", "2,inf", "--format", "json", "--unit", "bit"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["t"], 2);
  EXPECT_EQ(j[1]["t"], "inf");
  EXPECT_EQ(j[0]["W"].get<double>(), nats_to_bits(std::log(1.5)));
  EXPECT_EQ(j[0]["unit"], "bit");
}

TEST(CliTable, UsageErrors) {
  EXPECT_EQ(run_cli({"table"}).code, 2);
  EXPECT_EQ(run_cli({"table", "-d", "1,2"}).code, 2);
  EXPECT_EQ(run_cli({"table", "-d", "8..4"}).code, 2);
  EXPECT_EQ(run_cli({"table", "-d", "2", "-t", "0"}).code, 2);
  EXPECT_EQ(run_cli({"table", "-d", "2", "--format", "xml"}).code, 2);
}

TEST(CliVerifyDesign, Icosahedron) {
  const auto r = run_cli({"verify-design", "icosahedron", "--tmax", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["design_order"], 5);
  EXPECT_EQ(j["report"]["verdict"]["6"], false);
}

TEST(CliVerifyDesign, QutritBasis) {
  const auto r = run_cli({"verify-design", "basis:3", "--tmax", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["design_order"], 1);
}

TEST(CliVerifyDesign, FileInputAndErrors) {
  TempDir dir;
  const auto good = dir.file("octa.json", run_cli({"export", "octahedron"}).out);
  const auto r = run_cli({"verify-design", good, "--tmax", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["design_order"], 3);

  EXPECT_EQ(run_cli({"verify-design", dir.file("broken.json", "{\"dim\": 2, \"effects\": [")}).code, 3);
  EXPECT_EQ(run_cli({"verify-design", dir.file("shape.json", "{\"dim\": 2, \"effects\": [[[1,0]]]}")}).code, 3);
  EXPECT_EQ(run_cli({"verify-design", dir.file("overcomplete.json",
                                                "{\"dim\": 1, \"effects\": [[[[0.6,0]]], [[[0.6,0]]]]}")})
                .code,
            4);
  EXPECT_EQ(run_cli({"verify-design", "dodecahedron"}).code, 2);
}

TEST(CliTightness, Tetrahedron) {
  const auto r = run_cli({"tightness", "tetrahedron"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["design_t"], 2);
  EXPECT_LE(std::abs(j["gap"].get<double>()), 1e-9);
}

TEST(CliTightness, Octahedron) {
  const auto r = run_cli({"tightness", "octahedron"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["achieved_nats"].get<double>(), 0.23104906, 1e-8);
}

TEST(CliTightness, QutritSic) {
  const auto r = run_cli({"tightness", "qutrit-sic"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["method"], "search");
  EXPECT_NEAR(j["achieved_nats"].get<double>(), std::log(1.5), 1e-4);
}

TEST(CliTightness, ClaimedOrderTooHigh) {
  EXPECT_EQ(run_cli({"tightness", "tetrahedron", "-t", "3"}).code, 4);
}

TEST(CliMutinfo, RoundTripThroughExport) {
  TempDir dir;
  const auto ens = dir.file("ens.json", run_cli({"export", "tetrahedron", "--antipodal"}).out);
  const auto povm = dir.file("povm.json", run_cli({"export", "tetrahedron"}).out);
  const auto r = run_cli({"mutinfo", ens, povm});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["mutual_information_nats"].get<double>(), std::log(4.0 / 3.0), 1e-14);
  EXPECT_NEAR(j["mutual_information_bits"].get<double>(), nats_to_bits(std::log(4.0 / 3.0)), 1e-14);
  EXPECT_EQ(run_cli({"mutinfo", ens, "tetrahedron"}).code, 0);
}

TEST(CliMutinfo, Errors) {
  TempDir dir;
  const auto ens = dir.file("ens.json", run_cli({"export", "tetrahedron", "--antipodal"}).out);
  EXPECT_EQ(run_cli({"mutinfo", dir.file("bad.json", "not json"), "tetrahedron"}).code, 3);
  EXPECT_EQ(run_cli({"mutinfo", dir.file("nostates.json", "{\"dim\": 2}"), "tetrahedron"}).code, 3);
  EXPECT_EQ(run_cli({"mutinfo", ens, "qutrit-sic"}).code, 2);
  EXPECT_EQ(run_cli({"mutinfo", dir.path_string("missing.json"), "tetrahedron"}).code, 3);
}

TEST(Serialization, PovmRoundTripIsExact) {
  for (const auto& povm : {icosahedron_povm(), qutrit_sic_povm()}) {
    const auto back = povm_from_json(parse_json_text(to_json(povm).dump()));
    ASSERT_EQ(back.size(), povm.size());
    for (std::size_t y = 0; y < povm.size(); ++y) EXPECT_EQ(back.effects[y].matrix, povm.effects[y].matrix);
  }
}

TEST(Serialization, EnsembleRoundTripIsExact) {
  const auto ens = antipodal_ensemble(icosahedron_povm());
  const auto back = ensemble_from_json(parse_json_text(to_json(ens).dump()));
  ASSERT_EQ(back.size(), ens.size());
  for (std::size_t x = 0; x < ens.size(); ++x) {
    EXPECT_EQ(back.members[x].weight, ens.members[x].weight);
    EXPECT_LE((back.members[x].state.amplitudes - ens.members[x].state.amplitudes).norm(), 1e-15);
  }
}

TEST(Serialization, BoundResultFields) {
  const auto j = to_json(closed_form_bound(2, DesignOrder::infinity()));
  EXPECT_EQ(j["t"], "inf");
  EXPECT_EQ(j["value_nats"].get<double>(), std::numbers::ln2 - 0.5);
  EXPECT_EQ(j["value_bits"].get<double>(), nats_to_bits(std::numbers::ln2 - 0.5));
  EXPECT_EQ(j["source"], "closed_form");
}
