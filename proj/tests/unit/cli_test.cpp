#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "percomp/cli/app.hpp"
#include "percomp/cli/config.hpp"
#include "percomp/cli/ppm.hpp"
#include "percomp/cli/sweep.hpp"

using namespace percomp;
using namespace percomp::cli;
namespace fs = std::filesystem;

namespace {

std::string payload(const std::string& ppm) {
  // Header is three newline-terminated lines.
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) pos = ppm.find('\n', pos) + 1;
  return ppm.substr(pos);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("percomp_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int invoke(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "percomp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return rc;
}

SweepConfig small_sweep() {
  SweepConfig c;
  c.half_width = 12;
  c.horizon = 10;
  c.s1 = Site{0, 0};
  c.s2 = Site{1, 0};
  c.p_values = {0.5, 0.6};
  c.q_values = {0.6, 0.7};
  c.replicas = 10;
  c.seed = 2024;
  return c;
}

std::string sweep_csv(const SweepConfig& c) {
  std::ostringstream out;
  write_sweep_csv(out, run_sweep(c));
  return out.str();
}

}  // namespace

TEST(Ppm, SingleEmptyPixel) {
  const std::vector<std::uint8_t> g{0};
  const std::string ppm = encode_ppm(g, 1, 1);
  EXPECT_EQ(ppm.substr(0, 9), "P6\n1 1\n25");
  EXPECT_EQ(payload(ppm), std::string("\xff\xff\xff", 3));
}

TEST(Ppm, PaletteBytes) {
  const std::vector<std::uint8_t> g{static_cast<std::uint8_t>(SiteState::kYellowActive),
                                    static_cast<std::uint8_t>(SiteState::kBlueActive)};
  const std::string ppm = encode_ppm(g, 2, 1);
  EXPECT_EQ(ppm.substr(0, 11), "P6\n2 1\n255\n");
  const std::string expect{char(255), char(220), char(0), char(0), char(120), char(255)};
  EXPECT_EQ(payload(ppm), expect);
  const std::array<std::array<int, 3>, 7> want{
      {{255, 255, 255}, {255, 220, 0}, {0, 120, 255}, {0, 200, 0}, {200, 170, 0}, {0, 80, 180}, {0, 140, 0}}};
  for (std::size_t s = 0; s < 7; ++s) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(kPalette[s][c], want[s][c]);
  }
}

TEST(Ppm, RejectsBadGrids) {
  const std::vector<std::uint8_t> g{0, 1, 2};
  EXPECT_THROW(encode_ppm(g, 2, 2), std::invalid_argument);
  const std::vector<std::uint8_t> bad{7};
  EXPECT_THROW(encode_ppm(bad, 1, 1), std::invalid_argument);
  EXPECT_THROW(render_ppm(g, 3, 1, "/nonexistent-dir/x.ppm"), std::runtime_error);
}

TEST(Ppm, SnapshotPayloadLength) {
  const BoxDomain dom(2, 101);
  const RunSummary s = run_competition({0.6, 0.7, {0, 0}, {1, 0}}, EdgeWeightField(9, dom), 60);
  const auto grid = palette_grid(s.final_state, -100, -100, 200, 200);
  const fs::path dir = scratch_dir("snapshot");
  render_ppm(grid, 200, 200, dir / "s.ppm");
  const std::string bytes = slurp(dir / "s.ppm");
  EXPECT_EQ(bytes.substr(0, 15), "P6\n200 200\n255\n");
  EXPECT_EQ(payload(bytes).size(), 3u * 200u * 200u);
}

TEST(Sweep, EmptyGridWritesOnlyTheHeader) {
  SweepConfig c = small_sweep();
  c.p_values.clear();
  EXPECT_EQ(sweep_csv(c), "p,q,replicas,coexist_count,y_only,b_only,both_dead,mean_colored_y,mean_colored_b\n");
}

TEST(Sweep, RepeatableAndWorkerIndependent) {
  SweepConfig c = small_sweep();
  const std::string a = sweep_csv(c);
  EXPECT_EQ(a, sweep_csv(c));
  c.workers = 8;
  EXPECT_EQ(a, sweep_csv(c));
}

TEST(Sweep, CountsSumToReplicasAndSkipsInvertedCells) {
  SweepConfig c = small_sweep();
  c.p_values = {0.5, 0.7};
  std::ostringstream warn;
  const SweepResult r = run_sweep(c, &warn);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const SweepRow& row : r.rows) {
    EXPECT_EQ(row.coexist_count + row.y_only + row.b_only + row.both_dead, row.replicas);
  }
  EXPECT_TRUE(r.rows[2].skipped);  // p = 0.7, q = 0.6
  EXPECT_EQ(r.rows[2].replicas, 0u);
  EXPECT_NE(warn.str().find("p=0.7 q=0.6"), std::string::npos);
  std::ostringstream out;
  write_sweep_csv(out, r);
  EXPECT_NE(out.str().find("\n0.7,0.6,0,0,0,0,0,nan,nan\n"), std::string::npos);
}

TEST(Sweep, SeedTreeIsPinned) {
  // Cell (i, j) = i * |q| + j; replica r reads derive_seed(seed, cell, r).
  SweepConfig c = small_sweep();
  const SweepResult r = run_sweep(c);
  const BoxDomain dom(2, c.half_width);
  std::size_t coexist = 0;
  double colored_b = 0;
  for (std::size_t rep = 0; rep < c.replicas; ++rep) {
    const RunSummary s = run_competition({0.6, 0.6, c.s1, c.s2},
                                         EdgeWeightField(derive_seed(c.seed, 2, rep), dom), c.horizon);
    coexist += s.coexisted();
    colored_b += static_cast<double>(s.colored_blue);
  }
  EXPECT_EQ(r.rows[2].coexist_count, coexist);
  EXPECT_DOUBLE_EQ(r.rows[2].mean_colored_b, colored_b / 10.0);
}

TEST(Sweep, SplitRunsReproduceTheFullSweep) {
  SweepConfig c = small_sweep();
  const SweepResult full = run_sweep(c);
  c.cells = {0, 1};
  const SweepResult first = run_sweep(c);
  c.cells = {2, 3};
  const SweepResult second = run_sweep(c);
  SweepResult joined{first.rows};
  joined.rows.insert(joined.rows.end(), second.rows.begin(), second.rows.end());
  std::ostringstream a, b;
  write_sweep_csv(a, full);
  write_sweep_csv(b, joined);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, RejectsHorizonPastTheExactRange) {
  SweepConfig c = small_sweep();
  c.horizon = 12;
  EXPECT_THROW(run_sweep(c), std::invalid_argument);
}

TEST(Sweep, CoexistencePeaksOnTheDiagonal) {
  SweepConfig c;
  c.half_width = 150;
  c.horizon = 130;
  c.s1 = Site{0, 0};
  c.s2 = Site{1, 0};
  c.p_values = {0.6, 0.7, 0.8};
  c.q_values = {0.6, 0.7, 0.8};
  c.replicas = 500;
  c.seed = 61;
  c.workers = 0;
  const SweepResult r = run_sweep(c);
  for (std::size_t j = 0; j < 3; ++j) {  // fixed q, compare p <= q
    std::size_t best = 0;
    double best_freq = -1.0;
    for (std::size_t i = 0; i <= j; ++i) {
      const SweepRow& row = r.rows[i * 3 + j];
      const double freq = static_cast<double>(row.coexist_count) / static_cast<double>(row.replicas);
      if (freq > best_freq) {
        best_freq = freq;
        best = i;
      }
    }
    EXPECT_EQ(best, j) << "q = " << c.q_values[j];
  }
}

TEST(Config, ParseErrorsCarryPosition) {
  try {
    Config::parse("{\n  \"seed\": 1,\n  \"p\": \n}", "c.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("c.json:4:1:", 0), 0u) << e.what();
  }
  EXPECT_THROW(Config::parse("[1, 2]"), ConfigError);
}

TEST(Config, FieldErrorsNameTheField) {
  const Config c = Config::parse(R"({"p": 1.5, "radii": [1, "x"], "s1": [1], "seed": -3})");
  auto message = [](auto&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message([&] { c.probability("p"); }).find("'p'"), std::string::npos);
  EXPECT_NE(message([&] { c.integers("radii"); }).find("'radii'"), std::string::npos);
  EXPECT_NE(message([&] { c.site("s1", 2); }).find("'s1'"), std::string::npos);
  EXPECT_NE(message([&] { c.seed(); }).find("'seed'"), std::string::npos);
  EXPECT_NE(message([&] { c.number("q"); }).find("'q': missing"), std::string::npos);
  EXPECT_EQ(c.bounded("dim", 1, 4, 2), 2);
}

TEST(Config, CommandLineOverrides) {
  Config c = Config::parse(R"({"p": 0.5, "radii": [1, 2]})");
  c.set_raw("p", "0.75");
  c.set_raw("radii", "[3,4,5]");
  c.set_raw("label", "plain text");
  EXPECT_EQ(c.probability("p"), 0.75);
  EXPECT_EQ(c.integers("radii"), (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(c.document().at("label"), "plain text");
}

TEST(App, SummaryJsonFields) {
  const BoxDomain dom(2, 6);
  const RunSummary s = run_competition({0.5, 0.6, {0, 0}, {1, 0}}, EdgeWeightField(4, dom), 5);
  const nlohmann::json j = summary_json(s);
  for (const char* key : {"p", "q", "s1", "s2", "T", "seed", "survived_y", "survived_b", "colored_y",
                          "colored_b", "green_count"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.size(), 11u);
  EXPECT_EQ(j["T"], 5);
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j["s2"], nlohmann::json::array({1, 0}));
}

TEST(App, ExitCodes) {
  const fs::path dir = scratch_dir("exit");
  std::ofstream(dir / "ok.json") << R"({"seed": 5, "p": 0.6, "q": 0.7, "L": 8, "horizon": 6,
                                       "s1": [0, 0], "s2": [1, 0], "snapshots": [3]})";
  std::ofstream(dir / "broken.json") << "{\"seed\": ";
  std::ofstream(dir / "blocker") << "x";

  EXPECT_EQ(invoke({"compete", "--config", (dir / "ok.json").string(), "--out", (dir / "o").string()}), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "o" / "snapshot_t3.ppm"));
  EXPECT_EQ(invoke({"--help"}), 0);

  std::string err;
  EXPECT_EQ(invoke({"compete", "--config", (dir / "broken.json").string()}, &err), 2);
  EXPECT_NE(err.find("broken.json:1:"), std::string::npos) << err;
  EXPECT_EQ(invoke({"compete", "--config", (dir / "ok.json").string(), "--p", "0.9"}), 2);
  EXPECT_EQ(invoke({"compete", "--config", (dir / "ok.json").string(), "--horizon", "9"}), 2);
  EXPECT_EQ(invoke({"compete", "--config", (dir / "missing.json").string()}), 2);
  EXPECT_EQ(invoke({"compete"}), 2);
  EXPECT_EQ(invoke({"frobnicate"}), 2);
  EXPECT_EQ(invoke({"compete", "--config", (dir / "ok.json").string(), "--out",
                    (dir / "blocker" / "sub").string()}),
            3);
}

TEST(App, FlagsOverrideTheConfig) {
  const fs::path dir = scratch_dir("override");
  std::ofstream(dir / "c.json") << R"({"seed": 5, "p": 0.6, "q": 0.7, "L": 8, "horizon": 6,
                                      "s1": [0, 0], "s2": [1, 0]})";
  ASSERT_EQ(invoke({"compete", "--config", (dir / "c.json").string(), "--out", dir.string(), "--seed",
                    "11", "--q", "0.8"}),
            0);
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(j["seed"], 11);
  EXPECT_EQ(j["q"], 0.8);
}
