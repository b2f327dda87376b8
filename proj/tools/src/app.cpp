#include "percomp/cli/app.hpp"

#include <CLI11.hpp>

#include <climits>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "percomp/cli/config.hpp"
#include "percomp/cli/ppm.hpp"
#include "percomp/cli/sweep.hpp"
#include "percomp/percolation.hpp"
#include "percomp/renorm.hpp"
#include "percomp/shape.hpp"

namespace percomp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json site_json(const Site& s, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(s[static_cast<std::size_t>(i)]);
  return a;
}

struct Context {
  Config cfg;
  fs::path out_dir;
  std::ostream& log;
  std::ostream& err;

  unsigned workers() const { return static_cast<unsigned>(cfg.bounded("workers", 0, 1024, 1)); }
  std::size_t replicas() const {
    return static_cast<std::size_t>(cfg.bounded("replicas", 1, INT_MAX));
  }
  int dim() const { return cfg.bounded("dim", 1, kMaxDim, 2); }

  void write(const std::string& name, const std::string& bytes) const {
    const fs::path path = out_dir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write to " + path.string() + " failed");
    log << "wrote " << path.string() << '\n';
  }

  template <class Writer>
  void write_with(const std::string& name, Writer&& w) const {
    std::ostringstream s;
    w(s);
    write(name, s.str());
  }
};

Site unit_site(int dim, bool diagonal) {
  Site s{};
  for (int a = 0; a < dim; ++a) s[static_cast<std::size_t>(a)] = (a == 0 || diagonal) ? 1 : 0;
  return s;
}

void cmd_percolate(const Context& c) {
  TailConfig tc;
  tc.dim = c.dim();
  tc.p = c.cfg.probability("p");
  tc.radii = c.cfg.integers("radii");
  tc.replicas = c.replicas();
  tc.seed = c.cfg.seed();
  tc.half_width = c.cfg.bounded("half_width", 0, kMaxHalfWidth, 0);
  tc.workers = c.workers();
  const auto rows = tail_statistics(tc);
  c.write_with("tail.csv", [&](std::ostream& o) { write_tail_csv(o, rows); });
}

void cmd_compete(const Context& c) {
  const int dim = c.dim();
  const int L = c.cfg.bounded("L", 1, kMaxHalfWidth);
  const CompetitionParams params{c.cfg.probability("p"), c.cfg.probability("q"),
                                 c.cfg.site("s1", dim), c.cfg.site("s2", dim)};
  const int horizon = c.cfg.bounded("horizon", 0, INT_MAX);
  const bool censored = c.cfg.flag("allow_censored", false);
  const std::vector<int> shots = c.cfg.integers("snapshots", std::vector<int>{});
  if (!shots.empty() && dim != 2) throw ConfigError("config field 'snapshots': needs dim = 2");
  const std::set<int> wanted(shots.begin(), shots.end());

  const std::uint64_t seed = c.cfg.seed();
  const EdgeWeightField field(seed, BoxDomain(dim, L));
  const int side = 2 * L + 1;
  const RunSummary s = run_competition(params, field, horizon, censored, [&](const CompetitionState& st) {
    const int t = static_cast<int>(st.time());
    if (!wanted.count(t)) return;
    const auto grid = palette_grid(st, -L, -L, side, side);
    c.write("snapshot_t" + std::to_string(t) + ".ppm", encode_ppm(grid, side, side));
  });
  c.write("summary.json", summary_json(s).dump(2) + "\n");
}

void cmd_shape(const Context& c) {
  const int dim = c.dim();
  NormConfig nc;
  nc.dim = dim;
  nc.p = c.cfg.probability("p");
  nc.n_values = c.cfg.integers("n_values");
  nc.replicas = c.replicas();
  nc.seed = c.cfg.seed();
  nc.margin = c.cfg.bounded("margin", -1, kMaxHalfWidth, -1);
  nc.workers = c.workers();
  std::vector<NormEstimate> estimates;
  for (const Site& d : c.cfg.sites("directions", dim, std::vector<Site>{unit_site(dim, false)})) {
    nc.direction = d;
    estimates.push_back(norm_estimate(nc));
  }
  c.write_with("norm.csv", [&](std::ostream& o) { write_norm_csv(o, estimates); });
}

void cmd_cpq(const Context& c) {
  const int dim = c.dim();
  CpqConfig cc;
  cc.dim = dim;
  cc.p = c.cfg.probability("p");
  cc.q = c.cfg.probability("q");
  cc.directions = c.cfg.sites("directions", dim,
                              std::vector<Site>{unit_site(dim, false), unit_site(dim, true)});
  cc.n = c.cfg.bounded("n", 1, kMaxHalfWidth);
  cc.replicas = c.replicas();
  cc.seed = c.cfg.seed();
  cc.margin = c.cfg.bounded("margin", -1, kMaxHalfWidth, -1);
  cc.workers = c.workers();
  const CpqResult r = cpq_estimate(cc);
  c.write_with("cpq.csv", [&](std::ostream& o) { write_cpq_csv(o, r); });
}

void cmd_speed(const Context& c) {
  SpeedConfig sc;
  sc.params = {c.cfg.probability("p"), c.cfg.probability("q"), c.cfg.site("s1", 2),
               c.cfg.site("s2", 2)};
  sc.horizon = c.cfg.bounded("horizon", 1, kMaxHalfWidth);
  sc.replicas = c.replicas();
  const std::uint64_t seed = c.cfg.seed();
  sc.seed = derive_seed(seed, 1);
  sc.half_width = c.cfg.bounded("L", 0, kMaxHalfWidth, 0);
  sc.workers = c.workers();
  const NormEvaluator norm = build_norm_evaluator(
      sc.params.p, c.cfg.bounded("fan_resolution", 1, 64, 4), c.cfg.bounded("norm_n", 1, 4096, 100),
      static_cast<std::size_t>(c.cfg.bounded("norm_replicas", 1, INT_MAX, 20)), derive_seed(seed, 0),
      sc.workers);
  const SpeedResult r = speed_ratio_experiment(sc, norm);
  if (!r.diagnostic.empty()) c.err << "warning: " << r.diagnostic << '\n';
  c.write_with("speed.csv", [&](std::ostream& o) { write_speed_csv(o, r); });
}

void cmd_renorm(const Context& c) {
  const int dim = c.dim();
  PnConfig pc;
  pc.dim = dim;
  pc.p = c.cfg.probability("p");
  pc.n_values = c.cfg.integers("N_values");
  pc.replicas = c.replicas();
  pc.seed = c.cfg.seed();
  pc.workers = c.workers();
  const auto rows = estimate_pN(pc);
  c.write_with("pn.csv", [&](std::ostream& o) { write_pn_csv(o, rows); });
  if (c.cfg.has("path")) {
    const RenormGrid grid(dim, c.cfg.bounded("N", 1, kMaxHalfWidth));
    const std::vector<Site> path = c.cfg.sites("path", dim);
    const CrossingSequence seq = main_crossings(path, grid);
    c.write_with("crossings.csv", [&](std::ostream& o) { write_crossing_dump(o, seq, grid); });
  }
}

void cmd_sweep(const Context& c) {
  SweepConfig sc;
  sc.dim = c.dim();
  sc.half_width = c.cfg.bounded("L", 1, kMaxHalfWidth);
  sc.horizon = c.cfg.bounded("horizon", 0, kMaxHalfWidth);
  sc.s1 = c.cfg.site("s1", sc.dim);
  sc.s2 = c.cfg.site("s2", sc.dim);
  sc.p_values = c.cfg.probabilities("p_values");
  sc.q_values = c.cfg.probabilities("q_values");
  sc.replicas = c.replicas();
  sc.seed = c.cfg.seed();
  sc.workers = c.workers();
  for (int cell : c.cfg.integers("cells", std::vector<int>{})) {
    if (cell < 0) throw ConfigError("config field 'cells': indices must be non-negative");
    sc.cells.push_back(static_cast<std::size_t>(cell));
  }
  const SweepResult r = run_sweep(sc, &c.err);
  c.write_with("sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, r); });
}

void cmd_render(const Context& c) {
  const int width = c.cfg.bounded("width", 1, 2 * kMaxHalfWidth, 500);
  const int height = c.cfg.bounded("height", 1, 2 * kMaxHalfWidth, 500);
  const CompetitionParams params{c.cfg.probability("p"), c.cfg.probability("q"),
                                 c.cfg.site("s1", 2, Site{0, 0}), c.cfg.site("s2", 2, Site{1, 0})};
  // Window [-w/2, w - w/2) x [-h/2, h - h/2) inside a box that contains it.
  const int L = std::max(width, height) / 2 + 1;
  const int reach = L - std::max(linf_norm(params.s1, 2), linf_norm(params.s2, 2));
  if (reach < 0) throw ConfigError("config field 's1'/'s2': sources lie outside the render window");
  const int horizon = c.cfg.bounded("horizon", 0, reach, reach);
  const EdgeWeightField field(c.cfg.seed(), BoxDomain(2, L));
  const RunSummary s = run_competition(params, field, horizon);
  const auto grid = palette_grid(s.final_state, -(width / 2), -(height / 2), width, height);
  c.write("render.ppm", encode_ppm(grid, width, height));
}

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> keys;  // config keys mirrored as --key flags
  void (*run)(const Context&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table{
      {"percolate", "cluster-radius and hole tail estimates", {"dim", "p", "radii", "half_width"},
       cmd_percolate},
      {"compete", "single competition run with optional snapshots",
       {"dim", "L", "p", "q", "s1", "s2", "horizon", "allow_censored", "snapshots"}, cmd_compete},
      {"shape", "directional asymptotic-norm estimates",
       {"dim", "p", "directions", "n_values", "margin"}, cmd_shape},
      {"cpq", "coupled norm ratio ||x||_q / ||x||_p",
       {"dim", "p", "q", "directions", "n", "margin"}, cmd_cpq},
      {"speed", "reach of the strong color over time in the weak norm",
       {"p", "q", "s1", "s2", "horizon", "L", "fan_resolution", "norm_n", "norm_replicas"},
       cmd_speed},
      {"renorm", "white-cube probability and crossing dumps", {"dim", "p", "N_values", "N", "path"},
       cmd_renorm},
      {"sweep", "coexistence frequencies over a (p, q) grid",
       {"dim", "L", "horizon", "s1", "s2", "p_values", "q_values", "cells"}, cmd_sweep},
      {"render", "P6 image of a competition snapshot",
       {"p", "q", "s1", "s2", "width", "height", "horizon"}, cmd_render},
  };
  return table;
}

}  // namespace

nlohmann::json summary_json(const RunSummary& s) {
  const int dim = s.final_state.domain().dim();
  return json{{"p", s.params.p},
              {"q", s.params.q},
              {"s1", site_json(s.params.s1, dim)},
              {"s2", site_json(s.params.s2, dim)},
              {"T", s.horizon},
              {"seed", s.seed},
              {"survived_y", s.survived_yellow},
              {"survived_b", s.survived_blue},
              {"colored_y", s.colored_yellow},
              {"colored_b", s.colored_blue},
              {"green_count", s.green_count}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bernoulli percolation and two-type competition experiments", "percomp"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  const auto& table = commands();
  // raw[c][i] holds the --key text of command c's i-th key.
  std::vector<std::vector<std::string>> raw(table.size());
  std::vector<std::vector<std::string>> keys(table.size());
  std::vector<CLI::App*> subs;
  for (std::size_t c = 0; c < table.size(); ++c) {
    CLI::App* sub = app.add_subcommand(table[c].name, table[c].help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    keys[c] = table[c].keys;
    keys[c].insert(keys[c].end(), {"seed", "replicas", "workers"});
    raw[c].resize(keys[c].size());
    for (std::size_t i = 0; i < keys[c].size(); ++i) {
      sub->add_option("--" + keys[c][i], raw[c][i], "overrides config key '" + keys[c][i] + "'");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::size_t chosen = 0;
  while (!subs[chosen]->parsed()) ++chosen;
  CLI::App* sub = subs[chosen];

  try {
    Context ctx{Config::load(config_path), fs::path(out_dir), out, err};
    for (std::size_t i = 0; i < keys[chosen].size(); ++i) {
      if (sub->count("--" + keys[chosen][i]) > 0) ctx.cfg.set_raw(keys[chosen][i], raw[chosen][i]);
    }
    if (sub->count("--out") == 0 && ctx.cfg.has("out")) {
      const json& o = ctx.cfg.document().at("out");
      if (!o.is_string()) throw ConfigError("config field 'out': expected a string");
      ctx.out_dir = o.get<std::string>();
    }
    fs::create_directories(ctx.out_dir);
    table[chosen].run(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace percomp::cli
