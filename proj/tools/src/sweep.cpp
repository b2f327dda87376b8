#include "percomp/cli/sweep.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "percomp/competition.hpp"
#include "percomp/csv.hpp"
#include "percomp/parallel.hpp"

namespace percomp::cli {

namespace {

struct Outcome {
  bool y = false;
  bool b = false;
  std::size_t colored_y = 0;
  std::size_t colored_b = 0;
};

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

SweepResult run_sweep(const SweepConfig& config, std::ostream* warnings) {
  for (double v : config.p_values) {
    if (!is_probability(v)) throw std::invalid_argument("run_sweep: p outside [0, 1]");
  }
  for (double v : config.q_values) {
    if (!is_probability(v)) throw std::invalid_argument("run_sweep: q outside [0, 1]");
  }
  const BoxDomain dom(config.dim, config.half_width);
  const int reach = config.half_width - std::max(linf_norm(config.s1, config.dim),
                                                 linf_norm(config.s2, config.dim));
  if (config.horizon < 0 || config.horizon > reach) {
    throw std::invalid_argument("run_sweep: horizon must lie in [0, " + std::to_string(reach) +
                                "] for this box and these sources");
  }

  const std::size_t nq = config.q_values.size();
  const std::size_t total = config.p_values.size() * nq;
  std::vector<std::size_t> cells = config.cells;
  if (cells.empty()) {
    for (std::size_t c = 0; c < total; ++c) cells.push_back(c);
  }
  SweepResult result;
  std::vector<std::pair<std::size_t, std::size_t>> live;  // (row, cell) with p <= q
  for (std::size_t cell : cells) {
    if (cell >= total) throw std::invalid_argument("run_sweep: cell index out of range");
    SweepRow row;
    row.p = config.p_values[cell / nq];
    row.q = config.q_values[cell % nq];
    row.skipped = row.p > row.q;
    if (row.skipped) {
      if (warnings) {
        *warnings << "warning: skipping cell p=" << csv_number(row.p) << " q=" << csv_number(row.q)
                  << " (p > q)\n";
      }
    } else {
      row.replicas = config.replicas;
      live.emplace_back(result.rows.size(), cell);
    }
    result.rows.push_back(row);
  }

  std::vector<Outcome> outcomes(live.size() * config.replicas);
  parallel_for(outcomes.size(), config.workers, [&](std::size_t k) {
    const auto [index, cell] = live[k / config.replicas];
    const std::size_t rep = k % config.replicas;
    const SweepRow& row = result.rows[index];
    const CompetitionParams params{row.p, row.q, config.s1, config.s2};
    const EdgeWeightField field(derive_seed(config.seed, cell, rep), dom);
    const RunSummary s = run_competition(params, field, config.horizon);
    outcomes[k] = {s.survived_yellow, s.survived_blue, s.colored_yellow, s.colored_blue};
  });

  for (std::size_t i = 0; i < live.size(); ++i) {
    SweepRow& row = result.rows[live[i].first];
    double sum_y = 0.0, sum_b = 0.0;
    for (std::size_t r = 0; r < config.replicas; ++r) {
      const Outcome& o = outcomes[i * config.replicas + r];
      if (o.y && o.b) ++row.coexist_count;
      else if (o.y) ++row.y_only;
      else if (o.b) ++row.b_only;
      else ++row.both_dead;
      sum_y += static_cast<double>(o.colored_y);
      sum_b += static_cast<double>(o.colored_b);
    }
    const double n = static_cast<double>(config.replicas);
    row.mean_colored_y = config.replicas ? sum_y / n : std::numeric_limits<double>::quiet_NaN();
    row.mean_colored_b = config.replicas ? sum_b / n : std::numeric_limits<double>::quiet_NaN();
  }
  for (SweepRow& row : result.rows) {
    if (row.skipped) row.mean_colored_y = row.mean_colored_b = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "p,q,replicas,coexist_count,y_only,b_only,both_dead,mean_colored_y,mean_colored_b\n";
  for (const SweepRow& r : result.rows) {
    out << csv_number(r.p) << ',' << csv_number(r.q) << ',' << r.replicas << ',' << r.coexist_count
        << ',' << r.y_only << ',' << r.b_only << ',' << r.both_dead << ','
        << csv_number(r.mean_colored_y) << ',' << csv_number(r.mean_colored_b) << '\n';
  }
}

}  // namespace percomp::cli
