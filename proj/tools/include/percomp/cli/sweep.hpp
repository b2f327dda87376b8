#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "percomp/lattice.hpp"

namespace percomp::cli {

struct SweepConfig {
  int dim = 2;
  int half_width = 0;
  std::int32_t horizon = 0;
  Site s1{};
  Site s2{};
  std::vector<double> p_values;
  std::vector<double> q_values;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// If non-empty, only these cell indices are run and reported, in the given
  /// order. Splitting the index range across runs reproduces the full sweep.
  std::vector<std::size_t> cells;
};

struct SweepRow {
  double p = 0.0;
  double q = 0.0;
  bool skipped = false;  // p > q
  std::size_t replicas = 0;
  std::size_t coexist_count = 0;
  std::size_t y_only = 0;
  std::size_t b_only = 0;
  std::size_t both_dead = 0;
  double mean_colored_y = 0.0;
  double mean_colored_b = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Cells are enumerated p-major: cell (i, j) has index i * |q_values| + j,
/// skipped cells included, and its replica r reads the field seeded by
/// derive_seed(seed, cell, r). Cells with p > q produce a skipped row and a
/// line on `warnings`. Throws std::invalid_argument on a bad horizon, box or
/// probability.
SweepResult run_sweep(const SweepConfig& config, std::ostream* warnings = nullptr);

/// Header `p,q,replicas,coexist_count,y_only,b_only,both_dead,mean_colored_y,mean_colored_b`.
/// Skipped cells report zero replicas and `nan` means.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace percomp::cli
