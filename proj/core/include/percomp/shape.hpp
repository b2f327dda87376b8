#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "percomp/competition.hpp"
#include "percomp/lattice.hpp"
#include "percomp/percolation.hpp"

namespace percomp {

struct NormConfig {
  int dim = 2;
  double p = 0.7;
  Site direction{1, 0};
  std::vector<int> n_values;  // strictly increasing, positive
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  int margin = -1;  // extra box half-width past the farthest target; -1: automatic
  unsigned workers = 1;
};

struct NormRow {
  int n = 0;
  bool available = false;      // false when every replica was disconnected
  double estimate = 0.0;       // mean of D_p(0, n x) / n over connected replicas
  double ci = 0.0;
  double disconnected_frac = 0.0;
  std::size_t connected = 0;
};

/// Directional estimate of the asymptotic norm, with the raw per-replica
/// distances kept so coupled runs can be compared replica by replica.
struct NormEstimate {
  double p = 0.0;
  int dim = 2;
  Site direction{};
  std::vector<NormRow> rows;
  /// distances[r][j] = D_p(0, n_j x) in replica r, or DistanceField::kUnreachable.
  std::vector<std::vector<std::int32_t>> distances;

  /// Largest-n available row, or nullptr.
  const NormRow* headline() const;
};

/// Box half-width used for a farthest target at sup-distance `reach`.
int norm_box_half_width(int reach, int margin);

/// Replica r reads the field seeded by derive_seed(seed, r) on the box of
/// norm_box_half_width, so runs sharing seed and geometry are coupled.
/// Throws std::invalid_argument for p <= 0, a zero direction, zero replicas
/// or malformed n_values.
NormEstimate norm_estimate(const NormConfig& config);

void write_norm_csv(std::ostream& out, std::span<const NormEstimate> estimates);

struct CpqConfig {
  int dim = 2;
  double p = 0.6;
  double q = 0.95;
  std::vector<Site> directions;
  int n = 100;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  int margin = -1;
  unsigned workers = 1;
};

struct CpqRow {
  Site direction{};
  bool available = false;
  double ratio = 0.0;  // mean D_q / mean D_p over replicas with 0 <-p-> n x
  double ci = 0.0;     // delta-method half-width
  std::size_t connected = 0;
};

struct CpqResult {
  int dim = 2;
  std::vector<CpqRow> rows;
  double sup_ratio = 0.0;  // max ratio over available directions
  double sup_upper = 0.0;  // max of ratio + ci over available directions
};

/// Coupled estimate of ||x||_q / ||x||_p per direction, both parameters read
/// from one field per replica. Throws std::invalid_argument if p > q.
CpqResult cpq_estimate(const CpqConfig& config);

/// Rows `direction,ratio,ci`, then `sup,<sup_ratio>,<sup_upper - sup_ratio>`.
void write_cpq_csv(std::ostream& out, const CpqResult& result);

/// Positive-homogeneous evaluator of an asymptotic norm. Either the exact l1
/// norm (the p = 1 norm, any dimension) or, for d = 2, the interpolation of
/// directional values over a fan of first-octant directions: a site is folded
/// into the first octant by the lattice symmetries, written as a nonnegative
/// combination of its two bracketing fan directions, and the values combined
/// with the same coefficients.
class NormEvaluator {
 public:
  struct FanEntry {
    Site direction{};
    double value = 0.0;  // estimate of ||direction||_p
  };

  static NormEvaluator l1(int dim);
  /// Fan must include (1, 0) and (1, 1) up to scaling; throws otherwise.
  static NormEvaluator fan(std::vector<FanEntry> entries);

  int dim() const { return dim_; }
  double operator()(const Site& x) const;
  const std::vector<FanEntry>& entries() const { return fan_; }

 private:
  NormEvaluator() = default;
  int dim_ = 2;
  bool exact_l1_ = true;
  std::vector<FanEntry> fan_;  // folded, sorted by angle
};

/// First-octant fan {(m, j) / gcd : 0 <= j <= m}.
std::vector<Site> fan_directions(int resolution);

/// Runs norm_estimate per fan direction and keeps each headline estimate.
NormEvaluator build_norm_evaluator(double p, int resolution, int n, std::size_t replicas,
                                   std::uint64_t seed, unsigned workers = 1);

struct ReachValues {
  double sup_reach = 0.0;   // |A|_p
  bool inf_defined = false;
  double inf_reach = 0.0;   // |A|_{*,p}; valid only when inf_defined
};

/// |A|_p = max ||x|| over A; |A|_{*,p} = min ||x|| over quasi-infinite sites
/// outside A. A is a site set of `domain`, `labeling` a labeling of it.
ReachValues reach_metrics(const SiteSet& a, const BoxDomain& domain, const NormEvaluator& norm,
                          const ClusterLabeling& labeling);

struct SpeedConfig {
  CompetitionParams params;
  std::int32_t horizon = 100;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  int half_width = 0;  // 0: the smallest exact box for horizon
  unsigned workers = 1;
};

struct SpeedRow {
  std::size_t replica = 0;
  bool coexisted = false;
  double ratio = 0.0;  // |eta_b(T)|_norm / T; meaningful only if coexisted
};

struct SpeedResult {
  std::vector<SpeedRow> rows;
  std::size_t coexist_count = 0;
  std::string diagnostic;  // set when no replica coexisted

  std::vector<double> ratios() const;
};

/// Replica r runs the competition on the field seeded by derive_seed(seed, r)
/// and, when both colors are still active at the horizon, records the reach
/// of the strong color measured in `norm` divided by the horizon.
SpeedResult speed_ratio_experiment(const SpeedConfig& config, const NormEvaluator& norm);

void write_speed_csv(std::ostream& out, const SpeedResult& result);

}  // namespace percomp
