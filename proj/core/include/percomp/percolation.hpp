#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "percomp/lattice.hpp"

namespace percomp {

/// Connected components of the p-open subgraph of the box.
struct ClusterLabeling {
  std::vector<std::uint32_t> label;  // per site, 0..num_clusters-1 in order of first site
  std::vector<std::size_t> size;     // per cluster
  std::vector<std::uint8_t> touches_boundary;  // per cluster: quasi-infinite proxy

  std::size_t num_clusters() const { return size.size(); }
  bool quasi_infinite(SiteIndex i) const { return touches_boundary[label[i]] != 0; }
};

/// Union-find over the p-open edges of field's domain.
ClusterLabeling clusters(const EdgeWeightField& field, double p);

/// Chemical distances D_p(source, .) restricted to the box.
class DistanceField {
 public:
  static constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();

  DistanceField(SiteIndex source, double p, std::vector<std::int32_t> dist)
      : source_(source), p_(p), dist_(std::move(dist)) {}

  SiteIndex source() const { return source_; }
  double p() const { return p_; }
  std::int32_t at(SiteIndex i) const { return dist_[i]; }
  bool reachable(SiteIndex i) const { return dist_[i] != kUnreachable; }
  std::span<const std::int32_t> values() const { return dist_; }

  /// B_p^source(t) = { y : D_p(source, y) <= t }.
  SiteSet ball(std::int32_t t) const;

 private:
  SiteIndex source_;
  double p_;
  std::vector<std::int32_t> dist_;
};

/// Breadth-first distances over p-open edges. Throws std::out_of_range when
/// source lies outside the domain.
DistanceField chemical_distance_field(const EdgeWeightField& field, double p, const Site& source);

/// Distances from source to each target (kUnreachable if disconnected); the
/// search stops as soon as every target has been reached.
std::vector<std::int32_t> chemical_distances_to(const EdgeWeightField& field, double p,
                                                SiteIndex source,
                                                std::span<const SiteIndex> targets);

struct TailConfig {
  int dim = 2;
  double p = 0.7;
  std::vector<int> radii;  // strictly increasing, positive
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  int half_width = 0;  // 0: three times the largest radius
  unsigned workers = 1;
};

struct TailRow {
  int r = 0;
  double radius_tail = 0.0;  // P(C_0 finite-proxy and 0 <-> l1-sphere of radius r)
  double radius_ci = 0.0;
  double hole_tail = 0.0;    // P(no quasi-infinite cluster meets the l1 ball of radius r)
  double hole_ci = 0.0;
  std::size_t radius_hits = 0;
  std::size_t hole_hits = 0;
  std::size_t replicas = 0;
};

/// Replica r uses the field seeded by derive_seed(seed, r). Throws
/// std::invalid_argument on zero replicas or malformed radii.
std::vector<TailRow> tail_statistics(const TailConfig& config);

void write_tail_csv(std::ostream& out, std::span<const TailRow> rows);

}  // namespace percomp
