#include "percomp/percolation.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "percomp/csv.hpp"
#include "percomp/parallel.hpp"
#include "percomp/stats.hpp"

namespace percomp {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), SiteIndex{0});
  }

  SiteIndex find(SiteIndex i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(SiteIndex a, SiteIndex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<SiteIndex> parent_;
  std::vector<std::uint8_t> rank_;
};

// Level-synchronous BFS with two frontier buffers. `done` is polled after each
// newly labelled site and may stop the search early.
template <class Done>
std::vector<std::int32_t> bfs(const EdgeWeightField& field, double p, SiteIndex source,
                              Done&& done) {
  std::vector<std::int32_t> dist(field.domain().num_sites(), DistanceField::kUnreachable);
  std::vector<SiteIndex> frontier{source};
  std::vector<SiteIndex> next;
  dist[source] = 0;
  if (done(source)) return dist;
  std::int32_t level = 0;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    for (SiteIndex v : frontier) {
      bool stop = false;
      field.for_each_incident(v, [&](SiteIndex u, double w) {
        if (stop || w > p || dist[u] != DistanceField::kUnreachable) return;
        dist[u] = level;
        next.push_back(u);
        stop = done(u);
      });
      if (stop) return dist;
    }
    frontier.swap(next);
  }
  return dist;
}

}  // namespace

ClusterLabeling clusters(const EdgeWeightField& field, double p) {
  const BoxDomain& dom = field.domain();
  const std::size_t n = dom.num_sites();
  DisjointSets sets(n);
  for (SiteIndex v = 0; v < n; ++v) {
    field.for_each_incident(v, [&](SiteIndex u, double w) {
      if (u > v && w <= p) sets.unite(v, u);
    });
  }

  ClusterLabeling out;
  out.label.assign(n, 0);
  std::vector<std::uint32_t> root_label(n, std::numeric_limits<std::uint32_t>::max());
  for (SiteIndex v = 0; v < n; ++v) {
    const SiteIndex r = sets.find(v);
    if (root_label[r] == std::numeric_limits<std::uint32_t>::max()) {
      root_label[r] = static_cast<std::uint32_t>(out.size.size());
      out.size.push_back(0);
      out.touches_boundary.push_back(0);
    }
    const std::uint32_t l = root_label[r];
    out.label[v] = l;
    ++out.size[l];
    if (dom.on_boundary(v)) out.touches_boundary[l] = 1;
  }
  return out;
}

SiteSet DistanceField::ball(std::int32_t t) const {
  SiteSet out;
  for (std::size_t i = 0; i < dist_.size(); ++i) {
    if (dist_[i] <= t) out.push_back(static_cast<SiteIndex>(i));
  }
  return out;
}

DistanceField chemical_distance_field(const EdgeWeightField& field, double p, const Site& source) {
  const SiteIndex s = field.domain().index(source);
  return DistanceField(s, p, bfs(field, p, s, [](SiteIndex) { return false; }));
}

std::vector<std::int32_t> chemical_distances_to(const EdgeWeightField& field, double p,
                                                SiteIndex source,
                                                std::span<const SiteIndex> targets) {
  std::vector<std::uint8_t> wanted(field.domain().num_sites(), 0);
  std::size_t remaining = 0;
  for (SiteIndex t : targets) {
    if (t >= wanted.size()) throw std::out_of_range("target outside domain");
    if (!wanted[t]) ++remaining;
    wanted[t] = 1;
  }
  if (source >= wanted.size()) throw std::out_of_range("source outside domain");
  auto dist = bfs(field, p, source, [&](SiteIndex u) {
    if (wanted[u]) --remaining;
    return remaining == 0;
  });
  std::vector<std::int32_t> out;
  out.reserve(targets.size());
  for (SiteIndex t : targets) out.push_back(dist[t]);
  return out;
}

std::vector<TailRow> tail_statistics(const TailConfig& config) {
  if (config.replicas == 0) throw std::invalid_argument("tail_statistics: zero replicas");
  if (config.radii.empty()) throw std::invalid_argument("tail_statistics: no radii");
  for (std::size_t i = 0; i < config.radii.size(); ++i) {
    if (config.radii[i] < 1 || (i > 0 && config.radii[i] <= config.radii[i - 1])) {
      throw std::invalid_argument("tail_statistics: radii must be positive and strictly increasing");
    }
  }
  const int r_max = config.radii.back();
  const int half_width = config.half_width > 0 ? config.half_width : 3 * r_max;
  if (half_width < 3 * r_max) {
    throw std::invalid_argument("tail_statistics: box must be at least 3x the largest radius");
  }
  const BoxDomain dom(config.dim, half_width);
  const SiteIndex origin = dom.index(Site{});

  // Per replica: l1 radius of the origin's cluster if it is finite-proxy
  // (-1 otherwise), and the smallest l1 norm of a quasi-infinite site.
  struct Outcome {
    int finite_radius = -1;
    int nearest_infinite = std::numeric_limits<int>::max();
  };
  std::vector<Outcome> outcomes(config.replicas);
  parallel_for(config.replicas, config.workers, [&](std::size_t rep) {
    const EdgeWeightField field(derive_seed(config.seed, rep), dom);
    const ClusterLabeling lab = clusters(field, config.p);
    const std::uint32_t own = lab.label[origin];
    Outcome o;
    int radius = 0;
    std::array<int, kMaxDim> digit{};
    for (SiteIndex v = 0; v < dom.num_sites(); ++v) {
      const std::uint32_t l = lab.label[v];
      if (l == own || lab.touches_boundary[l]) {
        int norm = 0;
        for (int a = 0; a < dom.dim(); ++a) {
          norm += std::abs(digit[static_cast<std::size_t>(a)] - half_width);
        }
        if (l == own) radius = std::max(radius, norm);
        if (lab.touches_boundary[l]) o.nearest_infinite = std::min(o.nearest_infinite, norm);
      }
      for (int a = dom.dim() - 1; a >= 0; --a) {  // row-major successor
        if (++digit[static_cast<std::size_t>(a)] < dom.side()) break;
        digit[static_cast<std::size_t>(a)] = 0;
      }
    }
    if (!lab.touches_boundary[own]) o.finite_radius = radius;
    outcomes[rep] = o;
  });

  std::vector<TailRow> rows;
  for (int r : config.radii) {
    TailRow row;
    row.r = r;
    row.replicas = config.replicas;
    for (const Outcome& o : outcomes) {
      if (o.finite_radius >= r) ++row.radius_hits;
      if (o.nearest_infinite > r) ++row.hole_hits;
    }
    const MeanCI rad = proportion_ci(row.radius_hits, config.replicas);
    const MeanCI hole = proportion_ci(row.hole_hits, config.replicas);
    row.radius_tail = rad.mean;
    row.radius_ci = rad.half_width;
    row.hole_tail = hole.mean;
    row.hole_ci = hole.half_width;
    rows.push_back(row);
  }
  return rows;
}

void write_tail_csv(std::ostream& out, std::span<const TailRow> rows) {
  out << "r,radius_tail,radius_ci,hole_tail,hole_ci,replicas\n";
  for (const TailRow& row : rows) {
    out << row.r << ',' << csv_number(row.radius_tail) << ',' << csv_number(row.radius_ci) << ','
        << csv_number(row.hole_tail) << ',' << csv_number(row.hole_ci) << ',' << row.replicas
        << '\n';
  }
}

}  // namespace percomp
