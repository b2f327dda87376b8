#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "percomp/percolation.hpp"

using namespace percomp;

TEST(Clusters, ClosedAndOpenExtremes) {
  const BoxDomain dom(2, 3);
  const EdgeWeightField f(4, dom);
  const ClusterLabeling none = clusters(f, 0.0);
  EXPECT_EQ(none.num_clusters(), dom.num_sites());
  const ClusterLabeling all = clusters(f, 1.0);
  EXPECT_EQ(all.num_clusters(), 1u);
  EXPECT_EQ(all.size[0], dom.num_sites());
  EXPECT_TRUE(all.quasi_infinite(dom.index(Site{})));
}

TEST(Clusters, MatchesFloodFill) {
  std::mt19937_64 rng(17);
  for (int dim : {2, 3}) {
    const BoxDomain dom(dim, dim == 2 ? 2 : 1);
    for (int trial = 0; trial < 100; ++trial) {
      const EdgeWeightField f(rng(), dom);
      const ClusterLabeling lab = clusters(f, 0.5);
      const std::vector<int> ref = oracle::flood_fill(f, 0.5);
      std::map<int, std::uint32_t> to_lab;
      for (SiteIndex i = 0; i < dom.num_sites(); ++i) {
        auto [it, fresh] = to_lab.emplace(ref[i], lab.label[i]);
        EXPECT_EQ(it->second, lab.label[i]);
      }
      EXPECT_EQ(to_lab.size(), lab.num_clusters());
      std::size_t total = 0;
      for (std::size_t s : lab.size) total += s;
      EXPECT_EQ(total, dom.num_sites());
    }
  }
}

TEST(ChemicalDistance, SourceAndFullyOpen) {
  const BoxDomain dom(2, 5);
  const EdgeWeightField f(8, dom);
  const Site src{1, -2};
  const DistanceField d0 = chemical_distance_field(f, 0.3, src);
  EXPECT_EQ(d0.at(dom.index(src)), 0);
  const DistanceField d1 = chemical_distance_field(f, 1.0, src);
  for (SiteIndex i = 0; i < dom.num_sites(); ++i) {
    Site y = dom.site(i);
    y[0] -= src[0];
    y[1] -= src[1];
    EXPECT_EQ(d1.at(i), l1_norm(y, 2));
  }
  EXPECT_THROW(chemical_distance_field(f, 0.5, Site{6, 0}), std::out_of_range);
}

TEST(ChemicalDistance, MatchesExhaustiveOracleOn5x5) {
  const BoxDomain dom(2, 2);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const EdgeWeightField f(rng(), dom);
    const Site src = dom.site(static_cast<SiteIndex>(rng() % dom.num_sites()));
    const DistanceField d = chemical_distance_field(f, 0.7, src);
    const auto ref = oracle::path_length_dp(f, 0.7, src);
    for (SiteIndex i = 0; i < dom.num_sites(); ++i) EXPECT_EQ(d.at(i), ref[i]);
  }
}

TEST(ChemicalDistance, Invariants) {
  const BoxDomain dom(2, 8);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const EdgeWeightField f(rng(), dom);
    const double p = 0.55, q = 0.75;
    const Site x{0, 0}, y{3, -2};
    const DistanceField dx = chemical_distance_field(f, p, x);
    const DistanceField dy = chemical_distance_field(f, p, y);
    const DistanceField qx = chemical_distance_field(f, q, x);
    const ClusterLabeling lab = clusters(f, p);
    const SiteIndex ix = dom.index(x), iy = dom.index(y);
    for (SiteIndex z = 0; z < dom.num_sites(); ++z) {
      EXPECT_LE(qx.at(z), dx.at(z));
      EXPECT_EQ(dx.reachable(z), lab.label[z] == lab.label[ix]);
      if (dx.reachable(z)) {
        EXPECT_GE(dx.at(z), l1_norm(dom.site(z), 2));
        if (z != ix) {
          bool has_parent = false;
          f.for_each_incident(z, [&](SiteIndex u, double w) {
            if (w <= p && dx.at(u) == dx.at(z) - 1) has_parent = true;
          });
          EXPECT_TRUE(has_parent);
        }
      }
      if (dx.reachable(iy) && dy.reachable(z)) {
        EXPECT_LE(dx.at(z), dx.at(iy) + dy.at(z));
      }
    }
    const SiteSet ball = dx.ball(4);
    for (SiteIndex z : ball) EXPECT_LE(dx.at(z), 4);
  }
}

TEST(ChemicalDistance, TargetedSearchAgrees) {
  const BoxDomain dom(2, 10);
  const EdgeWeightField f(55, dom);
  const DistanceField full = chemical_distance_field(f, 0.6, Site{});
  const std::vector<SiteIndex> targets{dom.index(Site{5, 0}), dom.index(Site{-3, 7}),
                                       dom.index(Site{10, 10})};
  const auto d = chemical_distances_to(f, 0.6, dom.index(Site{}), targets);
  for (std::size_t k = 0; k < targets.size(); ++k) EXPECT_EQ(d[k], full.at(targets[k]));
}

TEST(TailStatistics, Extremes) {
  TailConfig c;
  c.p = 0.0;
  c.radii = {1, 2, 3};
  c.replicas = 20;
  c.seed = 1;
  for (const TailRow& r : tail_statistics(c)) {
    EXPECT_EQ(r.radius_tail, 0.0);
    EXPECT_EQ(r.hole_tail, 1.0);  // only boundary singletons are quasi-infinite
  }
  c.p = 1.0;
  for (const TailRow& r : tail_statistics(c)) {
    EXPECT_EQ(r.radius_tail, 0.0);
    EXPECT_EQ(r.hole_tail, 0.0);
  }
  c.replicas = 0;
  EXPECT_THROW(tail_statistics(c), std::invalid_argument);
  c.replicas = 5;
  c.radii = {3, 2};
  EXPECT_THROW(tail_statistics(c), std::invalid_argument);
}

TEST(TailStatistics, DecaysBelowHalfOpenEdgesAboveCritical) {
  // p = 0.55 gives enough finite clusters of radius 5..15 to see the decay
  // with a few thousand replicas.
  TailConfig c;
  c.p = 0.55;
  c.radii = {5, 10, 15};
  c.replicas = 4000;
  c.seed = 2024;
  const auto rows = tail_statistics(c);
  EXPECT_GT(rows[0].radius_tail, rows[1].radius_tail);
  EXPECT_GT(rows[1].radius_tail, rows[2].radius_tail);
  for (const TailRow& r : rows) EXPECT_EQ(r.replicas, 4000u);
}

TEST(TailStatistics, WorkerCountDoesNotChangeOutput) {
  TailConfig c;
  c.p = 0.6;
  c.radii = {2, 4};
  c.replicas = 64;
  c.seed = 9;
  std::ostringstream a, b;
  write_tail_csv(a, tail_statistics(c));
  c.workers = 4;
  write_tail_csv(b, tail_statistics(c));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "r,radius_tail,radius_ci,hole_tail,hole_ci,replicas");
}
