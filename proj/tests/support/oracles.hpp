#pragma once

// Reference implementations used only by the tests. Each one is written
// against the definitions directly and shares no code path with the library
// beyond EdgeWeightField::weight and BoxDomain indexing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "percomp/competition.hpp"
#include "percomp/lattice.hpp"
#include "percomp/percolation.hpp"
#include "percomp/renorm.hpp"

namespace oracle {

using percomp::BoxDomain;
using percomp::EdgeId;
using percomp::EdgeWeightField;
using percomp::Site;
using percomp::SiteIndex;

inline std::vector<Site> neighbours(const Site& x, int dim) {
  std::vector<Site> out;
  for (int a = 0; a < dim; ++a) {
    for (int s : {-1, 1}) {
      Site y = x;
      y[static_cast<std::size_t>(a)] += s;
      out.push_back(y);
    }
  }
  return out;
}

inline bool open(const EdgeWeightField& f, const Site& a, const Site& b, double p) {
  return f.weight(EdgeId::between(a, b, f.domain().dim())) <= p;
}

/// Component id per site by depth-first flood fill; ids are arbitrary.
inline std::vector<int> flood_fill(const EdgeWeightField& f, double p) {
  const BoxDomain& dom = f.domain();
  std::vector<int> id(dom.num_sites(), -1);
  int next = 0;
  for (SiteIndex s = 0; s < dom.num_sites(); ++s) {
    if (id[s] >= 0) continue;
    std::vector<Site> stack{dom.site(s)};
    id[s] = next;
    while (!stack.empty()) {
      const Site x = stack.back();
      stack.pop_back();
      for (const Site& y : neighbours(x, dom.dim())) {
        if (!dom.contains(y) || !open(f, x, y, p)) continue;
        const SiteIndex j = dom.index(y);
        if (id[j] >= 0) continue;
        id[j] = next;
        stack.push_back(y);
      }
    }
    ++next;
  }
  return id;
}

inline constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max();

/// Shortest open-path lengths by dynamic programming over path length: after
/// round k, best[y] is the length of the shortest open path of at most k edges.
inline std::vector<std::int32_t> path_length_dp(const EdgeWeightField& f, double p, const Site& src) {
  const BoxDomain& dom = f.domain();
  std::vector<std::int32_t> best(dom.num_sites(), kInf);
  best[dom.index(src)] = 0;
  for (std::size_t k = 1; k < dom.num_sites(); ++k) {
    std::vector<std::int32_t> nxt = best;
    for (std::size_t slot = 0; slot < dom.num_edge_slots(); ++slot) {
      if (!dom.is_edge_slot(slot)) continue;
      const EdgeId e = dom.edge(slot);
      if (f.weight(e) > p) continue;
      const SiteIndex a = dom.index(e.lower), b = dom.index(e.upper());
      if (best[a] != kInf) nxt[b] = std::min(nxt[b], best[a] + 1);
      if (best[b] != kInf) nxt[a] = std::min(nxt[a], best[b] + 1);
    }
    if (nxt == best) break;
    best.swap(nxt);
  }
  return best;
}

/// Edge-by-edge scan for the p-boundary of a set.
inline std::set<Site> boundary_scan(const EdgeWeightField& f, double p, const std::set<Site>& a) {
  const BoxDomain& dom = f.domain();
  std::set<Site> out;
  for (std::size_t slot = 0; slot < dom.num_edge_slots(); ++slot) {
    if (!dom.is_edge_slot(slot)) continue;
    const EdgeId e = dom.edge(slot);
    if (f.weight(e) > p) continue;
    const Site x = e.lower, y = e.upper();
    if (a.count(x) && !a.count(y)) out.insert(y);
    if (a.count(y) && !a.count(x)) out.insert(x);
  }
  return out;
}

/// The colored-set recursion B_y' = B_y u (d_p B_y \ B_b), B_b' = B_b u (d_q B_b \ B_y).
struct ColoredSets {
  std::set<Site> yellow;
  std::set<Site> blue;
};

inline ColoredSets colored_step(const EdgeWeightField& f, double p, double q, const ColoredSets& b) {
  ColoredSets out = b;
  for (const Site& x : boundary_scan(f, p, b.yellow)) {
    if (!b.blue.count(x)) out.yellow.insert(x);
  }
  for (const Site& x : boundary_scan(f, q, b.blue)) {
    if (!b.yellow.count(x)) out.blue.insert(x);
  }
  return out;
}

/// Distribution of one site's next state from first principles: every edge to
/// an active neighbour carries one uniform w, transmitting yellow if the
/// neighbour carries yellow and w <= p, blue if it carries blue and w <= q.
/// Enumerates the 3^n joint outcomes of (w <= p, p < w <= q, w > q).
inline percomp::StateDistribution site_law_by_edges(int n_yellow, int n_blue, int n_green, double p,
                                                    double q) {
  using percomp::SiteState;
  std::vector<int> kinds;  // 1 yellow, 2 blue, 3 green
  kinds.insert(kinds.end(), static_cast<std::size_t>(n_yellow), 1);
  kinds.insert(kinds.end(), static_cast<std::size_t>(n_blue), 2);
  kinds.insert(kinds.end(), static_cast<std::size_t>(n_green), 3);
  const double band[3] = {p, q - p, 1.0 - q};
  percomp::StateDistribution d{};
  std::size_t total = 1;
  for (std::size_t i = 0; i < kinds.size(); ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double prob = 1.0;
    bool y = false, b = false;
    for (int kind : kinds) {
      const int outcome = static_cast<int>(c % 3);
      c /= 3;
      prob *= band[outcome];
      if ((kind & 1) && outcome == 0) y = true;
      if ((kind & 2) && outcome <= 1) b = true;
    }
    SiteState s = SiteState::kEmpty;
    if (y && b) s = SiteState::kGreenActive;
    else if (y) s = SiteState::kYellowActive;
    else if (b) s = SiteState::kBlueActive;
    d[static_cast<std::size_t>(s)] += prob;
  }
  return d;
}

/// Exact one-step law of a configuration as a product of per-site laws. Keys
/// are the next states of `sites` (all other sites are deterministic).
inline std::map<std::vector<percomp::SiteState>, double> product_law(
    const percomp::Configuration& c, const std::vector<Site>& sites,
    const percomp::CompetitionParams& params) {
  std::map<std::vector<percomp::SiteState>, double> law{{{}, 1.0}};
  for (const Site& x : sites) {
    const auto d = percomp::local_transition_distribution(c, x, params);
    std::map<std::vector<percomp::SiteState>, double> nxt;
    for (const auto& [key, pr] : law) {
      for (int s = 0; s < percomp::kNumSiteStates; ++s) {
        if (d[static_cast<std::size_t>(s)] == 0.0) continue;
        auto k = key;
        k.push_back(static_cast<percomp::SiteState>(s));
        nxt[k] += pr * d[static_cast<std::size_t>(s)];
      }
    }
    law.swap(nxt);
  }
  return law;
}

/// True iff a p-open coordinate-monotone path joins some inner-boundary site
/// y to some outer-boundary site z with every site but z inside the box.
/// Paths of length |z - y|_1 are exactly the monotone ones, so this decides
/// whiteness by a DP over the monotone rectangle of each pair.
inline bool box_white_by_monotone_paths(const EdgeWeightField& f, double p, const percomp::NBox& box,
                                        const percomp::RenormGrid& grid) {
  const int dim = grid.dim();
  for (const Site& y : grid.inner_boundary(box)) {
    for (const Site& z : grid.outer_boundary(box)) {
      Site step{};
      for (int j = 0; j < dim; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        step[uj] = z[uj] > y[uj] ? 1 : (z[uj] < y[uj] ? -1 : 0);
      }
      std::set<Site> reach{y};
      std::vector<Site> layer{y};
      const int len = percomp::l1_norm([&] {
        Site d{};
        for (int j = 0; j < dim; ++j) d[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)];
        return d;
      }(), dim);
      for (int l = 0; l < len && !layer.empty(); ++l) {
        std::vector<Site> nxt;
        for (const Site& v : layer) {
          for (int j = 0; j < dim; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (step[uj] == 0 || v[uj] == z[uj]) continue;
            Site u = v;
            u[uj] += step[uj];
            const bool last = (l + 1 == len);
            if (last ? u != z : !grid.in_box(u, box)) continue;
            if (!open(f, v, u, p) || reach.count(u)) continue;
            reach.insert(u);
            nxt.push_back(u);
          }
        }
        layer.swap(nxt);
      }
      if (reach.count(z)) return true;
    }
  }
  return false;
}

/// Random self-avoiding walk from 0 inside [-half, half]^2, grown step by
/// step until it reaches `length` sites or gets trapped.
inline std::vector<Site> random_saw(std::mt19937_64& rng, int half, std::size_t length) {
  std::vector<Site> path{Site{}};
  std::set<Site> used{Site{}};
  while (path.size() < length) {
    std::vector<Site> options;
    for (const Site& y : neighbours(path.back(), 2)) {
      if (std::abs(y[0]) <= half && std::abs(y[1]) <= half && !used.count(y)) options.push_back(y);
    }
    if (options.empty()) break;
    const Site y = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    path.push_back(y);
    used.insert(y);
  }
  return path;
}

/// Number of path edges claimed by more than one main crossing, found by
/// inserting each crossing's edge set into one ordered set.
inline std::size_t shared_edges(const std::vector<Site>& path, const percomp::CrossingSequence& seq) {
  std::set<std::pair<Site, Site>> edges;
  std::size_t shared = 0;
  for (const percomp::Crossing& c : seq.crossings) {
    for (std::size_t i = c.first; i < c.last && i + 1 < path.size(); ++i) {
      const auto e = std::minmax(path[i], path[i + 1]);
      if (!edges.insert({e.first, e.second}).second) ++shared;
    }
  }
  return shared;
}

/// Main-cube sequence properties plus per-crossing geometry; returns an empty string when
/// everything holds, else a description of the first failure. Edge sharing
/// between crossings is checked last, and only when `disjoint` is set.
inline std::string check_properties(const std::vector<Site>& path, const percomp::CrossingSequence& seq,
                                    const percomp::RenormGrid& grid, bool disjoint = true) {
  const int dim = grid.dim();
  auto linf = [&](const Site& a, const Site& b) {
    int m = 0;
    for (int j = 0; j < dim; ++j) m = std::max(m, std::abs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]));
    return m;
  };
  if (seq.tau() == 0) return "no main cube";
  if (!grid.in_cube(path.front(), seq.main_cube(0))) return "first main cube misses the start";
  const Site& last_cube = seq.visited[seq.loop_erased.back()];
  if (linf(seq.main_cube(seq.tau() - 1), last_cube) > 1) return "last main cube too far from the end";
  for (std::size_t i = 0; i + 1 < seq.tau(); ++i) {
    if (linf(seq.main_cube(i + 1), seq.main_cube(i)) != 1) return "consecutive main cubes not adjacent";
  }
  for (const percomp::Crossing& c : seq.crossings) {
    if (c.first >= c.last || c.last >= path.size()) return "crossing indices out of order";
    if (!grid.on_inner_boundary(path[c.first], c.box)) return "crossing does not start on the inner boundary";
    if (!grid.on_outer_boundary(path[c.last], c.box)) return "crossing does not end on the outer boundary";
    for (std::size_t i = c.first; i < c.last; ++i) {
      if (!grid.in_box(path[i], c.box)) return "crossing leaves its box";
    }
  }
  if (disjoint && shared_edges(path, seq) > 0) return "main crossings share an edge";
  return {};
}

}  // namespace oracle
