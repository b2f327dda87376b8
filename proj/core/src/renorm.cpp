#include "percomp/renorm.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "percomp/csv.hpp"
#include "percomp/parallel.hpp"
#include "percomp/stats.hpp"

namespace percomp {

namespace {

int floor_div(int a, int n) { return a >= 0 ? a / n : -((-a + n - 1) / n); }

struct Range {
  int lo;
  int hi;
  bool has(int v) const { return lo <= v && v <= hi; }
};

Range cross_range(const NBox& b, int n) {
  const int base = b.k[static_cast<std::size_t>(b.axis)] * n;
  return b.sign > 0 ? Range{base + n, base + 2 * n - 1} : Range{base - n, base - 1};
}

Range lateral_range(const Site& k, int axis, int n) {
  const int base = k[static_cast<std::size_t>(axis)] * n;
  return {base - n, base + 2 * n - 1};
}

int inner_coord(const NBox& b, int n) {
  const Range r = cross_range(b, n);
  return b.sign > 0 ? r.lo : r.hi;
}

int last_layer(const NBox& b, int n) {
  const Range r = cross_range(b, n);
  return b.sign > 0 ? r.hi : r.lo;
}

int outer_coord(const NBox& b, int n) { return last_layer(b, n) + b.sign; }

int linf_distance(const Site& a, const Site& b, int dim) {
  int m = 0;
  for (int j = 0; j < dim; ++j) {
    m = std::max(m, std::abs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]));
  }
  return m;
}

int l1_distance(const Site& a, const Site& b, int dim) {
  int s = 0;
  for (int j = 0; j < dim; ++j) {
    s += std::abs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]);
  }
  return s;
}

// Every site of the face {u_axis = coord} x prod_{j != axis} lateral ranges.
std::vector<Site> face(const NBox& b, int coord, int dim, int n) {
  std::vector<Site> out;
  Site u{};
  std::array<Range, kMaxDim> ranges{};
  for (int j = 0; j < dim; ++j) {
    ranges[static_cast<std::size_t>(j)] =
        j == b.axis ? Range{coord, coord} : lateral_range(b.k, j, n);
    u[static_cast<std::size_t>(j)] = ranges[static_cast<std::size_t>(j)].lo;
  }
  while (true) {
    out.push_back(u);
    int j = dim - 1;
    for (; j >= 0; --j) {
      auto uj = static_cast<std::size_t>(j);
      if (u[uj] < ranges[uj].hi) {
        ++u[uj];
        break;
      }
      u[uj] = ranges[uj].lo;
    }
    if (j < 0) break;
  }
  return out;
}

}  // namespace

RenormGrid::RenormGrid(int dim, int n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("RenormGrid: bad dimension");
  if (n < 1) throw std::invalid_argument("RenormGrid: N must be positive");
}

Site RenormGrid::cube_of(const Site& u) const {
  Site k{};
  for (int j = 0; j < dim_; ++j) {
    k[static_cast<std::size_t>(j)] = floor_div(u[static_cast<std::size_t>(j)], n_);
  }
  return k;
}

bool RenormGrid::in_cube(const Site& u, const Site& k) const { return cube_of(u) == k; }

bool RenormGrid::in_large_cube(const Site& u, const Site& k) const {
  for (int j = 0; j < dim_; ++j) {
    if (!lateral_range(k, j, n_).has(u[static_cast<std::size_t>(j)])) return false;
  }
  return true;
}

bool RenormGrid::on_large_boundary(const Site& u, const Site& k) const {
  int outside = 0;
  for (int j = 0; j < dim_; ++j) {
    const Range r = lateral_range(k, j, n_);
    const int v = u[static_cast<std::size_t>(j)];
    if (r.has(v)) continue;
    if (v != r.lo - 1 && v != r.hi + 1) return false;
    ++outside;
  }
  return outside == 1;
}

bool RenormGrid::in_box(const Site& u, const NBox& b) const {
  for (int j = 0; j < dim_; ++j) {
    const Range r = j == b.axis ? cross_range(b, n_) : lateral_range(b.k, j, n_);
    if (!r.has(u[static_cast<std::size_t>(j)])) return false;
  }
  return true;
}

bool RenormGrid::on_inner_boundary(const Site& u, const NBox& b) const {
  return in_box(u, b) && u[static_cast<std::size_t>(b.axis)] == inner_coord(b, n_);
}

bool RenormGrid::on_outer_boundary(const Site& u, const NBox& b) const {
  for (int j = 0; j < dim_; ++j) {
    const int v = u[static_cast<std::size_t>(j)];
    if (j == b.axis ? v != outer_coord(b, n_) : !lateral_range(b.k, j, n_).has(v)) return false;
  }
  return true;
}

NBox RenormGrid::exit_box(const Site& u, const Site& k) const {
  if (!on_large_boundary(u, k)) {
    throw std::invalid_argument("exit_box: site is not on the large-cube boundary");
  }
  for (int j = 0; j < dim_; ++j) {
    const Range r = lateral_range(k, j, n_);
    const int v = u[static_cast<std::size_t>(j)];
    if (v == r.hi + 1) return NBox{k, j, +1};
    if (v == r.lo - 1) return NBox{k, j, -1};
  }
  throw std::logic_error("exit_box: unreachable");
}

std::vector<NBox> RenormGrid::boxes_around(const Site& k) const {
  std::vector<NBox> out;
  for (int j = 0; j < dim_; ++j) {
    out.push_back(NBox{k, j, +1});
    out.push_back(NBox{k, j, -1});
  }
  return out;
}

std::vector<Site> RenormGrid::inner_boundary(const NBox& b) const {
  return face(b, inner_coord(b, n_), dim_, n_);
}

std::vector<Site> RenormGrid::outer_boundary(const NBox& b) const {
  return face(b, outer_coord(b, n_), dim_, n_);
}

CrossingSequence main_crossings(std::span<const Site> path, const RenormGrid& grid) {
  const int dim = grid.dim();
  if (path.empty()) throw std::invalid_argument("main_crossings: empty path");
  if (path.front() != Site{}) throw std::invalid_argument("main_crossings: path must start at 0");
  std::set<Site> seen;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!seen.insert(path[i]).second) {
      throw std::invalid_argument("main_crossings: path has a double point at step " +
                                  std::to_string(i));
    }
    if (i > 0 && l1_distance(path[i - 1], path[i], dim) != 1) {
      throw std::invalid_argument("main_crossings: step " + std::to_string(i) +
                                  " is not a nearest-neighbour move");
    }
  }

  CrossingSequence seq;
  for (const Site& u : path) {
    const Site k = grid.cube_of(u);
    if (seq.visited.empty() || seq.visited.back() != k) seq.visited.push_back(k);
  }

  // Chronological loop removal: revisiting a kept cube erases everything kept
  // after its earlier occurrence.
  std::map<Site, std::size_t> position;
  for (std::size_t t = 0; t < seq.visited.size(); ++t) {
    const Site& k = seq.visited[t];
    if (auto it = position.find(k); it != position.end()) {
      const std::size_t keep = it->second + 1;
      for (std::size_t m = keep; m < seq.loop_erased.size(); ++m) {
        position.erase(seq.visited[seq.loop_erased[m]]);
      }
      seq.loop_erased.resize(keep);
    } else {
      position.emplace(k, seq.loop_erased.size());
      seq.loop_erased.push_back(t);
    }
  }

  auto cube = [&](std::size_t j) -> const Site& { return seq.visited[seq.loop_erased[j]]; };
  seq.main.push_back(0);
  while (true) {
    const std::size_t cur = seq.main.back();
    std::size_t j = cur + 1;
    while (j < seq.loop_erased.size() && linf_distance(cube(j), cube(cur), dim) <= 1) ++j;
    if (j == seq.loop_erased.size()) break;
    seq.main.push_back(j - 1);
  }

  for (std::size_t i = 0; i < seq.main.size(); ++i) {
    const Site& k = seq.main_cube(i);
    std::size_t z = 0;
    while (!grid.in_cube(path[z], k)) ++z;
    std::size_t z2 = z + 1;
    while (z2 < path.size() && !grid.on_large_boundary(path[z2], k)) ++z2;
    if (z2 >= path.size()) continue;
    const NBox box = grid.exit_box(path[z2], k);
    std::size_t j0 = z2 - 1;
    while (grid.in_box(path[j0], box)) --j0;  // path[z] lies in C_N(k), outside every box
    seq.crossings.push_back(Crossing{i, box, j0 + 1, z2});
  }
  return seq;
}

void write_crossing_dump(std::ostream& out, const CrossingSequence& seq, const RenormGrid& grid) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < seq.tau(); ++i) {
    out << to_string(seq.main_cube(i), grid.dim()) << ',';
    if (c < seq.crossings.size() && seq.crossings[c].main_index == i) {
      const Crossing& x = seq.crossings[c++];
      out << (x.box.sign > 0 ? '+' : '-') << (x.box.axis + 1) << ',' << x.length() << '\n';
    } else {
      out << "none,none\n";
    }
  }
}

bool box_is_black(const EdgeWeightField& field, double p, const NBox& box,
                  const RenormGrid& grid) {
  const BoxDomain& dom = field.domain();
  const int dim = grid.dim();
  const int n = grid.n();
  if (dom.dim() != dim) throw std::invalid_argument("box_is_black: dimension mismatch");
  Site lo{}, hi{};
  for (int j = 0; j < dim; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const Range r = j == box.axis ? cross_range(box, n) : lateral_range(box.k, j, n);
    const int out = j == box.axis ? outer_coord(box, n) : r.lo;
    lo[uj] = std::min(r.lo, out);
    hi[uj] = std::max(r.hi, out);
  }
  if (!dom.contains(lo) || !dom.contains(hi)) {
    throw std::out_of_range("box_is_black: box leaves the field's domain");
  }

  const auto axis = static_cast<std::size_t>(box.axis);
  const int last = last_layer(box, n);
  std::vector<std::uint32_t> stamp(dom.num_sites(), 0);
  std::uint32_t round = 0;
  std::vector<Site> frontier, next;

  for (const Site& y : grid.inner_boundary(box)) {
    ++round;
    frontier.assign(1, y);
    stamp[dom.index(y)] = round;
    int level = 0;
    while (!frontier.empty()) {
      next.clear();
      for (const Site& v : frontier) {
        if (v[axis] == last) {
          Site z = v;
          z[axis] += box.sign;
          if (field.weight(EdgeId::between(v, z, dim)) <= p) return false;
        }
        for (int j = 0; j < dim; ++j) {
          for (int step : {-1, +1}) {
            Site u = v;
            u[static_cast<std::size_t>(j)] += step;
            if (!grid.in_box(u, box)) continue;
            // Only sites at l1 distance level + 1 from y can lie on a geodesic.
            if (l1_distance(u, y, dim) != level + 1) continue;
            const SiteIndex ui = dom.index(u);
            if (stamp[ui] == round) continue;
            if (field.weight(EdgeId::between(v, u, dim)) > p) continue;
            stamp[ui] = round;
            next.push_back(u);
          }
        }
      }
      frontier.swap(next);
      ++level;
    }
  }
  return true;
}

bool cube_is_white(const EdgeWeightField& field, double p, const Site& k, const RenormGrid& grid) {
  for (const NBox& b : grid.boxes_around(k)) {
    if (!box_is_black(field, p, b, grid)) return true;
  }
  return false;
}

std::vector<PnRow> estimate_pN(const PnConfig& config) {
  if (config.replicas == 0) throw std::invalid_argument("estimate_pN: zero replicas");
  std::vector<PnRow> rows;
  for (std::size_t j = 0; j < config.n_values.size(); ++j) {
    const int n = config.n_values[j];
    const RenormGrid grid(config.dim, n);
    const BoxDomain dom(config.dim, 2 * n);
    std::vector<std::uint8_t> white(config.replicas, 0);
    parallel_for(config.replicas, config.workers, [&](std::size_t r) {
      const EdgeWeightField field(derive_seed(config.seed, j, r), dom);
      white[r] = cube_is_white(field, config.p, Site{}, grid) ? 1 : 0;
    });
    PnRow row;
    row.n = n;
    row.replicas = config.replicas;
    row.white = static_cast<std::size_t>(std::count(white.begin(), white.end(), 1));
    const MeanCI m = proportion_ci(row.white, row.replicas);
    row.p_white = m.mean;
    row.ci = m.half_width;
    rows.push_back(row);
  }
  return rows;
}

void write_pn_csv(std::ostream& out, std::span<const PnRow> rows) {
  out << "N,p_white,ci,replicas\n";
  for (const PnRow& r : rows) {
    out << r.n << ',' << csv_number(r.p_white) << ',' << csv_number(r.ci) << ',' << r.replicas
        << '\n';
  }
}

}  // namespace percomp
