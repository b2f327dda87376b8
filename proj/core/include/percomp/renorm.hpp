#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "percomp/lattice.hpp"

namespace percomp {

/// One of the 2d boxes surrounding C_N(k) inside L_N(k): `axis` is the long
/// side's complement (the crossing direction) and `sign` is +1 or -1.
struct NBox {
  Site k{};
  int axis = 0;
  int sign = 1;

  friend bool operator==(const NBox&, const NBox&) = default;
};

/// Renormalization grid of side N. With integer sites the half-integer cube
/// bounds become: u in C_N(k) iff floor(u_j / N) = k_j for every j, and
/// L_N(k) = prod_j [k_j N - N, k_j N + 2N - 1].
class RenormGrid {
 public:
  RenormGrid(int dim, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }

  Site cube_of(const Site& u) const;
  bool in_cube(const Site& u, const Site& k) const;
  bool in_large_cube(const Site& u, const Site& k) const;
  /// Sites outside L_N(k) with a neighbour inside it.
  bool on_large_boundary(const Site& u, const Site& k) const;

  bool in_box(const Site& u, const NBox& b) const;
  bool on_inner_boundary(const Site& u, const NBox& b) const;
  bool on_outer_boundary(const Site& u, const NBox& b) const;
  /// The unique surrounding box of k whose outer boundary holds u, for u on
  /// the boundary of L_N(k).
  NBox exit_box(const Site& u, const Site& k) const;

  /// The 2d boxes surrounding C_N(k).
  std::vector<NBox> boxes_around(const Site& k) const;
  std::vector<Site> inner_boundary(const NBox& b) const;
  std::vector<Site> outer_boundary(const NBox& b) const;

 private:
  int dim_;
  int n_;
};

/// A main crossing: path[first .. last] runs inside `box` and ends on its
/// outer boundary.
struct Crossing {
  std::size_t main_index = 0;  // position in the main-cube sequence
  NBox box;
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t length() const { return last - first; }
};

struct CrossingSequence {
  std::vector<Site> visited;            // cube coordinates visited, consecutive repeats merged
  std::vector<std::size_t> loop_erased;  // indices into `visited` kept by loop removal
  std::vector<std::size_t> main;        // indices into `loop_erased` of the main cubes
  std::vector<Crossing> crossings;      // at most one per main cube, in order

  std::size_t tau() const { return main.size(); }
  const Site& main_cube(std::size_t i) const { return visited[loop_erased[main[i]]]; }
};

/// Main cubes and main crossings of a self-avoiding path starting at the
/// origin. Throws std::invalid_argument if the path is empty, does not start
/// at 0, takes a non-nearest-neighbour step or has a double point.
CrossingSequence main_crossings(std::span<const Site> path, const RenormGrid& grid);

/// One line per main cube: `k,box_direction,crossing_len`, where box_direction
/// is the signed 1-based axis (e.g. +1, -2) and both fields are `none` for a
/// main cube without crossing.
void write_crossing_dump(std::ostream& out, const CrossingSequence& seq, const RenormGrid& grid);

/// Black iff no p-open path inside the box joins its inner boundary to its
/// outer boundary with length equal to the l1 distance of its endpoints.
/// Throws std::out_of_range unless the box and its outer boundary lie in the
/// field's domain.
bool box_is_black(const EdgeWeightField& field, double p, const NBox& box, const RenormGrid& grid);

/// C_N(k) is white iff one of its 2d surrounding boxes is white.
bool cube_is_white(const EdgeWeightField& field, double p, const Site& k, const RenormGrid& grid);

struct PnConfig {
  int dim = 2;
  double p = 0.5;
  std::vector<int> n_values;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct PnRow {
  int n = 0;
  double p_white = 0.0;
  double ci = 0.0;
  std::size_t white = 0;
  std::size_t replicas = 0;
};

/// Fraction of replicas in which C_N(0) is white. Replica r at the j-th N uses
/// the field seeded by derive_seed(seed, j, r) on the box of half-width 2N.
std::vector<PnRow> estimate_pN(const PnConfig& config);

void write_pn_csv(std::ostream& out, std::span<const PnRow> rows);

}  // namespace percomp
