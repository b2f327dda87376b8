#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace percomp {

inline constexpr int kMaxDim = 4;

// Coordinates are packed 15 bits per axis into the edge-weight key, so every
// in-box coordinate must satisfy |x_j| <= kMaxHalfWidth.
inline constexpr int kMaxHalfWidth = 16383;

/// A lattice site of Z^d. Coordinates past the domain dimension are zero.
using Site = std::array<int, kMaxDim>;

using SiteIndex = std::uint32_t;

/// Sorted, duplicate-free list of dense site indices.
using SiteSet = std::vector<SiteIndex>;

int l1_norm(const Site& x, int dim);
int linf_norm(const Site& x, int dim);
std::string to_string(const Site& x, int dim);

/// Canonical nearest-neighbour edge: its lexicographically lower endpoint and
/// the axis of the unit step to the upper endpoint.
struct EdgeId {
  Site lower{};
  int axis = 0;

  /// Throws std::invalid_argument unless a and b are lattice neighbours.
  static EdgeId between(const Site& a, const Site& b, int dim);

  Site upper() const {
    Site u = lower;
    ++u[static_cast<std::size_t>(axis)];
    return u;
  }

  friend bool operator==(const EdgeId&, const EdgeId&) = default;
};

/// The box {x in Z^d : |x|_inf <= L} with row-major dense indexing (last
/// coordinate fastest). Edge slots are indexed as site_index(lower) * d + axis;
/// slots whose upper endpoint leaves the box are not edges.
class BoxDomain {
 public:
  BoxDomain(int dim, int half_width);

  int dim() const { return dim_; }
  int half_width() const { return half_width_; }
  int side() const { return side_; }
  std::size_t num_sites() const { return num_sites_; }
  std::size_t num_edge_slots() const { return num_sites_ * static_cast<std::size_t>(dim_); }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  bool contains(const Site& x) const;
  bool contains(const EdgeId& e) const;

  /// Throws std::out_of_range for sites outside the box.
  SiteIndex index(const Site& x) const;
  Site site(SiteIndex i) const;

  std::size_t edge_index(const EdgeId& e) const;
  EdgeId edge(std::size_t slot) const;
  bool is_edge_slot(std::size_t slot) const;

  /// Number of in-box neighbours of i.
  int degree(SiteIndex i) const;
  /// True when some neighbour of i lies outside the box.
  bool on_boundary(SiteIndex i) const;

  /// Calls f(neighbour_index) for every in-box neighbour.
  template <class F>
  void for_each_neighbor(SiteIndex i, F&& f) const {
    std::array<int, kMaxDim> digit{};
    decompose(i, digit);
    for (int a = 0; a < dim_; ++a) {
      const auto s = static_cast<SiteIndex>(strides_[static_cast<std::size_t>(a)]);
      if (digit[static_cast<std::size_t>(a)] > 0) f(i - s);
      if (digit[static_cast<std::size_t>(a)] < side_ - 1) f(i + s);
    }
  }

  /// Row-major digits of i, each in [0, side).
  void decompose(SiteIndex i, std::array<int, kMaxDim>& digit) const {
    std::size_t rest = i;
    for (int a = dim_ - 1; a >= 0; --a) {
      digit[static_cast<std::size_t>(a)] = static_cast<int>(rest % static_cast<std::size_t>(side_));
      rest /= static_cast<std::size_t>(side_);
    }
  }

  friend bool operator==(const BoxDomain& a, const BoxDomain& b) {
    return a.dim_ == b.dim_ && a.half_width_ == b.half_width_;
  }

 private:
  int dim_;
  int half_width_;
  int side_;
  std::size_t num_sites_;
  std::array<std::size_t, kMaxDim> strides_{};
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed tree used for every replica stream: derive_seed(master, a, b) is
/// mix64 chained over the three words.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// Map 64 random bits to [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform weights omega_e in [0, 1), one per edge, derived on demand from a
/// keyed hash of (seed, edge). Weights depend only on the seed and the edge
/// coordinates, so any two domains agree on the edges they share.
class EdgeWeightField {
 public:
  EdgeWeightField(std::uint64_t seed, BoxDomain domain);

  std::uint64_t seed() const { return seed_; }
  const BoxDomain& domain() const { return domain_; }

  /// Throws std::out_of_range if e is not an edge of the domain.
  double weight(const EdgeId& e) const;
  /// Weight of the edge between neighbouring in-box sites a and b.
  double weight_between(SiteIndex a, SiteIndex b) const;

  bool is_open(const EdgeId& e, double p) const { return weight(e) <= p; }

  /// Calls f(neighbour_index, weight) for every in-box neighbour of i.
  template <class F>
  void for_each_incident(SiteIndex i, F&& f) const {
    std::array<int, kMaxDim> digit{};
    domain_.decompose(i, digit);
    const int side = domain_.side();
    const std::uint64_t key = key_of_digits(digit);
    for (int a = 0; a < domain_.dim(); ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const auto s = static_cast<SiteIndex>(domain_.stride(a));
      const std::uint64_t step = std::uint64_t{1} << (15 * a);
      const std::uint64_t axis_bits = static_cast<std::uint64_t>(a) << 60;
      if (digit[ua] > 0) f(i - s, hashed((key - step) | axis_bits));
      if (digit[ua] < side - 1) f(i + s, hashed(key | axis_bits));
    }
  }

 private:
  std::uint64_t key_of_digits(const std::array<int, kMaxDim>& digit) const {
    std::uint64_t key = 0;
    for (int a = 0; a < domain_.dim(); ++a) {
      const int x = digit[static_cast<std::size_t>(a)] - domain_.half_width();
      key |= static_cast<std::uint64_t>(x + kMaxHalfWidth + 1) << (15 * a);
    }
    return key;
  }
  static std::uint64_t edge_key(const EdgeId& e, int dim);
  double hashed(std::uint64_t key) const {
    return to_unit(mix64(seed_mixed_ + key * 0x9e3779b97f4a7c15ULL));
  }

  std::uint64_t seed_;
  std::uint64_t seed_mixed_;
  BoxDomain domain_;
};

/// { y not in A : some x in A has an in-box edge {x, y} with omega <= p }.
/// A need not be sorted. The result is sorted.
SiteSet p_boundary(const EdgeWeightField& field, double p, std::span<const SiteIndex> a);

/// Sort and deduplicate.
SiteSet make_site_set(std::vector<SiteIndex> sites);
bool is_subset(const SiteSet& a, const SiteSet& b);

}  // namespace percomp
