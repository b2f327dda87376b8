#include "percomp/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace percomp {

int l1_norm(const Site& x, int dim) {
  int s = 0;
  for (int a = 0; a < dim; ++a) s += std::abs(x[static_cast<std::size_t>(a)]);
  return s;
}

int linf_norm(const Site& x, int dim) {
  int m = 0;
  for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(x[static_cast<std::size_t>(a)]));
  return m;
}

std::string to_string(const Site& x, int dim) {
  std::string out = "(";
  for (int a = 0; a < dim; ++a) {
    if (a > 0) out += ' ';
    out += std::to_string(x[static_cast<std::size_t>(a)]);
  }
  return out + ")";
}

EdgeId EdgeId::between(const Site& a, const Site& b, int dim) {
  int axis = -1;
  for (int j = 0; j < dim; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const int diff = b[u] - a[u];
    if (diff == 0) continue;
    if (std::abs(diff) != 1 || axis >= 0) {
      throw std::invalid_argument("EdgeId: sites are not neighbours");
    }
    axis = j;
  }
  if (axis < 0) throw std::invalid_argument("EdgeId: identical endpoints");
  const bool a_lower = a[static_cast<std::size_t>(axis)] < b[static_cast<std::size_t>(axis)];
  return EdgeId{a_lower ? a : b, axis};
}

BoxDomain::BoxDomain(int dim, int half_width) : dim_(dim), half_width_(half_width) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("BoxDomain: dimension out of range");
  if (half_width < 1 || half_width > kMaxHalfWidth) {
    throw std::invalid_argument("BoxDomain: half width out of range");
  }
  side_ = 2 * half_width + 1;
  std::size_t n = 1;
  for (int a = dim - 1; a >= 0; --a) {
    strides_[static_cast<std::size_t>(a)] = n;
    n *= static_cast<std::size_t>(side_);
  }
  if (n > std::size_t{0xffffffffU}) throw std::invalid_argument("BoxDomain: too many sites");
  num_sites_ = n;
}

bool BoxDomain::contains(const Site& x) const {
  for (int a = 0; a < kMaxDim; ++a) {
    const int v = x[static_cast<std::size_t>(a)];
    if (a < dim_ ? std::abs(v) > half_width_ : v != 0) return false;
  }
  return true;
}

bool BoxDomain::contains(const EdgeId& e) const {
  return e.axis >= 0 && e.axis < dim_ && contains(e.lower) && contains(e.upper());
}

SiteIndex BoxDomain::index(const Site& x) const {
  if (!contains(x)) throw std::out_of_range("site " + to_string(x, dim_) + " outside box");
  std::size_t i = 0;
  for (int a = 0; a < dim_; ++a) {
    const auto u = static_cast<std::size_t>(a);
    i += static_cast<std::size_t>(x[u] + half_width_) * strides_[u];
  }
  return static_cast<SiteIndex>(i);
}

Site BoxDomain::site(SiteIndex i) const {
  if (i >= num_sites_) throw std::out_of_range("site index outside box");
  std::array<int, kMaxDim> digit{};
  decompose(i, digit);
  Site x{};
  for (int a = 0; a < dim_; ++a) {
    x[static_cast<std::size_t>(a)] = digit[static_cast<std::size_t>(a)] - half_width_;
  }
  return x;
}

std::size_t BoxDomain::edge_index(const EdgeId& e) const {
  if (!contains(e)) throw std::out_of_range("edge outside box");
  return static_cast<std::size_t>(index(e.lower)) * static_cast<std::size_t>(dim_) +
         static_cast<std::size_t>(e.axis);
}

bool BoxDomain::is_edge_slot(std::size_t slot) const {
  if (slot >= num_edge_slots()) return false;
  const auto i = static_cast<SiteIndex>(slot / static_cast<std::size_t>(dim_));
  const int axis = static_cast<int>(slot % static_cast<std::size_t>(dim_));
  std::array<int, kMaxDim> digit{};
  decompose(i, digit);
  return digit[static_cast<std::size_t>(axis)] < side_ - 1;
}

EdgeId BoxDomain::edge(std::size_t slot) const {
  if (!is_edge_slot(slot)) throw std::out_of_range("edge slot is not an in-box edge");
  const auto i = static_cast<SiteIndex>(slot / static_cast<std::size_t>(dim_));
  return EdgeId{site(i), static_cast<int>(slot % static_cast<std::size_t>(dim_))};
}

int BoxDomain::degree(SiteIndex i) const {
  int n = 0;
  for_each_neighbor(i, [&](SiteIndex) { ++n; });
  return n;
}

bool BoxDomain::on_boundary(SiteIndex i) const { return degree(i) < 2 * dim_; }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) {
  return mix64(mix64(master) ^ (a + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return mix64(derive_seed(master, a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

EdgeWeightField::EdgeWeightField(std::uint64_t seed, BoxDomain domain)
    : seed_(seed), seed_mixed_(mix64(seed)), domain_(domain) {}

std::uint64_t EdgeWeightField::edge_key(const EdgeId& e, int dim) {
  std::uint64_t key = static_cast<std::uint64_t>(e.axis) << 60;
  for (int a = 0; a < dim; ++a) {
    key |= static_cast<std::uint64_t>(e.lower[static_cast<std::size_t>(a)] + kMaxHalfWidth + 1)
           << (15 * a);
  }
  return key;
}

double EdgeWeightField::weight(const EdgeId& e) const {
  if (!domain_.contains(e)) throw std::out_of_range("edge outside the field's domain");
  return hashed(edge_key(e, domain_.dim()));
}

double EdgeWeightField::weight_between(SiteIndex a, SiteIndex b) const {
  return weight(EdgeId::between(domain_.site(a), domain_.site(b), domain_.dim()));
}

SiteSet make_site_set(std::vector<SiteIndex> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

bool is_subset(const SiteSet& a, const SiteSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

SiteSet p_boundary(const EdgeWeightField& field, double p, std::span<const SiteIndex> a) {
  const SiteSet members = make_site_set({a.begin(), a.end()});
  std::vector<SiteIndex> out;
  for (SiteIndex x : members) {
    field.for_each_incident(x, [&](SiteIndex y, double w) {
      if (w <= p && !std::binary_search(members.begin(), members.end(), y)) out.push_back(y);
    });
  }
  return make_site_set(std::move(out));
}

}  // namespace percomp
