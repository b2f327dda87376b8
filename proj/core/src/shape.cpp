#include "percomp/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "percomp/csv.hpp"
#include "percomp/parallel.hpp"
#include "percomp/stats.hpp"

namespace percomp {

namespace {

Site scaled(const Site& x, int n) {
  Site out{};
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = n * x[a];
  return out;
}

void check_direction(const Site& d, int dim) {
  if (l1_norm(d, dim) == 0) throw std::invalid_argument("direction must be nonzero");
  for (int a = dim; a < kMaxDim; ++a) {
    if (d[static_cast<std::size_t>(a)] != 0) {
      throw std::invalid_argument("direction has coordinates past the dimension");
    }
  }
}

// [replica][target] chemical distances from the origin, replica r on the field
// seeded by derive_seed(seed, r).
std::vector<std::vector<std::int32_t>> replica_distances(const BoxDomain& dom, double p,
                                                         const std::vector<Site>& targets,
                                                         std::size_t replicas,
                                                         std::uint64_t seed, unsigned workers) {
  std::vector<SiteIndex> idx;
  idx.reserve(targets.size());
  for (const Site& t : targets) idx.push_back(dom.index(t));
  const SiteIndex origin = dom.index(Site{});
  std::vector<std::vector<std::int32_t>> out(replicas);
  parallel_for(replicas, workers, [&](std::size_t r) {
    const EdgeWeightField field(derive_seed(seed, r), dom);
    out[r] = chemical_distances_to(field, p, origin, idx);
  });
  return out;
}

std::string direction_label(const Site& d, int dim) { return to_string(d, dim); }

}  // namespace

int norm_box_half_width(int reach, int margin) {
  if (margin < 0) margin = reach / 4 + 5;
  return reach + margin;
}

const NormRow* NormEstimate::headline() const {
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->available) return &*it;
  }
  return nullptr;
}

NormEstimate norm_estimate(const NormConfig& config) {
  if (!(config.p > 0.0 && config.p <= 1.0)) {
    throw std::invalid_argument("norm_estimate: p must lie in (0, 1]");
  }
  if (config.replicas == 0) throw std::invalid_argument("norm_estimate: zero replicas");
  check_direction(config.direction, config.dim);
  if (config.n_values.empty()) throw std::invalid_argument("norm_estimate: no n values");
  for (std::size_t i = 0; i < config.n_values.size(); ++i) {
    if (config.n_values[i] < 1 || (i > 0 && config.n_values[i] <= config.n_values[i - 1])) {
      throw std::invalid_argument("norm_estimate: n values must be positive and increasing");
    }
  }
  const int reach = config.n_values.back() * linf_norm(config.direction, config.dim);
  const BoxDomain dom(config.dim, norm_box_half_width(reach, config.margin));

  std::vector<Site> targets;
  for (int n : config.n_values) targets.push_back(scaled(config.direction, n));

  NormEstimate est;
  est.p = config.p;
  est.dim = config.dim;
  est.direction = config.direction;
  est.distances =
      replica_distances(dom, config.p, targets, config.replicas, config.seed, config.workers);

  for (std::size_t j = 0; j < config.n_values.size(); ++j) {
    const int n = config.n_values[j];
    std::vector<double> speeds;
    for (const auto& rep : est.distances) {
      if (rep[j] != DistanceField::kUnreachable) speeds.push_back(rep[j] / static_cast<double>(n));
    }
    NormRow row;
    row.n = n;
    row.connected = speeds.size();
    row.disconnected_frac =
        1.0 - static_cast<double>(speeds.size()) / static_cast<double>(config.replicas);
    row.available = !speeds.empty();
    if (row.available) {
      const MeanCI m = mean_ci(speeds);
      row.estimate = m.mean;
      row.ci = m.half_width;
    }
    est.rows.push_back(row);
  }
  return est;
}

void write_norm_csv(std::ostream& out, std::span<const NormEstimate> estimates) {
  out << "direction,n,estimate,ci,disconnected_frac\n";
  for (const NormEstimate& e : estimates) {
    for (const NormRow& row : e.rows) {
      out << direction_label(e.direction, e.dim) << ',' << row.n << ','
          << (row.available ? csv_number(row.estimate) : std::string("nan")) << ','
          << (row.available ? csv_number(row.ci) : std::string("nan")) << ','
          << csv_number(row.disconnected_frac) << '\n';
    }
  }
}

CpqResult cpq_estimate(const CpqConfig& config) {
  if (!(config.p > 0.0 && config.p <= config.q && config.q <= 1.0)) {
    throw std::invalid_argument("cpq_estimate: need 0 < p <= q <= 1");
  }
  if (config.replicas == 0) throw std::invalid_argument("cpq_estimate: zero replicas");
  if (config.directions.empty()) throw std::invalid_argument("cpq_estimate: no directions");
  if (config.n < 1) throw std::invalid_argument("cpq_estimate: n must be positive");
  int reach = 0;
  std::vector<Site> targets;
  for (const Site& d : config.directions) {
    check_direction(d, config.dim);
    reach = std::max(reach, config.n * linf_norm(d, config.dim));
    targets.push_back(scaled(d, config.n));
  }
  const BoxDomain dom(config.dim, norm_box_half_width(reach, config.margin));
  const auto dp =
      replica_distances(dom, config.p, targets, config.replicas, config.seed, config.workers);
  const auto dq =
      replica_distances(dom, config.q, targets, config.replicas, config.seed, config.workers);

  CpqResult result;
  result.dim = config.dim;
  bool any = false;
  for (std::size_t k = 0; k < config.directions.size(); ++k) {
    std::vector<double> xp, xq;
    for (std::size_t r = 0; r < config.replicas; ++r) {
      if (dp[r][k] == DistanceField::kUnreachable) continue;
      xp.push_back(dp[r][k]);
      xq.push_back(dq[r][k]);
    }
    CpqRow row;
    row.direction = config.directions[k];
    row.connected = xp.size();
    row.available = !xp.empty();
    if (row.available) {
      const double m = static_cast<double>(xp.size());
      const double mp = std::accumulate(xp.begin(), xp.end(), 0.0) / m;
      const double mq = std::accumulate(xq.begin(), xq.end(), 0.0) / m;
      row.ratio = mq / mp;
      if (xp.size() > 1) {
        double vp = 0.0, vq = 0.0, cov = 0.0;
        for (std::size_t i = 0; i < xp.size(); ++i) {
          vp += (xp[i] - mp) * (xp[i] - mp);
          vq += (xq[i] - mq) * (xq[i] - mq);
          cov += (xp[i] - mp) * (xq[i] - mq);
        }
        vp /= m - 1.0;
        vq /= m - 1.0;
        cov /= m - 1.0;
        const double var = (vq - 2.0 * row.ratio * cov + row.ratio * row.ratio * vp) / (m * mp * mp);
        row.ci = kZ95 * std::sqrt(std::max(0.0, var));
      }
      if (!any || row.ratio > result.sup_ratio) result.sup_ratio = row.ratio;
      if (!any || row.ratio + row.ci > result.sup_upper) result.sup_upper = row.ratio + row.ci;
      any = true;
    }
    result.rows.push_back(row);
  }
  return result;
}

void write_cpq_csv(std::ostream& out, const CpqResult& result) {
  out << "direction,ratio,ci\n";
  for (const CpqRow& row : result.rows) {
    out << direction_label(row.direction, result.dim) << ','
        << (row.available ? csv_number(row.ratio) : std::string("nan")) << ','
        << (row.available ? csv_number(row.ci) : std::string("nan")) << '\n';
  }
  out << "sup," << csv_number(result.sup_ratio) << ','
      << csv_number(result.sup_upper - result.sup_ratio) << '\n';
}

NormEvaluator NormEvaluator::l1(int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("NormEvaluator: bad dimension");
  NormEvaluator e;
  e.dim_ = dim;
  e.exact_l1_ = true;
  return e;
}

namespace {
// Lattice symmetries of Z^2: |x|, |y|, then swap so that a >= b >= 0.
std::pair<long long, long long> fold(const Site& x) {
  long long a = std::llabs(x[0]);
  long long b = std::llabs(x[1]);
  if (b > a) std::swap(a, b);
  return {a, b};
}
}  // namespace

NormEvaluator NormEvaluator::fan(std::vector<FanEntry> entries) {
  NormEvaluator e;
  e.dim_ = 2;
  e.exact_l1_ = false;
  for (const FanEntry& f : entries) {
    const auto [a, b] = fold(f.direction);
    if (a == 0) throw std::invalid_argument("NormEvaluator: zero fan direction");
    if (!(f.value > 0.0)) throw std::invalid_argument("NormEvaluator: fan values must be positive");
    const Site folded{static_cast<int>(a), static_cast<int>(b)};
    const bool duplicate = std::any_of(e.fan_.begin(), e.fan_.end(), [&](const FanEntry& g) {
      return static_cast<long long>(g.direction[0]) * b == static_cast<long long>(g.direction[1]) * a;
    });
    if (!duplicate) e.fan_.push_back({folded, f.value});
  }
  std::sort(e.fan_.begin(), e.fan_.end(), [](const FanEntry& u, const FanEntry& v) {
    // angle(u) < angle(v)  <=>  u_b * v_a < v_b * u_a
    return static_cast<long long>(u.direction[1]) * v.direction[0] <
           static_cast<long long>(v.direction[1]) * u.direction[0];
  });
  if (e.fan_.size() < 2 || e.fan_.front().direction[1] != 0 ||
      e.fan_.back().direction[0] != e.fan_.back().direction[1]) {
    throw std::invalid_argument("NormEvaluator: fan must contain the axis and the diagonal");
  }
  return e;
}

double NormEvaluator::operator()(const Site& x) const {
  if (exact_l1_) return l1_norm(x, dim_);
  const auto [a, b] = fold(x);
  if (a == 0) return 0.0;
  for (std::size_t k = 0; k + 1 < fan_.size(); ++k) {
    const long long ua = fan_[k].direction[0], ub = fan_[k].direction[1];
    const long long va = fan_[k + 1].direction[0], vb = fan_[k + 1].direction[1];
    // x lies in the cone spanned by u and v iff b * va <= a * vb (below v).
    if (b * va > a * vb) continue;
    const double det = static_cast<double>(ua * vb - ub * va);
    const double alpha = static_cast<double>(a * vb - b * va) / det;
    const double beta = static_cast<double>(ua * b - ub * a) / det;
    return alpha * fan_[k].value + beta * fan_[k + 1].value;
  }
  return 0.0;  // unreachable: the diagonal closes the fan
}

std::vector<Site> fan_directions(int resolution) {
  if (resolution < 1) throw std::invalid_argument("fan_directions: resolution must be positive");
  std::vector<Site> out;
  for (int j = 0; j <= resolution; ++j) {
    const int g = std::gcd(resolution, j);
    out.push_back(Site{resolution / g, j / g});
  }
  return out;
}

NormEvaluator build_norm_evaluator(double p, int resolution, int n, std::size_t replicas,
                                   std::uint64_t seed, unsigned workers) {
  std::vector<NormEvaluator::FanEntry> entries;
  const std::vector<Site> dirs = fan_directions(resolution);
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    NormConfig cfg;
    cfg.dim = 2;
    cfg.p = p;
    cfg.direction = dirs[k];
    cfg.n_values = {std::max(1, n / linf_norm(dirs[k], 2))};
    cfg.replicas = replicas;
    cfg.seed = derive_seed(seed, k);
    cfg.workers = workers;
    const NormEstimate est = norm_estimate(cfg);
    const NormRow* head = est.headline();
    if (head == nullptr) {
      throw std::runtime_error("build_norm_evaluator: every replica disconnected along " +
                               to_string(dirs[k], 2));
    }
    entries.push_back({dirs[k], head->estimate});
  }
  return NormEvaluator::fan(std::move(entries));
}

ReachValues reach_metrics(const SiteSet& a, const BoxDomain& domain, const NormEvaluator& norm,
                          const ClusterLabeling& labeling) {
  if (labeling.label.size() != domain.num_sites()) {
    throw std::invalid_argument("reach_metrics: labeling does not match the domain");
  }
  ReachValues out;
  for (SiteIndex i : a) out.sup_reach = std::max(out.sup_reach, norm(domain.site(i)));
  for (SiteIndex v = 0; v < domain.num_sites(); ++v) {
    if (!labeling.quasi_infinite(v) || std::binary_search(a.begin(), a.end(), v)) continue;
    const double r = norm(domain.site(v));
    if (!out.inf_defined || r < out.inf_reach) out.inf_reach = r;
    out.inf_defined = true;
  }
  return out;
}

std::vector<double> SpeedResult::ratios() const {
  std::vector<double> out;
  for (const SpeedRow& r : rows) {
    if (r.coexisted) out.push_back(r.ratio);
  }
  return out;
}

SpeedResult speed_ratio_experiment(const SpeedConfig& config, const NormEvaluator& norm) {
  config.params.validate();
  if (config.horizon < 1) throw std::invalid_argument("speed_ratio_experiment: horizon must be positive");
  if (config.replicas == 0) throw std::invalid_argument("speed_ratio_experiment: zero replicas");
  const int dim = norm.dim();
  const int src = std::max(linf_norm(config.params.s1, dim), linf_norm(config.params.s2, dim));
  const int half_width = config.half_width > 0 ? config.half_width : config.horizon + src;
  const BoxDomain dom(dim, half_width);

  SpeedResult result;
  result.rows.resize(config.replicas);
  parallel_for(config.replicas, config.workers, [&](std::size_t r) {
    const EdgeWeightField field(derive_seed(config.seed, r), dom);
    const RunSummary run = run_competition(config.params, field, config.horizon);
    SpeedRow row;
    row.replica = r;
    row.coexisted = run.coexisted();
    if (row.coexisted) {
      double reach = 0.0;
      for (SiteIndex v = 0; v < dom.num_sites(); ++v) {
        if (run.final_state.color(v) & kBlueBit) reach = std::max(reach, norm(dom.site(v)));
      }
      row.ratio = reach / config.horizon;
    }
    result.rows[r] = row;
  });
  for (const SpeedRow& r : result.rows) result.coexist_count += r.coexisted ? 1 : 0;
  if (result.coexist_count == 0) {
    result.diagnostic = "no replica kept both colors active up to the horizon";
  }
  return result;
}

void write_speed_csv(std::ostream& out, const SpeedResult& result) {
  out << "replica,ratio,coexisted\n";
  for (const SpeedRow& r : result.rows) {
    out << r.replica << ',' << (r.coexisted ? csv_number(r.ratio) : std::string("nan")) << ','
        << (r.coexisted ? 1 : 0) << '\n';
  }
}

}  // namespace percomp
