#include "percomp/competition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace percomp {

void CompetitionParams::validate() const {
  if (!(0.0 <= p && p <= q && q <= 1.0)) {
    throw std::invalid_argument("competition parameters need 0 <= p <= q <= 1");
  }
  if (s1 == s2) throw std::invalid_argument("competition sources must be distinct");
}

Configuration initial_configuration(const BoxDomain& domain, const CompetitionParams& params) {
  params.validate();
  Configuration c(domain);
  c.set(params.s1, SiteState::kYellowActive);
  c.set(params.s2, SiteState::kBlueActive);
  return c;
}

StateDistribution local_transition_distribution(const Configuration& config, const Site& x,
                                                const CompetitionParams& params) {
  const BoxDomain& dom = config.domain;
  const SiteIndex i = dom.index(x);
  StateDistribution dist{};
  const SiteState here = config.state[i];
  if (here != SiteState::kEmpty) {
    dist[static_cast<std::size_t>(passive_of(here))] = 1.0;
    return dist;
  }

  int n_yellow = 0, n_blue = 0, n_green = 0;
  dom.for_each_neighbor(i, [&](SiteIndex j) {
    switch (config.state[j]) {
      case SiteState::kYellowActive: ++n_yellow; break;
      case SiteState::kBlueActive: ++n_blue; break;
      case SiteState::kGreenActive: ++n_green; break;
      default: break;
    }
  });

  // Per edge from a green neighbour: both colors w.p. p, blue only w.p. q - p,
  // nothing w.p. 1 - q.
  const double fail_y = 1.0 - params.p;
  const double fail_b = 1.0 - params.q;
  const double no_blue_from_blue = std::pow(fail_b, n_blue);
  const double no_yellow_from_yellow = std::pow(fail_y, n_yellow);
  const double green_silent = std::pow(fail_b, n_green);
  const double green_no_yellow = std::pow(fail_y, n_green);

  const double p_empty = no_blue_from_blue * green_silent * no_yellow_from_yellow;
  const double p_yellow = no_blue_from_blue * green_silent * (1.0 - no_yellow_from_yellow);
  // Blue only: no yellow anywhere and at least one blue transmission.
  const double p_blue = no_yellow_from_yellow * (green_no_yellow - no_blue_from_blue * green_silent);
  const double p_green = std::max(0.0, 1.0 - p_empty - p_yellow - p_blue);

  dist[static_cast<std::size_t>(SiteState::kEmpty)] = p_empty;
  dist[static_cast<std::size_t>(SiteState::kYellowActive)] = p_yellow;
  dist[static_cast<std::size_t>(SiteState::kBlueActive)] = p_blue;
  dist[static_cast<std::size_t>(SiteState::kGreenActive)] = p_green;
  return dist;
}

Configuration step_sampled(const Configuration& config, const CompetitionParams& params,
                           std::mt19937_64& rng) {
  const BoxDomain& dom = config.domain;
  Configuration next(dom);
  next.time = config.time + 1;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (SiteIndex i = 0; i < dom.num_sites(); ++i) {
    const SiteState here = config.state[i];
    if (here != SiteState::kEmpty) {
      next.state[i] = passive_of(here);
      continue;
    }
    bool exposed = false;
    dom.for_each_neighbor(i, [&](SiteIndex j) { exposed = exposed || is_active(config.state[j]); });
    if (!exposed) continue;
    const StateDistribution dist = local_transition_distribution(config, dom.site(i), params);
    const double u = unif(rng);
    double acc = 0.0;
    SiteState pick = SiteState::kGreenActive;
    for (int s = 0; s < kNumSiteStates; ++s) {
      acc += dist[static_cast<std::size_t>(s)];
      if (u < acc) {
        pick = static_cast<SiteState>(s);
        break;
      }
    }
    next.state[i] = pick;
  }
  return next;
}

CompetitionState::CompetitionState(BoxDomain domain)
    : domain_(domain), color_(domain.num_sites(), 0), pending_(domain.num_sites(), 0) {}

CompetitionState CompetitionState::from_configuration(const Configuration& config) {
  CompetitionState st(config.domain);
  st.time_ = config.time;
  for (SiteIndex i = 0; i < config.state.size(); ++i) {
    switch (config.state[i]) {
      case SiteState::kEmpty: break;
      case SiteState::kYellowActive: st.seed_site(i, kYellowBit); break;
      case SiteState::kBlueActive: st.seed_site(i, kBlueBit); break;
      case SiteState::kGreenActive: st.seed_site(i, kYellowBit | kBlueBit); break;
      case SiteState::kYellowPassive: st.color_[i] = kYellowBit; break;
      case SiteState::kBluePassive: st.color_[i] = kBlueBit; break;
      case SiteState::kGreenPassive: st.color_[i] = kYellowBit | kBlueBit; break;
    }
  }
  return st;
}

Configuration CompetitionState::to_configuration() const {
  Configuration c(domain_);
  c.time = time_;
  for (SiteIndex i = 0; i < color_.size(); ++i) c.state[i] = state_of(i);
  return c;
}

SiteState CompetitionState::state_of(SiteIndex i) const {
  const std::uint8_t c = color_[i];
  if (c == 0) return SiteState::kEmpty;
  const bool act = std::binary_search(active_.begin(), active_.end(), i);
  if (c == (kYellowBit | kBlueBit)) return act ? SiteState::kGreenActive : SiteState::kGreenPassive;
  if (c == kYellowBit) return act ? SiteState::kYellowActive : SiteState::kYellowPassive;
  return act ? SiteState::kBlueActive : SiteState::kBluePassive;
}

void CompetitionState::seed_site(SiteIndex i, std::uint8_t bits) {
  if (i >= color_.size()) throw std::out_of_range("seed_site: index outside box");
  color_[i] |= bits;
  auto it = std::lower_bound(active_.begin(), active_.end(), i);
  if (it == active_.end() || *it != i) active_.insert(it, i);
}

namespace {
SiteSet filter(const std::vector<SiteIndex>& xs, const std::vector<std::uint8_t>& color,
               std::uint8_t bit) {
  SiteSet out;
  for (SiteIndex i : xs) {
    if (color[i] & bit) out.push_back(i);
  }
  return out;
}
SiteSet colored(const std::vector<std::uint8_t>& color, std::uint8_t bit) {
  SiteSet out;
  for (std::size_t i = 0; i < color.size(); ++i) {
    if (color[i] & bit) out.push_back(static_cast<SiteIndex>(i));
  }
  return out;
}
}  // namespace

SiteSet CompetitionState::active_yellow() const { return filter(active_, color_, kYellowBit); }
SiteSet CompetitionState::active_blue() const { return filter(active_, color_, kBlueBit); }
SiteSet CompetitionState::colored_yellow() const { return colored(color_, kYellowBit); }
SiteSet CompetitionState::colored_blue() const { return colored(color_, kBlueBit); }

void advance(CompetitionState& state, const EdgeWeightField& field,
             const CompetitionParams& params, const EdgeObserver* observer) {
  if (!(field.domain() == state.domain_)) {
    throw std::invalid_argument("advance: field and state live on different boxes");
  }
  std::vector<SiteIndex> next;
  for (SiteIndex v : state.active_) {
    const std::uint8_t c = state.color_[v];
    field.for_each_incident(v, [&](SiteIndex u, double w) {
      if (state.color_[u] != 0) return;
      ++state.edges_examined_;
      if (observer) (*observer)(v, u);
      std::uint8_t bits = 0;
      if ((c & kYellowBit) && w <= params.p) bits |= kYellowBit;
      if ((c & kBlueBit) && w <= params.q) bits |= kBlueBit;
      if (bits == 0) return;
      if (state.pending_[u] == 0) next.push_back(u);
      state.pending_[u] |= bits;
    });
  }
  for (SiteIndex u : next) {
    state.color_[u] = state.pending_[u];
    state.pending_[u] = 0;
  }
  std::sort(next.begin(), next.end());
  state.active_ = std::move(next);
  ++state.time_;
}

CompetitionState step_field(CompetitionState state, const EdgeWeightField& field,
                            const CompetitionParams& params) {
  advance(state, field, params);
  return state;
}

RunSummary run_competition(const CompetitionParams& params, const EdgeWeightField& field,
                           std::int32_t horizon, bool allow_censored,
                           const std::function<void(const CompetitionState&)>& on_step) {
  params.validate();
  const BoxDomain& dom = field.domain();
  if (horizon < 0) throw std::invalid_argument("run_competition: negative horizon");
  const int reach = dom.half_width() - std::max(linf_norm(params.s1, dom.dim()),
                                                linf_norm(params.s2, dom.dim()));
  const bool censored = horizon > reach;
  if (censored && !allow_censored) {
    throw std::invalid_argument("run_competition: horizon " + std::to_string(horizon) +
                                " exceeds exact range " + std::to_string(reach) + " of the box");
  }

  RunSummary out{params, field.seed(), horizon, censored, CompetitionState(dom), {}, {}};
  CompetitionState& st = out.final_state;
  out.time_yellow.assign(dom.num_sites(), kNever);
  out.time_blue.assign(dom.num_sites(), kNever);
  const SiteIndex i1 = dom.index(params.s1);
  const SiteIndex i2 = dom.index(params.s2);
  st.seed_site(i1, kYellowBit);
  st.seed_site(i2, kBlueBit);
  out.time_yellow[i1] = 0;
  out.time_blue[i2] = 0;
  if (on_step) on_step(st);

  for (std::int32_t t = 1; t <= horizon; ++t) {
    advance(st, field, params);
    for (SiteIndex v : st.active()) {
      if (st.color(v) & kYellowBit) out.time_yellow[v] = t;
      if (st.color(v) & kBlueBit) out.time_blue[v] = t;
    }
    if (on_step) on_step(st);
  }

  for (SiteIndex v : st.active()) {
    if (st.color(v) & kYellowBit) out.survived_yellow = true;
    if (st.color(v) & kBlueBit) out.survived_blue = true;
  }
  for (SiteIndex i = 0; i < dom.num_sites(); ++i) {
    const std::uint8_t c = st.color(i);
    if (c & kYellowBit) ++out.colored_yellow;
    if (c & kBlueBit) ++out.colored_blue;
    if (c == (kYellowBit | kBlueBit)) ++out.green_count;
  }
  return out;
}

std::vector<std::uint8_t> palette_grid(const CompetitionState& state, int x0, int y0, int width,
                                       int height) {
  const BoxDomain& dom = state.domain();
  if (dom.dim() != 2) throw std::invalid_argument("palette_grid: needs a two-dimensional state");
  if (width <= 0 || height <= 0) throw std::invalid_argument("palette_grid: empty window");
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                                 static_cast<std::uint8_t>(SiteState::kEmpty));
  std::vector<std::uint8_t> is_act(dom.num_sites(), 0);
  for (SiteIndex v : state.active()) is_act[v] = 1;
  for (int row = 0; row < height; ++row) {
    const int y = y0 + height - 1 - row;
    for (int col = 0; col < width; ++col) {
      const Site x{x0 + col, y};
      if (!dom.contains(x)) continue;
      const SiteIndex i = dom.index(x);
      const std::uint8_t c = state.color(i);
      SiteState s = SiteState::kEmpty;
      if (c == (kYellowBit | kBlueBit)) {
        s = is_act[i] ? SiteState::kGreenActive : SiteState::kGreenPassive;
      } else if (c == kYellowBit) {
        s = is_act[i] ? SiteState::kYellowActive : SiteState::kYellowPassive;
      } else if (c == kBlueBit) {
        s = is_act[i] ? SiteState::kBlueActive : SiteState::kBluePassive;
      }
      grid[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col)] = static_cast<std::uint8_t>(s);
    }
  }
  return grid;
}

}  // namespace percomp
