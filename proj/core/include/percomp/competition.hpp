#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "percomp/lattice.hpp"

namespace percomp {

/// The seven site states. Values double as palette indices.
enum class SiteState : std::uint8_t {
  kEmpty = 0,
  kYellowActive = 1,
  kBlueActive = 2,
  kGreenActive = 3,
  kYellowPassive = 4,
  kBluePassive = 5,
  kGreenPassive = 6,
};

inline constexpr int kNumSiteStates = 7;

constexpr bool is_active(SiteState s) {
  return s == SiteState::kYellowActive || s == SiteState::kBlueActive ||
         s == SiteState::kGreenActive;
}
constexpr bool is_passive(SiteState s) {
  return s == SiteState::kYellowPassive || s == SiteState::kBluePassive ||
         s == SiteState::kGreenPassive;
}
constexpr SiteState passive_of(SiteState s) {
  switch (s) {
    case SiteState::kYellowActive: return SiteState::kYellowPassive;
    case SiteState::kBlueActive: return SiteState::kBluePassive;
    case SiteState::kGreenActive: return SiteState::kGreenPassive;
    default: return s;
  }
}

/// Probabilities indexed by SiteState.
using StateDistribution = std::array<double, kNumSiteStates>;

/// Yellow is the weaker infection (parameter p), blue the stronger (q).
struct CompetitionParams {
  double p = 0.0;
  double q = 0.0;
  Site s1{};  // yellow source
  Site s2{};  // blue source

  /// Throws std::invalid_argument unless 0 <= p <= q <= 1 and s1 != s2.
  void validate() const;
};

/// A full site-state map over a box.
struct Configuration {
  BoxDomain domain;
  std::vector<SiteState> state;
  std::int64_t time = 0;

  explicit Configuration(BoxDomain d)
      : domain(d), state(d.num_sites(), SiteState::kEmpty) {}

  SiteState at(const Site& x) const { return state[domain.index(x)]; }
  void set(const Site& x, SiteState s) { state[domain.index(x)] = s; }
};

/// Two-source start: yellow active at s1, blue active at s2.
Configuration initial_configuration(const BoxDomain& domain, const CompetitionParams& params);

/// Law of the next state of site x given the whole configuration.
StateDistribution local_transition_distribution(const Configuration& config, const Site& x,
                                                const CompetitionParams& params);

/// One synchronous step: every site draws its next state independently from
/// its local transition distribution.
Configuration step_sampled(const Configuration& config, const CompetitionParams& params,
                           std::mt19937_64& rng);

/// Color bits of a site.
inline constexpr std::uint8_t kYellowBit = 1;
inline constexpr std::uint8_t kBlueBit = 2;

/// The sets A_y, A_b (active) and B_y, B_b (ever colored) of the Bernoulli
/// realization. A site's color bits never change once set, and a site is
/// active during exactly the step after it was colored.
class CompetitionState {
 public:
  explicit CompetitionState(BoxDomain domain);

  static CompetitionState from_configuration(const Configuration& config);
  Configuration to_configuration() const;

  const BoxDomain& domain() const { return domain_; }
  std::int64_t time() const { return time_; }
  std::uint8_t color(SiteIndex i) const { return color_[i]; }
  SiteState state_of(SiteIndex i) const;
  /// Union of A_y and A_b, sorted.
  const std::vector<SiteIndex>& active() const { return active_; }

  SiteSet active_yellow() const;
  SiteSet active_blue() const;
  SiteSet colored_yellow() const;
  SiteSet colored_blue() const;

  /// Paint site i with `bits` and make it active. Only for building initial states.
  void seed_site(SiteIndex i, std::uint8_t bits);

  /// Number of (active, empty) edges read so far.
  std::uint64_t edges_examined() const { return edges_examined_; }

  friend bool operator==(const CompetitionState& a, const CompetitionState& b) {
    return a.domain_ == b.domain_ && a.time_ == b.time_ && a.color_ == b.color_ &&
           a.active_ == b.active_;
  }

 private:
  friend void advance(CompetitionState&, const EdgeWeightField&, const CompetitionParams&,
                      const std::function<void(SiteIndex, SiteIndex)>*);

  BoxDomain domain_;
  std::vector<std::uint8_t> color_;
  std::vector<SiteIndex> active_;
  std::vector<std::uint8_t> pending_;  // scratch, all zero between steps
  std::int64_t time_ = 0;
  std::uint64_t edges_examined_ = 0;
};

/// Called with the two endpoints of every edge the step reads.
using EdgeObserver = std::function<void(SiteIndex active_site, SiteIndex empty_site)>;

/// In-place step of the Bernoulli realization:
///   A_y' = d_p A_y \ (B_y u B_b),  A_b' = d_q A_b \ (B_y u B_b),
///   B_y' = B_y u A_y',             B_b' = B_b u A_b'.
/// Each (active, empty) edge is read once; its weight is compared against p
/// for the yellow part of the active site and against q for the blue part.
void advance(CompetitionState& state, const EdgeWeightField& field,
             const CompetitionParams& params, const EdgeObserver* observer = nullptr);

CompetitionState step_field(CompetitionState state, const EdgeWeightField& field,
                            const CompetitionParams& params);

inline constexpr std::int32_t kNever = -1;

struct RunSummary {
  CompetitionParams params;
  std::uint64_t seed = 0;
  std::int32_t horizon = 0;
  bool censored = false;  // exactness condition was waived
  CompetitionState final_state;
  std::vector<std::int32_t> time_yellow;  // entry time into B_y, kNever if never
  std::vector<std::int32_t> time_blue;
  bool survived_yellow = false;
  bool survived_blue = false;
  std::size_t colored_yellow = 0;
  std::size_t colored_blue = 0;
  std::size_t green_count = 0;

  bool coexisted() const { return survived_yellow && survived_blue; }
};

/// Runs `horizon` steps from the two-source configuration on the field's box.
/// Unless `allow_censored`, requires horizon <= L - max(|s1|_inf, |s2|_inf) so
/// that the run coincides with the infinite-lattice process; otherwise throws
/// std::invalid_argument. `on_step`, if given, sees the state after every
/// step, starting with the initial state at time 0.
RunSummary run_competition(const CompetitionParams& params, const EdgeWeightField& field,
                           std::int32_t horizon, bool allow_censored = false,
                           const std::function<void(const CompetitionState&)>& on_step = {});

/// Palette-index grid (row 0 = largest second coordinate) of a d = 2 state,
/// restricted to the window [x0, x0 + width) x [y0, y0 + height).
std::vector<std::uint8_t> palette_grid(const CompetitionState& state, int x0, int y0, int width,
                                       int height);

}  // namespace percomp
