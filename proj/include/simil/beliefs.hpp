#pragma once

// Belief operators for two players and the common-belief fixpoints that
// describe rationalizable actions in the invest/don't-invest game.

#include "simil/joint_dist.hpp"

#include <array>
#include <vector>

namespace simil {

/// E = E_1 x E_2.
using EventPair = std::array<SignalSet, 2>;

/// One threshold per signal.
using Thresholds = std::vector<Rational>;

/// B_i(E) = {s_i in E_i : G_{s_i}(E_j) >= phi_i(s_i)}, for i = 1, 2.
inline EventPair belief_step(const JointDist& d, const EventPair& e, const std::array<Thresholds, 2>& phi) {
  if (d.players() != 2) throw std::invalid_argument("belief operators are defined for two players");
  EventPair out;
  for (std::size_t i = 0; i < 2; ++i) {
    if (phi[i].size() != d.signals()) throw std::invalid_argument("need one threshold per signal");
    for (auto s : e[i].indices())
      if (d.cond_prob(s, e[1 - i]) >= phi[i][s]) out[i] = out[i].with(s);
  }
  return out;
}

struct CommonBelief {
  EventPair sets;
  std::size_t iterations = 0;  // steps that changed the event
};

/// Iterates the operator from E until it stops changing. Each change
/// removes at least one signal, so at most 2n steps are possible.
inline CommonBelief common_belief(const JointDist& d, EventPair e, const std::array<Thresholds, 2>& phi) {
  CommonBelief r;
  while (true) {
    EventPair next = belief_step(d, e, phi);
    if (next == e) break;
    e = next;
    ++r.iterations;
  }
  r.sets = e;
  return r;
}

struct Rationalizable {
  SignalSet invest, not_invest;
  std::size_t invest_iterations = 0, not_invest_iterations = 0;
};

/// Invest types: common (1-x, 1-x)-belief of S^2. Don't-invest types:
/// common (x, x)-belief of S^2. Both players' sets coincide for
/// exchangeable distributions; player 1's are reported.
inline Rationalizable rationalizable_sets(const JointDist& d, const std::vector<Rational>& x) {
  if (x.size() != d.signals()) throw std::invalid_argument("need one payoff parameter per signal");
  Thresholds inv(x.size()), stay(x.size());
  for (std::size_t s = 0; s < x.size(); ++s) {
    inv[s] = 1 - x[s];
    stay[s] = x[s];
  }
  const EventPair all{d.space().all(), d.space().all()};
  auto a = common_belief(d, all, {inv, inv});
  auto b = common_belief(d, all, {stay, stay});
  return {a.sets[0], b.sets[0], a.iterations, b.iterations};
}

}  // namespace simil
