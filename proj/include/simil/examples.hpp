#pragma once

// Worked examples shipped as fixtures and used by `simil demo`.

#include "simil/bank_run.hpp"
#include "simil/games.hpp"
#include "simil/joint_dist.hpp"
#include "simil/orders.hpp"
#include "simil/witnesses.hpp"

namespace simil::examples {

/// Independent, uniform over n integer signals.
inline JointDist uniform_independent(std::size_t n, std::size_t players) {
  const Rational cell = Rational(1) / boost::multiprecision::pow(Integer(n), static_cast<unsigned>(players));
  JointDist::MassMap m;
  detail::for_each_multiset(n, players, [&](const Profile& p) { m[p] = cell * Rational(detail::orderings(p)); });
  return JointDist(SignalSpace::integers(n), players, std::move(m));
}

/// All players share one uniform signal.
inline JointDist perfectly_correlated(std::size_t n, std::size_t players) {
  JointDist::MassMap m;
  for (std::size_t s = 0; s < n; ++s) m[Profile(players, static_cast<std::uint8_t>(s))] = Rational(1, n);
  return JointDist(SignalSpace::integers(n), players, std::move(m));
}

// Three players, binary signals. CAD-ranked but not supermodular-ranked.
inline JointDist table1_f() {
  return JointDist(SignalSpace::integers(2), 3, {{{0, 0, 0}, frac(1, 3)}, {{0, 1, 1}, frac(1, 2)}, {{1, 1, 1}, frac(1, 6)}});
}
inline JointDist table1_g() {
  return JointDist(SignalSpace::integers(2), 3, {{{0, 0, 1}, frac(3, 4)}, {{1, 1, 1}, frac(1, 4)}});
}

// Middle state of the bank run, perturbed vs conditionally independent.
inline const Rational kFigure1Accuracy{97, 100};
inline const Rational kFigure1Alpha{1, 10000};
inline JointDist figure1_f() { return bank_run_middle_joint(kFigure1Accuracy, kFigure1Alpha); }
inline JointDist figure1_g() { return bank_run_middle_joint(kFigure1Accuracy, 0); }

// Uniform on {1,2,3,4}^2 with +a on (1,1), (2,3), (3,2), (4,4) and -a on
// (1,3), (2,4), (3,1), (4,2). cCAD-higher than the base, not CAD-higher.
inline const Rational kFigure2Alpha{1, 100};
inline JointDist figure2_g() {
  JointDist::MassMap m;
  for (std::uint8_t a = 0; a < 4; ++a)
    for (std::uint8_t b = a; b < 4; ++b) m[{a, b}] = a == b ? frac(1, 16) : frac(1, 8);
  return JointDist(SignalSpace::integers(4, 1), 2, std::move(m));
}
inline JointDist figure2_f() {
  JointDist::MassMap m = figure2_g().masses();
  const Rational& a = kFigure2Alpha;
  m[{0, 0}] += a;
  m[{3, 3}] += a;
  m[{1, 2}] += 2 * a;
  m[{0, 2}] -= 2 * a;
  m[{1, 3}] -= 2 * a;
  return JointDist(SignalSpace::integers(4, 1), 2, std::move(m));
}

// Three players on {1,2,3}: from the independent uniform base, (2,2,2)
// loses 6a, orderings of (1,2,2) and (2,2,3) gain 2a each, orderings of
// (1,2,3) lose a each.
inline const Rational kB2Alpha{1, 1000};
inline JointDist b2_base() {
  JointDist u = uniform_independent(3, 3);
  return JointDist(SignalSpace::integers(3, 1), 3, u.masses());
}
inline JointDist b2_perturbed(const Rational& a = kB2Alpha) {
  JointDist::MassMap m = b2_base().masses();
  m[{1, 1, 1}] -= 6 * a;
  m[{0, 1, 1}] += 3 * 2 * a;
  m[{1, 1, 2}] += 3 * 2 * a;
  m[{0, 1, 2}] -= 6 * a;
  return JointDist(SignalSpace::integers(3, 1), 3, std::move(m));
}

/// alpha = 1, beta = 0: participating is dominant.
inline PrivateValueGame dominance_game(const SignalSpace& sp, std::size_t players) {
  return PrivateValueGame(sp, players, std::vector<Rational>(sp.size(), Rational(1)),
                          std::vector<Rational>(sp.size(), Rational(0)), identity_aggregator());
}

/// Congestion game on the independent uniform 3-signal pair: its
/// equilibrium set loses a strategy under the t = 1/2 diagonal mixture.
inline JointDist congestion_base() { return uniform_independent(3, 2); }
inline JointDist congestion_mixed() { return diagonal_mixture(congestion_base(), frac(1, 2)); }
inline PrivateValueGame congestion_game() {
  const JointDist base = congestion_base(), mixed = congestion_mixed();
  const auto v = check_cad(base, mixed);
  return std::get<PrivateValueGame>(witness_congestion(base, *v.set_form).game);
}

// Two players, binary. Player 1 copies player 2's signal when it is 1
// and draws uniformly otherwise; G is the product of the same marginals.
// Profiles are (s_1, s_2).
inline NonExchJointDist nonexch_f() {
  return NonExchJointDist(SignalSpace::integers(2), 2,
                          {{{0, 0}, frac(1, 4)}, {{1, 0}, frac(1, 4)}, {{1, 1}, frac(1, 2)}});
}
inline NonExchJointDist nonexch_g() {
  return NonExchJointDist(SignalSpace::integers(2), 2,
                          {{{0, 0}, frac(1, 8)}, {{0, 1}, frac(1, 8)}, {{1, 0}, frac(3, 8)}, {{1, 1}, frac(3, 8)}});
}

inline BankRunParams bankrun_base() { return BankRunParams{}; }
inline BankRunParams bankrun_perturbed() {
  BankRunParams bp;
  bp.perturbation = bank_run_feasibility_bound(bp.accuracy);
  return bp;
}

}  // namespace simil::examples
