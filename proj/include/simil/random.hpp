#pragma once

// Seeded instance generators for the property suites and `simil generate`.
// The stream is std::mt19937_64 driven through std::uniform_int_distribution,
// so a seed reproduces the same instances with the same standard library.
// Every generated distribution has full support, hence positive marginals.

#include "simil/auction.hpp"
#include "simil/games.hpp"
#include "simil/linear.hpp"
#include "simil/orders.hpp"
#include "simil/state_family.hpp"

#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace simil {

using Rng = std::mt19937_64;

inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Uniform on the grid {lo + i/den} within [lo, hi].
inline Rational random_rational(Rng& rng, const Rational& lo, const Rational& hi, std::int64_t den = 12) {
  const Rational steps = (hi - lo) * den;
  const auto top = static_cast<std::int64_t>(numerator(steps) / denominator(steps));
  return lo + Rational(uniform_int(rng, 0, top), den);
}

/// Uniform on {1/den, ..., den/den}.
inline Rational random_unit(Rng& rng, std::int64_t den = 8) { return Rational(uniform_int(rng, 1, den), den); }

/// Full-support exchangeable distribution with integer multiset weights in
/// 1..max_weight, normalized.
inline JointDist random_exchangeable(Rng& rng, std::size_t n, std::size_t players, std::int64_t max_weight = 9) {
  JointDist::MassMap m;
  Rational total = 0;
  detail::for_each_multiset(n, players, [&](const Profile& p) {
    Rational w(uniform_int(rng, 1, max_weight));
    m[p] = w;
    total += w;
  });
  for (auto& [p, x] : m) x /= total;
  return JointDist(SignalSpace::integers(n), players, std::move(m));
}

/// Moves mass between multisets that trade one element, M1 = A+{x},
/// M2 = B+{y} to A+{y}, B+{x}. Each move preserves every marginal; the
/// moved amount is below the smaller source mass, so support stays full.
inline JointDist random_swaps(Rng& rng, const JointDist& g, std::size_t moves) {
  const std::size_t n = g.signals(), players = g.players();
  if (n < 2) return g;
  std::vector<Profile> keys;
  detail::for_each_multiset(n, players, [&](const Profile& p) { keys.push_back(p); });
  JointDist::MassMap m;
  for (const auto& k : keys) m[k] = g.mass(k);
  for (std::size_t i = 0; i < moves; ++i) {
    Profile m1 = keys[uniform_int(rng, 0, keys.size() - 1)];
    Profile m2 = keys[uniform_int(rng, 0, keys.size() - 1)];
    const std::size_t ix = uniform_int(rng, 0, players - 1), iy = uniform_int(rng, 0, players - 1);
    if (m1[ix] == m2[iy]) continue;
    Profile d1 = m1, d2 = m2;
    std::swap(d1[ix], d2[iy]);
    std::sort(d1.begin(), d1.end());
    std::sort(d2.begin(), d2.end());
    const Rational room = (m1 == m2 ? m[m1] / 2 : std::min(m[m1], m[m2]));
    const Rational amt = room * random_unit(rng, 8) * Rational(7, 8);
    m[m1] -= amt;
    m[m2] -= amt;
    m[d1] += amt;
    m[d2] += amt;
  }
  return JointDist(g.space(), players, std::move(m));
}

/// Marginal-preserving random pair (F, G), usually not comparable.
inline std::pair<JointDist, JointDist> random_pair(Rng& rng, std::size_t n, std::size_t players) {
  JointDist g = random_exchangeable(rng, n, players);
  JointDist f = random_swaps(rng, g, 1 + uniform_int(rng, 0, 3));
  return {std::move(f), std::move(g)};
}

/// Pair with check_cad(F, G) failing, by rejection.
inline std::optional<std::pair<JointDist, JointDist>> random_non_cad_pair(Rng& rng, std::size_t n, std::size_t players,
                                                                          std::size_t max_tries = 200) {
  for (std::size_t i = 0; i < max_tries; ++i) {
    auto pr = random_pair(rng, n, players);
    if (!check_cad(pr.first, pr.second).holds) return pr;
  }
  return std::nullopt;
}

/// Affine coordination (beta >= 0) or congestion (beta <= 0) game with
/// alpha in [-2, 2], |beta| in [0, 2], k in (0, 2], l in [-1, 1].
inline PrivateValueGame random_affine_game(Rng& rng, const SignalSpace& sp, std::size_t players, bool congestion = false) {
  const std::size_t n = sp.size();
  std::vector<Rational> alpha(n), beta(n);
  for (auto& a : alpha) a = random_rational(rng, -2, 2);
  for (auto& b : beta) b = (congestion ? -1 : 1) * random_rational(rng, 0, 2);
  const Rational k = random_rational(rng, Rational(1, 12), 2);
  const Rational l = random_rational(rng, -1, 1);
  return PrivateValueGame(sp, players, alpha, beta, Affine{k, l});
}

/// Nondecreasing table h(0..N-1), strictly increasing somewhere.
inline Table random_table(Rng& rng, std::size_t players) {
  Table t;
  Rational v = random_rational(rng, -1, 1);
  for (std::size_t a = 0; a < players; ++a) {
    if (a > 0) v += random_rational(rng, 0, 1);
    t.values.push_back(v);
  }
  if (t.values.front() == t.values.back()) t.values.back() += 1;
  return t;
}

inline PrivateValueGame random_table_game(Rng& rng, const SignalSpace& sp, std::size_t players, bool congestion = false) {
  const std::size_t n = sp.size();
  std::vector<Rational> alpha(n), beta(n);
  for (auto& a : alpha) a = random_rational(rng, -2, 2);
  for (auto& b : beta) b = (congestion ? -1 : 1) * random_rational(rng, 0, 2);
  return PrivateValueGame(sp, players, alpha, beta, random_table(rng, players));
}

inline CommonValueGame random_common_game(Rng& rng, std::size_t states, std::size_t players) {
  std::vector<Rational> alpha(states), beta(states);
  for (auto& a : alpha) a = random_rational(rng, -2, 2);
  for (auto& b : beta) b = random_rational(rng, 0, 2);
  return CommonValueGame(players, alpha, beta,
                         Affine{random_rational(rng, Rational(1, 12), 2), random_rational(rng, -1, 1)});
}

inline std::vector<Posterior> posteriors(const StateFamily& fam) {
  std::vector<Posterior> out;
  for (std::size_t s = 0; s < fam.signals(); ++s) out.push_back(posterior(fam, s));
  return out;
}

/// Family with `states` states whose signal posteriors are affinely
/// independent (needs states >= n). Retries until the rank check passes.
inline StateFamily random_family(Rng& rng, std::size_t n, std::size_t states, std::size_t players,
                                 std::size_t max_tries = 100) {
  if (states < n) throw std::invalid_argument("affinely independent posteriors need at least n states");
  for (std::size_t i = 0; i < max_tries; ++i) {
    std::vector<State> st;
    std::vector<Rational> prior;
    Rational total = 0;
    std::vector<JointDist> per;
    for (std::size_t t = 0; t < states; ++t) {
      st.push_back({"t" + std::to_string(t), Rational(static_cast<std::int64_t>(t))});
      prior.emplace_back(uniform_int(rng, 1, 6));
      total += prior.back();
      per.push_back(random_exchangeable(rng, n, players));
    }
    for (auto& p : prior) p /= total;
    StateFamily fam(std::move(st), std::move(prior), std::move(per));
    if (affinely_independent(posteriors(fam)).independent) return fam;
  }
  throw std::runtime_error("no affinely independent family found");
}

/// Applies diagonal_mixture(., t) to every state.
inline StateFamily mix_states(const StateFamily& fam, const Rational& t) {
  std::vector<JointDist> per;
  for (const auto& d : fam.per_state()) per.push_back(diagonal_mixture(d, t));
  return StateFamily(fam.states(), fam.prior(), std::move(per));
}

/// Random feasible ETI sequence from g (N = 2). Each step takes a fraction
/// of the current off-diagonal mass of its cell.
inline std::vector<EtiStep> random_eti_steps(Rng& rng, const JointDist& g, std::size_t count) {
  const std::size_t n = g.signals();
  std::vector<EtiStep> steps;
  if (n < 2) return steps;
  JointDist d = g;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t s = uniform_int(rng, 0, n - 2);
    std::size_t s2 = uniform_int(rng, s + 1, n - 1);
    const Rational cell = d.ordered_mass({static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(s2)});
    EtiStep e{s, s2, cell * random_unit(rng, 8)};
    d = apply_eti(d, e.s, e.s2, e.a);
    steps.push_back(e);
  }
  return steps;
}

/// N = 3 binary pair with identical pairwise conditionals but different
/// count distributions: F = G + t (-1/3, 1, -1, 1/3) over the multisets
/// {000, 001, 011, 111}. CAD holds both ways; sCAD fails for F over G.
inline std::pair<JointDist, JointDist> cad_not_scad_pair(Rng& rng) {
  JointDist g = random_exchangeable(rng, 2, 3);
  const std::vector<Profile> keys{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  const std::vector<Rational> dir{frac(-1, 3), 1, -1, frac(1, 3)};
  // Largest t keeping 000 and 011 nonnegative, scaled strictly inside.
  const Rational tmax = std::min(3 * g.mass(keys[0]), g.mass(keys[2]));
  const Rational t = tmax * random_unit(rng, 8) * Rational(7, 8);
  JointDist::MassMap m;
  for (std::size_t i = 0; i < keys.size(); ++i) m[keys[i]] = g.mass(keys[i]) + t * dir[i];
  return {JointDist(g.space(), 3, std::move(m)), g};
}

}  // namespace simil
