#pragma once

// Witness games: given an order violation between F and G, build a game and
// a strategy that is an equilibrium under G but not under F, so that
// equilibrium-set inclusion (and a participation bound) fails.
//
// Builders only read G-side quantities and the violation; verify_witness
// recomputes everything from the two distributions.

#include "simil/games.hpp"
#include "simil/linear.hpp"
#include "simil/orders.hpp"

#include <string>
#include <variant>
#include <vector>

namespace simil {

/// The violation exists but the construction has a zero denominator.
class DegenerateViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class WitnessFamily { PrivateMax, PrivateMin, Common, Separable, SCAD, Congestion };

inline std::string family_name(WitnessFamily f) {
  switch (f) {
    case WitnessFamily::PrivateMax: return "private-max";
    case WitnessFamily::PrivateMin: return "private-min";
    case WitnessFamily::Common: return "common";
    case WitnessFamily::Separable: return "separable";
    case WitnessFamily::SCAD: return "scad";
    case WitnessFamily::Congestion: return "congestion";
  }
  return "?";
}

/// MaxParticipationRises is used by congestion witnesses, where the
/// strategy is an equilibrium under F and fails under G.
enum class WitnessDirection { MaxParticipationDrops, MinParticipationRises, MaxParticipationRises };

inline std::string direction_name(WitnessDirection d) {
  switch (d) {
    case WitnessDirection::MaxParticipationDrops: return "max-participation-drops";
    case WitnessDirection::MinParticipationRises: return "min-participation-rises";
    case WitnessDirection::MaxParticipationRises: return "max-participation-rises";
  }
  return "?";
}

struct WitnessPackage {
  WitnessFamily family = WitnessFamily::PrivateMax;
  std::variant<PrivateValueGame, CommonValueGame> game;
  std::variant<Strategy, CutoffStrategy> strategy;
  WitnessDirection direction = WitnessDirection::MaxParticipationDrops;
  std::size_t pivot = 0;
  // Certification: net payoff at the pivot and the participation bound
  // (maxP/minP or eqmaxp/eqminp) under each distribution.
  Rational pivot_g, pivot_f;
  Rational bound_g, bound_f;

  bool is_private() const { return std::holds_alternative<PrivateValueGame>(game); }
  SignalSet participation(std::size_t n) const {
    if (auto s = std::get_if<Strategy>(&strategy)) return s->participation;
    return std::get<CutoffStrategy>(strategy).participation(n);
  }
};

struct WitnessCheck {
  bool ok = true;
  std::vector<std::string> failures;
  Rational pivot_g, pivot_f, bound_g, bound_f;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
};

namespace detail {

inline void check_set_violation(const JointDist& g, const SetViolation& v) {
  const std::size_t n = g.signals();
  if (!v.k.contains(v.s)) throw std::invalid_argument("violation set must contain its signal");
  if (v.k == SignalSet::all(n)) throw std::invalid_argument("K = S is never a violation");
  if (!(v.lhs < v.rhs)) throw std::invalid_argument("violation values are not a strict reverse inequality");
  if (g.cond_prob(v.s, v.k) != v.rhs) throw std::invalid_argument("violation does not match G");
}

inline std::vector<Rational> filled(std::size_t n, const Rational& x) { return std::vector<Rational>(n, x); }

}  // namespace detail

/// sigma = 1_K; alpha = -2 off K, -G_{s*}(K) at s*, 1 on the rest of K;
/// beta = 1/(N-1); h(A) = A.
inline WitnessPackage witness_private_max(const JointDist& g, const SetViolation& v) {
  detail::check_set_violation(g, v);
  const std::size_t n = g.signals(), players = g.players();
  std::vector<Rational> alpha(n);
  for (std::size_t s = 0; s < n; ++s) alpha[s] = !v.k.contains(s) ? Rational(-2) : s == v.s ? Rational(-v.rhs) : Rational(1);
  WitnessPackage p;
  p.family = WitnessFamily::PrivateMax;
  p.game = PrivateValueGame(g.space(), players, alpha, detail::filled(n, Rational(1, players - 1)), identity_aggregator());
  p.strategy = Strategy{v.k};
  p.direction = WitnessDirection::MaxParticipationDrops;
  p.pivot = v.s;
  p.pivot_g = 0;
  p.pivot_f = v.lhs - v.rhs;
  p.bound_g = g.prob(v.k);
  return p;
}

/// sigma = 1_{K^c}; alpha = 1 on K^c, -G_{s*}(K^c) at s*, -2 on the rest of K.
inline WitnessPackage witness_private_min(const JointDist& g, const SetViolation& v) {
  detail::check_set_violation(g, v);
  const std::size_t n = g.signals(), players = g.players();
  const SignalSet kc = v.k.complement(n);
  const Rational gkc = 1 - v.rhs;
  std::vector<Rational> alpha(n);
  for (std::size_t s = 0; s < n; ++s) alpha[s] = kc.contains(s) ? Rational(1) : s == v.s ? Rational(-gkc) : Rational(-2);
  WitnessPackage p;
  p.family = WitnessFamily::PrivateMin;
  p.game = PrivateValueGame(g.space(), players, alpha, detail::filled(n, Rational(1, players - 1)), identity_aggregator());
  p.strategy = Strategy{kc};
  p.direction = WitnessDirection::MinParticipationRises;
  p.pivot = v.s;
  p.pivot_g = 0;
  p.pivot_f = (1 - v.lhs) - gkc;
  p.bound_g = g.prob(kc);
  return p;
}

/// h = 1{A >= m}; alpha = -1; beta = 0 off K and 1/Prob_G(C(K) >= m | s) on K.
inline WitnessPackage witness_scad(const JointDist& g, const CountViolation& v) {
  const std::size_t n = g.signals(), players = g.players();
  if (!v.k.contains(v.s)) throw std::invalid_argument("violation set must contain its signal");
  if (v.m == 0 || v.m >= players) throw std::invalid_argument("count threshold must lie in 1..N-1");
  if (!(v.lhs < v.rhs)) throw std::invalid_argument("violation values are not a strict reverse inequality");
  if (g.count_at_least(v.s, v.k, v.m) != v.rhs) throw std::invalid_argument("violation does not match G");
  std::vector<Rational> beta(n, Rational(0));
  for (auto s : v.k.indices()) {
    const Rational tail = s == v.s ? v.rhs : g.count_at_least(s, v.k, v.m);
    if (tail == 0)
      throw DegenerateViolation("Prob_G(C(K) >= " + std::to_string(v.m) + " | " + g.space().label(s) + ") = 0");
    beta[s] = 1 / tail;
  }
  WitnessPackage p;
  p.family = WitnessFamily::SCAD;
  p.game = PrivateValueGame(g.space(), players, detail::filled(n, Rational(-1)), beta, threshold_aggregator(players, v.m));
  p.strategy = Strategy{v.k};
  p.direction = WitnessDirection::MaxParticipationDrops;
  p.pivot = v.s;
  p.pivot_g = 0;
  p.pivot_f = v.lhs / v.rhs - 1;
  p.bound_g = g.prob(v.k);
  return p;
}

/// Congestion: alpha = 1 on K, -1 off K; beta = 0 off K and
/// -1/E_F[A | s] on K (0 where that expectation vanishes away from s*).
/// sigma = 1_K is an equilibrium under F and fails under G.
inline WitnessPackage witness_congestion(const JointDist& f, const SetViolation& v) {
  const std::size_t n = f.signals(), players = f.players();
  if (!v.k.contains(v.s)) throw std::invalid_argument("violation set must contain its signal");
  if (!(v.lhs < v.rhs)) throw std::invalid_argument("violation values are not a strict reverse inequality");
  if (f.cond_prob(v.s, v.k) != v.lhs) throw std::invalid_argument("violation does not match F");
  std::vector<Rational> alpha(n), beta(n, Rational(0));
  for (std::size_t s = 0; s < n; ++s) alpha[s] = v.k.contains(s) ? 1 : -1;
  for (auto s : v.k.indices()) {
    const Rational e = (players - 1) * (s == v.s ? v.lhs : f.cond_prob(s, v.k));
    if (e == 0) {
      if (s == v.s) throw DegenerateViolation("E_F[A | s*] = 0");
      continue;
    }
    beta[s] = -1 / e;
  }
  WitnessPackage p;
  p.family = WitnessFamily::Congestion;
  p.game = PrivateValueGame(f.space(), players, alpha, beta, identity_aggregator());
  p.strategy = Strategy{v.k};
  p.direction = WitnessDirection::MaxParticipationRises;
  p.pivot = v.s;
  p.pivot_f = 0;
  p.pivot_g = 1 - v.rhs / v.lhs;
  p.bound_f = f.prob(v.k);
  return p;
}

namespace detail {

inline Rational expect(const Posterior& mu, const Vec& a) { return detail::dot(mu, a); }

struct CutoffSetup {
  std::vector<std::size_t> a_idx, b_idx;
  SignalSet participation;
  std::size_t cutoff = 1;  // 1-based
  std::vector<Posterior> mu;
  SeparatingFunctional sep;
};

/// Partitions from the contour violation and the separating functional.
inline CutoffSetup cutoff_setup(const StateFamily& gfam, std::size_t st, std::size_t shat, Direction dir) {
  const std::size_t n = gfam.signals();
  CutoffSetup c;
  for (std::size_t s = 0; s < n; ++s) c.mu.push_back(posterior(gfam, s));
  if (dir == Direction::Up) {
    if (shat > st) throw std::invalid_argument("up-contour violation needs shat <= s");
    for (std::size_t s = 0; s < n; ++s) {
      if (s < shat) c.a_idx.push_back(s);
      else if (s != st) c.b_idx.push_back(s);
    }
    c.participation = SignalSet::upper(shat, n);
    c.cutoff = shat + 1;
  } else {
    if (shat < st) throw std::invalid_argument("down-contour violation needs shat >= s");
    for (std::size_t s = 0; s < n; ++s) {
      if (s <= shat) {
        if (s != st) c.a_idx.push_back(s);
      } else {
        c.b_idx.push_back(s);
      }
    }
    c.participation = shat + 1 < n ? SignalSet::upper(shat + 1, n) : SignalSet();
    c.cutoff = shat + 2;
  }
  std::vector<Vec> a, b;
  for (auto s : c.a_idx) a.push_back(c.mu[s]);
  for (auto s : c.b_idx) b.push_back(c.mu[s]);
  c.sep = separating_functional(a, c.mu[st], b);
  return c;
}

/// Largest k keeping intercept + slope*k > 0 over all constraints; nullopt
/// when unbounded.
inline std::optional<Rational> k_limit(const std::vector<std::pair<Rational, Rational>>& constraints) {
  std::optional<Rational> lim;
  for (const auto& [icpt, slope] : constraints) {
    if (slope >= 0) continue;
    Rational k = icpt / -slope;
    if (!lim || k < *lim) lim = k;
  }
  return lim;
}

}  // namespace detail

/// Common-value witness for a per-state contour violation at theta*.
/// beta(theta) = k/(N-1) 1{theta = theta*}, alpha = separating functional
/// shifted so the pivot is exactly indifferent, h(A) = A.
inline WitnessPackage witness_common(const StateFamily& gfam, const StateViolation& sv) {
  const auto* cv = std::get_if<ContourViolation>(&sv.inner);
  if (!cv) throw std::invalid_argument("common witness needs a contour violation");
  if (sv.theta >= gfam.size()) throw std::invalid_argument("state index out of range");
  if (!(cv->lhs < cv->rhs)) throw std::invalid_argument("violation values are not a strict reverse inequality");
  const std::size_t n = gfam.signals(), players = gfam.players(), th = sv.theta;
  const std::size_t st = cv->s;
  if (gfam.at(th).cond_prob(st, cv->set(n)) != cv->rhs) throw std::invalid_argument("violation does not match G");
  auto c = detail::cutoff_setup(gfam, st, cv->shat, cv->dir);
  const Vec& lam = c.sep.coeffs;

  // l(G, s) = mu(s)(theta*) G^{theta*}_s(P), with P the participation set.
  std::vector<Rational> l(n);
  for (std::size_t s = 0; s < n; ++s) l[s] = c.mu[s][th] * gfam.at(th).cond_prob(s, c.participation);
  const Rational ex = detail::expect(c.mu[st], lam);

  std::vector<std::pair<Rational, Rational>> cons;
  if (cv->dir == Direction::Up) {
    // Delta1(k) = (E_x + k l(x)) - (max_A E + k); Delta2 per element of B.
    if (!c.a_idx.empty()) cons.emplace_back(ex - c.sep.max_a, l[st] - 1);
    for (auto s : c.b_idx) cons.emplace_back(detail::expect(c.mu[s], lam) - ex, l[s] - l[st]);
  } else {
    for (auto s : c.a_idx) cons.emplace_back(ex - detail::expect(c.mu[s], lam), l[st] - l[s]);
    if (!c.b_idx.empty()) cons.emplace_back(c.sep.min_b - ex, -l[st]);
  }
  const auto lim = detail::k_limit(cons);
  const Rational k = lim ? *lim / 2 : Rational(1);
  const Rational shift = -(ex + k * l[st]);

  std::vector<Rational> alpha(gfam.size()), beta(gfam.size(), Rational(0));
  for (std::size_t t = 0; t < gfam.size(); ++t) alpha[t] = lam[t] + shift;
  beta[th] = k / (players - 1);

  WitnessPackage p;
  p.family = WitnessFamily::Common;
  p.game = CommonValueGame(players, alpha, beta, identity_aggregator());
  p.strategy = CutoffStrategy{c.cutoff};
  p.direction =
      cv->dir == Direction::Up ? WitnessDirection::MaxParticipationDrops : WitnessDirection::MinParticipationRises;
  p.pivot = st;
  p.pivot_g = 0;
  p.pivot_f = k * c.mu[st][th] * (cv->dir == Direction::Up ? cv->lhs - cv->rhs : cv->rhs - cv->lhs);
  Rational mass = 0;
  for (auto s : c.participation.indices()) mass += gfam.signal_weight(s);
  p.bound_g = mass;
  return p;
}

/// Separable witness (constant beta) for a contour violation between the
/// prior mixtures. alpha = c lambda + b with beta = 1/(N-1), h(A) = A, so
/// the interim payoff is E_s[alpha] + G_s(P). The scale c is chosen so that
/// the signals outside the pivot keep strict incentives for every
/// conditional value in [0, 1], which also rules out larger (Up) or smaller
/// (Down) cutoff equilibria under F.
inline WitnessPackage witness_separable(const StateFamily& gfam, const ContourViolation& cv) {
  if (!(cv.lhs < cv.rhs)) throw std::invalid_argument("violation values are not a strict reverse inequality");
  const std::size_t n = gfam.signals(), players = gfam.players();
  const JointDist gmix = mix_family(gfam);
  const std::size_t st = cv.s;
  if (gmix.cond_prob(st, cv.set(n)) != cv.rhs) throw std::invalid_argument("violation does not match G");
  auto c = detail::cutoff_setup(gfam, st, cv.shat, cv.dir);
  const Vec& lam = c.sep.coeffs;
  const Rational ex = detail::expect(c.mu[st], lam);
  const Rational gx = gmix.cond_prob(st, c.participation);

  Rational bound = 0;
  auto raise = [&](const Rational& b) {
    if (b > bound) bound = b;
  };
  // A: E_s alpha + 1 < 0 needs c (ex - E_s lambda) > 1 - G_x(P).
  for (auto s : c.a_idx) raise((1 - gx) / (ex - detail::expect(c.mu[s], lam)));
  // B: E_s alpha + 0 > 0 needs c (E_s lambda - ex) > G_x(P).
  for (auto s : c.b_idx) raise(gx / (detail::expect(c.mu[s], lam) - ex));
  const Rational scale = bound >= 1 ? Rational(2 * bound) : Rational(1);
  const Rational b = -(scale * ex + gx);

  std::vector<Rational> alpha(gfam.size());
  for (std::size_t t = 0; t < gfam.size(); ++t) alpha[t] = scale * lam[t] + b;

  WitnessPackage p;
  p.family = WitnessFamily::Separable;
  p.game = CommonValueGame(players, alpha, detail::filled(gfam.size(), Rational(1, players - 1)), identity_aggregator());
  p.strategy = CutoffStrategy{c.cutoff};
  p.direction =
      cv.dir == Direction::Up ? WitnessDirection::MaxParticipationDrops : WitnessDirection::MinParticipationRises;
  p.pivot = st;
  p.pivot_g = 0;
  p.pivot_f = cv.dir == Direction::Up ? cv.lhs - cv.rhs : cv.rhs - cv.lhs;
  Rational mass = 0;
  for (auto s : c.participation.indices()) mass += gfam.signal_weight(s);
  p.bound_g = mass;
  return p;
}

/// Replays a private-value package against (F, G).
inline WitnessCheck verify_witness(const WitnessPackage& p, const JointDist& f, const JointDist& g) {
  WitnessCheck r;
  if (!p.is_private()) {
    r.require(false, "package holds a common-value game; verify it against state families");
    return r;
  }
  if (!std::holds_alternative<Strategy>(p.strategy)) {
    r.require(false, "private-value package needs a participation-set strategy");
    return r;
  }
  const auto& game = std::get<PrivateValueGame>(p.game);
  const Strategy sigma = std::get<Strategy>(p.strategy);
  const auto ef = enumerate_equilibria_private(game, f);
  const auto eg = enumerate_equilibria_private(game, g);
  r.pivot_f = net_payoff_private(game, f, sigma, p.pivot);
  r.pivot_g = net_payoff_private(game, g, sigma, p.pivot);
  r.require(r.pivot_f == p.pivot_f, "recorded pivot payoff under F does not match");
  r.require(r.pivot_g == p.pivot_g, "recorded pivot payoff under G does not match");
  auto stat = [&](const EquilibriumSet& e, bool max) { return !e.stats.nonempty ? Rational(0) : max ? e.stats.max_p : e.stats.min_p; };
  switch (p.direction) {
    case WitnessDirection::MaxParticipationDrops:
      r.require(r.pivot_g == 0, "pivot is not indifferent under G");
      r.require(eg.contains(sigma), "strategy is not an equilibrium under G");
      r.require(!ef.contains(sigma), "strategy is still an equilibrium under F");
      r.bound_g = stat(eg, true);
      r.bound_f = stat(ef, true);
      r.require(!ef.stats.nonempty || r.bound_f < r.bound_g, "maxP does not drop");
      r.require(eg.stats.nonempty && r.bound_g == g.prob(sigma.participation), "strategy is not the maximal equilibrium under G");
      break;
    case WitnessDirection::MinParticipationRises:
      r.require(r.pivot_g == 0, "pivot is not indifferent under G");
      r.require(eg.contains(sigma), "strategy is not an equilibrium under G");
      r.require(!ef.contains(sigma), "strategy is still an equilibrium under F");
      r.bound_g = stat(eg, false);
      r.bound_f = ef.stats.nonempty ? ef.stats.min_p : Rational(1);
      r.require(!ef.stats.nonempty || r.bound_f > r.bound_g, "minP does not rise");
      r.require(eg.stats.nonempty && r.bound_g == g.prob(sigma.participation), "strategy is not the minimal equilibrium under G");
      break;
    case WitnessDirection::MaxParticipationRises:
      r.require(r.pivot_f == 0, "pivot is not indifferent under F");
      r.require(ef.contains(sigma), "strategy is not an equilibrium under F");
      r.require(!eg.contains(sigma), "strategy is still an equilibrium under G");
      r.bound_f = stat(ef, true);
      r.bound_g = stat(eg, true);
      r.require(!eg.stats.nonempty || r.bound_g < r.bound_f, "maxP under G is not below maxP under F");
      break;
  }
  const bool gside = p.direction != WitnessDirection::MaxParticipationRises;
  r.require((gside ? r.bound_g == p.bound_g : r.bound_f == p.bound_f), "recorded participation bound does not match");
  return r;
}

/// Replays a common-value (or separable) package against two families.
inline WitnessCheck verify_witness(const WitnessPackage& p, const StateFamily& f, const StateFamily& g) {
  WitnessCheck r;
  if (p.is_private() || !std::holds_alternative<CutoffStrategy>(p.strategy)) {
    r.require(false, "package is not a common-value cutoff witness");
    return r;
  }
  const auto& game = std::get<CommonValueGame>(p.game);
  const auto cs = std::get<CutoffStrategy>(p.strategy);
  const std::size_t n = g.signals();
  const Strategy sigma{cs.participation(n)};
  if (p.family == WitnessFamily::Separable) r.require(game.separable(), "separable package has state-dependent beta");
  r.pivot_f = net_payoff_common(game, f, sigma, p.pivot);
  r.pivot_g = net_payoff_common(game, g, sigma, p.pivot);
  r.require(r.pivot_g == 0, "pivot is not indifferent under G");
  r.require(r.pivot_f == p.pivot_f, "recorded pivot payoff under F does not match");
  const auto ef = enumerate_cutoff_equilibria(game, f);
  const auto eg = enumerate_cutoff_equilibria(game, g);
  r.require(eg.contains(cs.cutoff), "cutoff strategy is not an equilibrium under G");
  r.require(!ef.contains(cs.cutoff), "cutoff strategy is still an equilibrium under F");
  Rational mass = 0;
  for (auto s : sigma.participation.indices()) mass += g.signal_weight(s);
  if (p.direction == WitnessDirection::MaxParticipationDrops) {
    r.bound_g = eg.eqmaxp;
    r.bound_f = ef.eqmaxp;
    r.require(r.bound_g == mass, "strategy is not the maximal cutoff equilibrium under G");
    r.require(r.bound_f < r.bound_g, "eqmaxp does not drop");
  } else {
    r.bound_g = eg.eqminp;
    r.bound_f = ef.eqminp;
    r.require(r.bound_g == mass, "strategy is not the minimal cutoff equilibrium under G");
    r.require(r.bound_f > r.bound_g, "eqminp does not rise");
  }
  r.require(r.bound_g == p.bound_g, "recorded participation bound does not match");
  return r;
}

}  // namespace simil
