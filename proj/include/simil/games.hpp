#pragma once

// Binary-action games on signal distributions and their symmetric pure
// equilibria. Action 1 is "participate"; a symmetric strategy is its
// participation set P. The payoff difference is
//   private value:  alpha(s) + beta(s) h(A)
//   common value:   alpha(theta) + beta(theta) h(A)
// where A counts (or weights) the other players who participate.
// Equilibrium conditions are weak: payoff >= 0 on P and <= 0 off P.

#include "simil/joint_dist.hpp"
#include "simil/linear.hpp"
#include "simil/state_family.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace simil {

/// h(A) = k A + l with k > 0.
struct Affine {
  Rational k = 1, l = 0;
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// h(A) = values[A] for A = 0..N-1, nondecreasing and not constant.
struct Table {
  std::vector<Rational> values;
  friend bool operator==(const Table&, const Table&) = default;
};

using Aggregator = std::variant<Affine, Table>;

inline Aggregator identity_aggregator() { return Affine{1, 0}; }

/// 1{A >= m} on 0..N-1.
inline Aggregator threshold_aggregator(std::size_t players, std::size_t m) {
  Table t;
  for (std::size_t a = 0; a < players; ++a) t.values.emplace_back(a >= m ? 1 : 0);
  return t;
}

inline void validate_aggregator(const Aggregator& h, std::size_t players) {
  if (auto a = std::get_if<Affine>(&h)) {
    if (a->k <= 0) throw std::invalid_argument("affine aggregator needs k > 0");
    return;
  }
  const auto& v = std::get<Table>(h).values;
  if (v.size() != players)
    throw std::invalid_argument("table aggregator needs " + std::to_string(players) + " values (A = 0..N-1)");
  bool rises = false;
  for (std::size_t a = 1; a < v.size(); ++a) {
    if (v[a] < v[a - 1]) throw std::invalid_argument("table aggregator must be nondecreasing");
    rises = rises || v[a] > v[a - 1];
  }
  if (!rises) throw std::invalid_argument("table aggregator must increase somewhere");
}

inline Rational eval_aggregator(const Aggregator& h, const Rational& a) {
  if (auto af = std::get_if<Affine>(&h)) return af->k * a + af->l;
  const auto& v = std::get<Table>(h).values;
  if (denominator(a) != 1 || a < 0 || a >= static_cast<long long>(v.size()))
    throw std::domain_error("table aggregator evaluated at " + to_string(a));
  return v[static_cast<std::size_t>(numerator(a).convert_to<long long>())];
}

struct Strategy {
  SignalSet participation;
  friend bool operator==(const Strategy&, const Strategy&) = default;
  friend auto operator<=>(const Strategy&, const Strategy&) = default;
};

/// Participation on {s_c, ..., s_n} with 1-based c; c = n+1 is the empty set.
struct CutoffStrategy {
  std::size_t cutoff = 1;
  SignalSet participation(std::size_t n) const {
    return cutoff > n ? SignalSet() : SignalSet::upper(cutoff - 1, n);
  }
  bool is_empty(std::size_t n) const { return cutoff == n + 1; }
  friend bool operator==(const CutoffStrategy&, const CutoffStrategy&) = default;
};

enum class GameKind { Coordination, Congestion };

class PrivateValueGame {
 public:
  PrivateValueGame() = default;
  PrivateValueGame(SignalSpace space, std::size_t players, std::vector<Rational> alpha, std::vector<Rational> beta,
                   Aggregator h)
      : space_(std::move(space)), players_(players), alpha_(std::move(alpha)), beta_(std::move(beta)), h_(std::move(h)) {
    detail::check_players(players_);
    if (alpha_.size() != space_.size() || beta_.size() != space_.size())
      throw std::invalid_argument("alpha and beta need one value per signal");
    bool pos = false, neg = false;
    for (const auto& b : beta_) {
      pos = pos || b > 0;
      neg = neg || b < 0;
    }
    if (pos && neg) throw std::invalid_argument("beta must be single-signed");
    validate_aggregator(h_, players_);
  }

  const SignalSpace& space() const { return space_; }
  std::size_t players() const { return players_; }
  const std::vector<Rational>& alpha() const { return alpha_; }
  const std::vector<Rational>& beta() const { return beta_; }
  const Aggregator& h() const { return h_; }

  GameKind kind() const {
    for (const auto& b : beta_)
      if (b < 0) return GameKind::Congestion;
    return GameKind::Coordination;
  }

  /// d(A, s).
  Rational payoff(const Rational& a, std::size_t s) const { return alpha_[s] + beta_[s] * eval_aggregator(h_, a); }

  friend bool operator==(const PrivateValueGame&, const PrivateValueGame&) = default;

 private:
  SignalSpace space_;
  std::size_t players_ = 2;
  std::vector<Rational> alpha_, beta_;
  Aggregator h_ = identity_aggregator();
};

class CommonValueGame {
 public:
  CommonValueGame() = default;
  CommonValueGame(std::size_t players, std::vector<Rational> alpha, std::vector<Rational> beta, Aggregator h)
      : players_(players), alpha_(std::move(alpha)), beta_(std::move(beta)), h_(std::move(h)) {
    detail::check_players(players_);
    if (alpha_.empty() || alpha_.size() != beta_.size())
      throw std::invalid_argument("alpha and beta need one value per state");
    for (const auto& b : beta_)
      if (b < 0) throw std::invalid_argument("common-value games need beta >= 0");
    validate_aggregator(h_, players_);
  }

  std::size_t players() const { return players_; }
  std::size_t states() const { return alpha_.size(); }
  const std::vector<Rational>& alpha() const { return alpha_; }
  const std::vector<Rational>& beta() const { return beta_; }
  const Aggregator& h() const { return h_; }

  /// beta does not depend on the state.
  bool separable() const {
    for (const auto& b : beta_)
      if (b != beta_.front()) return false;
    return true;
  }

  Rational payoff(const Rational& a, std::size_t theta) const {
    return alpha_[theta] + beta_[theta] * eval_aggregator(h_, a);
  }

  friend bool operator==(const CommonValueGame&, const CommonValueGame&) = default;

 private:
  std::size_t players_ = 2;
  std::vector<Rational> alpha_, beta_;
  Aggregator h_ = identity_aggregator();
};

/// Pairs of signals (or states) whose payoff differences coincide for every
/// aggregate action. Empty means the payoff-relevance condition holds.
template <typename Game>
std::vector<std::pair<std::size_t, std::size_t>> payoff_irrelevant_pairs(const Game& g, std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < count; ++x)
    for (std::size_t y = x + 1; y < count; ++y) {
      bool differ = false;
      for (std::size_t a = 0; a < g.players() && !differ; ++a) differ = g.payoff(Rational(a), x) != g.payoff(Rational(a), y);
      if (!differ) out.emplace_back(x, y);
    }
  return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> payoff_irrelevant_pairs(const PrivateValueGame& g) {
  return payoff_irrelevant_pairs(g, g.space().size());
}

inline std::vector<std::pair<std::size_t, std::size_t>> payoff_irrelevant_pairs(const CommonValueGame& g) {
  return payoff_irrelevant_pairs(g, g.states());
}

namespace detail {

/// E[h(C(P)) | s] under one distribution.
inline Rational expected_h(const Aggregator& h, const JointDist& d, std::size_t s, SignalSet p) {
  if (auto af = std::get_if<Affine>(&h)) return af->k * (d.players() - 1) * d.cond_prob(s, p) + af->l;
  const auto pmf = d.count_pmf(s, p);
  const auto& v = std::get<Table>(h).values;
  Rational e = 0;
  for (std::size_t m = 0; m < pmf.size(); ++m) e += v[m] * pmf[m];
  return e;
}

inline void check_game_dist(const PrivateValueGame& g, const SignalSpace& space, std::size_t players) {
  if (!(g.space() == space)) throw std::invalid_argument("game and distribution use different signal spaces");
  if (g.players() != players) throw std::invalid_argument("game and distribution have different player counts");
}

}  // namespace detail

inline Rational net_payoff_private(const PrivateValueGame& g, const JointDist& d, const Strategy& sigma, std::size_t s) {
  detail::check_game_dist(g, d.space(), d.players());
  return g.alpha()[s] + g.beta()[s] * detail::expected_h(g.h(), d, s, sigma.participation);
}

struct SignalIC {
  std::size_t s = 0;
  bool participates = false;
  Rational value;
  bool ok = false;
};

struct ICReport {
  bool equilibrium = true;
  std::vector<SignalIC> signals;
};

inline bool ic_ok(bool participates, const Rational& v) { return participates ? v >= 0 : v <= 0; }

inline ICReport is_equilibrium_private(const PrivateValueGame& g, const JointDist& d, const Strategy& sigma) {
  ICReport r;
  for (std::size_t s = 0; s < d.signals(); ++s) {
    const bool in = sigma.participation.contains(s);
    Rational v = net_payoff_private(g, d, sigma, s);
    const bool ok = ic_ok(in, v);
    r.equilibrium = r.equilibrium && ok;
    r.signals.push_back({s, in, std::move(v), ok});
  }
  return r;
}

struct ParticipationStats {
  bool nonempty = false;
  Rational max_p, min_p;
  SignalSet argmax, argmin;
};

struct EquilibriumSet {
  std::vector<Strategy> equilibria;  // increasing bitmask order
  ParticipationStats stats;
  bool contains(const Strategy& s) const {
    for (const auto& e : equilibria)
      if (e == s) return true;
    return false;
  }
};

namespace detail {

inline void add_stat(ParticipationStats& st, const Rational& mass, SignalSet p) {
  if (!st.nonempty || mass > st.max_p) st.max_p = mass, st.argmax = p;
  if (!st.nonempty || mass < st.min_p) st.min_p = mass, st.argmin = p;
  st.nonempty = true;
}

}  // namespace detail

/// Exhaustive search over all 2^n participation sets.
inline EquilibriumSet enumerate_equilibria_private(const PrivateValueGame& g, const JointDist& d) {
  detail::check_game_dist(g, d.space(), d.players());
  const std::size_t n = d.signals();
  if (n > kMaxSignals) throw std::invalid_argument("signal space too large for enumeration");
  EquilibriumSet out;
  // For affine h the payoff is linear in P, so cache F_s({t}).
  std::vector<Vec> cond;
  const auto* af = std::get_if<Affine>(&g.h());
  if (af) {
    cond.assign(n, Vec(n));
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) cond[s][t] = d.cond_prob(s, SignalSet::single(t));
  }
  const MarginalDist marg = d.marginal();
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    const SignalSet p(bits);
    bool eq = true;
    for (std::size_t s = 0; s < n && eq; ++s) {
      Rational v;
      if (af) {
        Rational fp = 0;
        for (auto t : p.indices()) fp += cond[s][t];
        v = g.alpha()[s] + g.beta()[s] * (af->k * (d.players() - 1) * fp + af->l);
      } else {
        v = net_payoff_private(g, d, Strategy{p}, s);
      }
      eq = ic_ok(p.contains(s), v);
    }
    if (!eq) continue;
    out.equilibria.push_back(Strategy{p});
    Rational mass = 0;
    for (auto t : p.indices()) mass += marg[t];
    detail::add_stat(out.stats, mass, p);
  }
  return out;
}

// Common-value games.

inline Rational net_payoff_common(const CommonValueGame& g, const StateFamily& fam, const Strategy& sigma,
                                  std::size_t s) {
  if (g.states() != fam.size()) throw std::invalid_argument("game and family have different state counts");
  if (g.players() != fam.players()) throw std::invalid_argument("game and family have different player counts");
  const Posterior mu = posterior(fam, s);
  Rational total = 0;
  for (std::size_t t = 0; t < fam.size(); ++t) {
    if (mu[t] == 0) continue;
    Rational d = g.alpha()[t];
    if (g.beta()[t] != 0) d += g.beta()[t] * detail::expected_h(g.h(), fam.at(t), s, sigma.participation);
    total += mu[t] * d;
  }
  return total;
}

inline ICReport is_equilibrium_common(const CommonValueGame& g, const StateFamily& fam, const Strategy& sigma) {
  ICReport r;
  for (std::size_t s = 0; s < fam.signals(); ++s) {
    const bool in = sigma.participation.contains(s);
    Rational v = net_payoff_common(g, fam, sigma, s);
    const bool ok = ic_ok(in, v);
    r.equilibrium = r.equilibrium && ok;
    r.signals.push_back({s, in, std::move(v), ok});
  }
  return r;
}

struct CutoffSet {
  std::vector<CutoffStrategy> equilibria;  // includes c = n+1 when it passes
  bool empty_is_equilibrium = false;
  Rational eqmaxp = 0, eqminp = 1;  // over nonempty cutoff equilibria; 0 and 1 if none
  std::optional<CutoffStrategy> argmax, argmin;
  bool contains(std::size_t c) const {
    for (const auto& e : equilibria)
      if (e.cutoff == c) return true;
    return false;
  }
};

/// Checks every cutoff c = 1..n+1. Participation mass is taken under the
/// prior mixture, whose marginal is sum_theta mu0(theta) marg F^theta.
inline CutoffSet enumerate_cutoff_equilibria(const CommonValueGame& g, const StateFamily& fam) {
  const std::size_t n = fam.signals();
  CutoffSet out;
  bool any = false;
  for (std::size_t c = 1; c <= n + 1; ++c) {
    const CutoffStrategy cs{c};
    const SignalSet p = cs.participation(n);
    if (!is_equilibrium_common(g, fam, Strategy{p}).equilibrium) continue;
    out.equilibria.push_back(cs);
    if (cs.is_empty(n)) {
      out.empty_is_equilibrium = true;
      continue;
    }
    Rational mass = 0;
    for (auto t : p.indices()) mass += fam.signal_weight(t);
    if (!any || mass > out.eqmaxp) out.eqmaxp = mass, out.argmax = cs;
    if (!any || mass < out.eqminp) out.eqminp = mass, out.argmin = cs;
    any = true;
  }
  return out;
}

enum class Inclusion { Equal, FContainsG, GContainsF, Incomparable };

inline std::string inclusion_name(Inclusion i) {
  switch (i) {
    case Inclusion::Equal: return "equal";
    case Inclusion::FContainsG: return "superset";
    case Inclusion::GContainsF: return "subset";
    case Inclusion::Incomparable: return "incomparable";
  }
  return "?";
}

/// Relation of E(F) to E(G): "superset" means E(F) contains E(G).
struct InclusionReport {
  Inclusion relation = Inclusion::Equal;
  EquilibriumSet f, g;
};

template <typename Set>
Inclusion relate(const Set& fs, const Set& gs) {
  bool g_in_f = true, f_in_g = true;
  for (const auto& e : gs) g_in_f = g_in_f && std::find(fs.begin(), fs.end(), e) != fs.end();
  for (const auto& e : fs) f_in_g = f_in_g && std::find(gs.begin(), gs.end(), e) != gs.end();
  if (g_in_f && f_in_g) return Inclusion::Equal;
  if (g_in_f) return Inclusion::FContainsG;
  if (f_in_g) return Inclusion::GContainsF;
  return Inclusion::Incomparable;
}

inline InclusionReport compare_equilibrium_sets(const PrivateValueGame& g, const JointDist& f, const JointDist& gd) {
  InclusionReport r;
  r.f = enumerate_equilibria_private(g, f);
  r.g = enumerate_equilibria_private(g, gd);
  r.relation = relate(r.f.equilibria, r.g.equilibria);
  return r;
}

struct CutoffInclusionReport {
  Inclusion relation = Inclusion::Equal;
  CutoffSet f, g;
};

inline CutoffInclusionReport compare_cutoff_sets(const CommonValueGame& game, const StateFamily& f,
                                                 const StateFamily& g) {
  CutoffInclusionReport r;
  r.f = enumerate_cutoff_equilibria(game, f);
  r.g = enumerate_cutoff_equilibria(game, g);
  r.relation = relate(r.f.equilibria, r.g.equilibria);
  return r;
}

// Non-exchangeable distributions with weighted aggregates
// A_i = sum_{j != i} lambda_j 1{s_j in P}.

struct PlayerIC {
  std::size_t player = 0;
  SignalIC ic;
};

struct NonExchICReport {
  bool equilibrium = true;
  std::vector<PlayerIC> entries;
};

inline Rational net_payoff_nonexch(const PrivateValueGame& g, const std::vector<Rational>& lambda,
                                   const NonExchJointDist& d, const Strategy& sigma, std::size_t i, std::size_t s) {
  const SignalSet p = sigma.participation;
  if (auto af = std::get_if<Affine>(&g.h())) {
    Rational agg = 0;
    for (std::size_t j = 0; j < d.players(); ++j)
      if (j != i && lambda[j] != 0) agg += lambda[j] * d.cond_prob(i, j, s, p);
    // cond_prob above only runs when some weight is nonzero; force the
    // zero-marginal check regardless.
    d.cond_prob(i, i == 0 ? 1 : 0, s, p);
    return g.alpha()[s] + g.beta()[s] * (af->k * agg + af->l);
  }
  Rational total = 0, e = 0;
  for (const auto& [prof, m] : d.masses()) {
    if (prof[i] != s) continue;
    Rational a = 0;
    for (std::size_t j = 0; j < d.players(); ++j)
      if (j != i && p.contains(prof[j])) a += lambda[j];
    total += m;
    e += m * eval_aggregator(g.h(), a);
  }
  if (total == 0)
    throw ZeroProbabilityError("player " + std::to_string(i) + " conditioning on zero-probability signal");
  return g.alpha()[s] + g.beta()[s] * e / total;
}

inline NonExchICReport nonexch_is_equilibrium(const PrivateValueGame& g, const std::vector<Rational>& lambda,
                                              const NonExchJointDist& d, const Strategy& sigma) {
  detail::check_game_dist(g, d.space(), d.players());
  if (lambda.size() != d.players()) throw std::invalid_argument("need one weight per player");
  for (const auto& w : lambda)
    if (w < 0) throw std::invalid_argument("weights must be nonnegative");
  NonExchICReport r;
  for (std::size_t i = 0; i < d.players(); ++i)
    for (std::size_t s = 0; s < d.signals(); ++s) {
      const bool in = sigma.participation.contains(s);
      Rational v = net_payoff_nonexch(g, lambda, d, sigma, i, s);
      const bool ok = ic_ok(in, v);
      r.equilibrium = r.equilibrium && ok;
      r.entries.push_back({i, SignalIC{s, in, std::move(v), ok}});
    }
  return r;
}

}  // namespace simil
