#pragma once

// Similarity orders between joint distributions with equal marginals.
//
// Each checker returns the first violation in a fixed scan order, carrying
// the two exact values it compared (lhs from F, rhs from G). Conditions are
// weak inequalities, so a violation is always a strict reverse inequality.

#include "simil/joint_dist.hpp"
#include "simil/state_family.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace simil {

enum class Order { CAD, CCAD, ICAD, SCAD, CAD_STATEWISE, PQD2, CAD_NONEXCH };

inline std::string order_name(Order o) {
  switch (o) {
    case Order::CAD: return "cad";
    case Order::CCAD: return "ccad";
    case Order::ICAD: return "icad";
    case Order::SCAD: return "scad";
    case Order::CAD_STATEWISE: return "cad-statewise";
    case Order::PQD2: return "pqd";
    case Order::CAD_NONEXCH: return "cad-nonexch";
  }
  return "?";
}

enum class Direction { Up, Down };

inline std::string direction_name(Direction d) { return d == Direction::Up ? "up" : "down"; }

/// Marginal probability of s differs (player is 0 for exchangeable inputs).
struct MarginalMismatch {
  std::size_t s = 0;
  std::size_t player = 0;
  Rational lhs, rhs;
};

/// F_s({s2}) vs G_s({s2}). Diagonal (s == s2) fails when lhs < rhs,
/// off-diagonal fails when lhs > rhs.
struct PointViolation {
  std::size_t s = 0, s2 = 0;
  Rational lhs, rhs;
};

/// F_s(K) < G_s(K) with s in K.
struct SetViolation {
  std::size_t s = 0;
  SignalSet k;
  Rational lhs, rhs;
};

/// F_s(shat up) < G_s(shat up) with shat <= s, or the down analogue.
struct ContourViolation {
  std::size_t s = 0, shat = 0;
  Direction dir = Direction::Up;
  Rational lhs, rhs;
  SignalSet set(std::size_t n) const {
    return dir == Direction::Up ? SignalSet::upper(shat, n) : SignalSet::lower(shat);
  }
};

/// Prob_F(C(K) >= m | s) < Prob_G(C(K) >= m | s).
struct CountViolation {
  std::size_t s = 0;
  SignalSet k;
  std::size_t m = 0;
  Rational lhs, rhs;
};

/// Prob_F(s1 <= x, s2 <= y) < Prob_G(s1 <= x, s2 <= y).
struct OrthantViolation {
  std::size_t x = 0, y = 0;
  Rational lhs, rhs;
};

using BaseViolation =
    std::variant<MarginalMismatch, PointViolation, SetViolation, ContourViolation, CountViolation, OrthantViolation>;

struct StateViolation {
  std::size_t theta = 0;
  BaseViolation inner;
};

struct PairViolation {
  std::size_t i = 0, j = 0;
  BaseViolation inner;
};

using Violation = std::variant<MarginalMismatch, PointViolation, SetViolation, ContourViolation, CountViolation,
                               OrthantViolation, StateViolation, PairViolation>;

struct OrderVerdict {
  Order order = Order::CAD;
  bool holds = true;
  std::optional<Violation> violation;
  /// CAD only: the violation restated as (s*, K) for the witness builders.
  std::optional<SetViolation> set_form;
  /// CAD_NONEXCH only: the players of the set form.
  std::optional<std::pair<std::size_t, std::size_t>> set_players;
};

inline std::string describe(const SignalSpace& sp, const BaseViolation& v) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MarginalMismatch>)
          return "MarginalMismatch(" + sp.label(x.s) + ")";
        else if constexpr (std::is_same_v<T, PointViolation>)
          return "Point(" + sp.label(x.s) + ", " + sp.label(x.s2) + ")";
        else if constexpr (std::is_same_v<T, SetViolation>)
          return "Set(" + sp.label(x.s) + ", " + sp.describe(x.k) + ")";
        else if constexpr (std::is_same_v<T, ContourViolation>)
          return "Contour(" + sp.label(x.s) + ", " + sp.label(x.shat) + ", " + direction_name(x.dir) + ")";
        else if constexpr (std::is_same_v<T, CountViolation>)
          return "Count(" + sp.label(x.s) + ", " + sp.describe(x.k) + ", " + std::to_string(x.m) + ")";
        else
          return "Orthant(" + sp.label(x.x) + ", " + sp.label(x.y) + ")";
      },
      v);
}

inline std::string describe(const SignalSpace& sp, const Violation& v) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, StateViolation>)
          return "State(" + std::to_string(x.theta) + ", " + describe(sp, x.inner) + ")";
        else if constexpr (std::is_same_v<T, PairViolation>)
          return "Pair(" + std::to_string(x.i) + ", " + std::to_string(x.j) + ", " + describe(sp, x.inner) + ")";
        else
          return describe(sp, BaseViolation(x));
      },
      v);
}

namespace detail {

template <typename D>
void require_compatible(const D& f, const D& g) {
  if (!(f.space() == g.space())) throw std::invalid_argument("distributions use different signal spaces");
  if (f.players() != g.players()) throw std::invalid_argument("distributions have different player counts");
}

inline std::optional<MarginalMismatch> marginal_mismatch(const JointDist& f, const JointDist& g) {
  for (std::size_t s = 0; s < f.signals(); ++s) {
    Rational a = f.marginal(s), b = g.marginal(s);
    if (a != b) return MarginalMismatch{s, 0, a, b};
  }
  return std::nullopt;
}

inline OrderVerdict fail(Order o, Violation v) {
  OrderVerdict out;
  out.order = o;
  out.holds = false;
  out.violation = std::move(v);
  return out;
}

inline OrderVerdict pass(Order o) {
  OrderVerdict out;
  out.order = o;
  return out;
}

/// Set form of a CAD point violation: {s} for a diagonal failure, the
/// complement of {s2} for an off-diagonal one.
inline SetViolation set_form_of(const PointViolation& p, std::size_t n) {
  if (p.s == p.s2) return SetViolation{p.s, SignalSet::single(p.s), p.lhs, p.rhs};
  return SetViolation{p.s, SignalSet::single(p.s2).complement(n), 1 - p.lhs, 1 - p.rhs};
}

/// Scan order shared by the exchangeable and per-pair CAD checks: every
/// diagonal condition first, then off-diagonal cells row by row.
template <typename Cond>
std::optional<PointViolation> scan_cad(std::size_t n, Cond&& cond) {
  for (std::size_t s = 0; s < n; ++s) {
    auto [a, b] = cond(s, s);
    if (a < b) return PointViolation{s, s, a, b};
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s) continue;
      auto [a, b] = cond(s, t);
      if (a > b) return PointViolation{s, t, a, b};
    }
  return std::nullopt;
}

}  // namespace detail

/// Concentration along the diagonal. O(n^2) conditional comparisons.
inline OrderVerdict check_cad(const JointDist& f, const JointDist& g) {
  detail::require_compatible(f, g);
  if (auto mm = detail::marginal_mismatch(f, g)) return detail::fail(Order::CAD, *mm);
  const std::size_t n = f.signals();
  auto v = detail::scan_cad(n, [&](std::size_t s, std::size_t t) {
    return std::pair{f.cond_prob(s, SignalSet::single(t)), g.cond_prob(s, SignalSet::single(t))};
  });
  if (!v) return detail::pass(Order::CAD);
  auto out = detail::fail(Order::CAD, *v);
  out.set_form = detail::set_form_of(*v, n);
  return out;
}

/// Contour-set version: upper contours of every shat <= s, lower contours of
/// every shat >= s.
inline OrderVerdict check_ccad(const JointDist& f, const JointDist& g) {
  detail::require_compatible(f, g);
  if (auto mm = detail::marginal_mismatch(f, g)) return detail::fail(Order::CCAD, *mm);
  const std::size_t n = f.signals();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t h = 0; h <= s; ++h) {
      const auto k = SignalSet::upper(h, n);
      Rational a = f.cond_prob(s, k), b = g.cond_prob(s, k);
      if (a < b) return detail::fail(Order::CCAD, ContourViolation{s, h, Direction::Up, a, b});
    }
    for (std::size_t h = s; h < n; ++h) {
      const auto k = SignalSet::lower(h);
      Rational a = f.cond_prob(s, k), b = g.cond_prob(s, k);
      if (a < b) return detail::fail(Order::CCAD, ContourViolation{s, h, Direction::Down, a, b});
    }
  }
  return detail::pass(Order::CCAD);
}

/// Interval version: every interval K containing s.
inline OrderVerdict check_icad(const JointDist& f, const JointDist& g) {
  detail::require_compatible(f, g);
  if (auto mm = detail::marginal_mismatch(f, g)) return detail::fail(Order::ICAD, *mm);
  const std::size_t n = f.signals();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t lo = 0; lo <= s; ++lo)
      for (std::size_t hi = s; hi < n; ++hi) {
        const auto k = SignalSet::interval(lo, hi);
        Rational a = f.cond_prob(s, k), b = g.cond_prob(s, k);
        if (a < b) return detail::fail(Order::ICAD, SetViolation{s, k, a, b});
      }
  return detail::pass(Order::ICAD);
}

/// Count-FOSD version: for every K containing s, the conditional count
/// C(K) under F first-order dominates the one under G.
inline OrderVerdict check_scad(const JointDist& f, const JointDist& g) {
  detail::require_compatible(f, g);
  if (auto mm = detail::marginal_mismatch(f, g)) return detail::fail(Order::SCAD, *mm);
  const std::size_t n = f.signals(), players = f.players();
  std::optional<CountViolation> found;
  for (std::size_t s = 0; s < n && !found; ++s) {
    for_each_set_containing(n, s, [&](SignalSet k) {
      if (found) return;
      const auto pf = f.count_pmf(s, k), pg = g.count_pmf(s, k);
      // Tails Prob(C >= m) for m = 1..N-1.
      Rational tf = 0, tg = 0;
      std::vector<Rational> tails_f(players), tails_g(players);
      for (std::size_t m = players; m-- > 1;) {
        tf += pf[m];
        tg += pg[m];
        tails_f[m] = tf;
        tails_g[m] = tg;
      }
      for (std::size_t m = 1; m < players; ++m)
        if (tails_f[m] < tails_g[m]) {
          found = CountViolation{s, k, m, tails_f[m], tails_g[m]};
          return;
        }
    });
  }
  if (found) return detail::fail(Order::SCAD, *found);
  return detail::pass(Order::SCAD);
}

/// Prob(s1 <= x, s2 <= y) for a two-player distribution.
inline Rational lower_orthant(const JointDist& d, std::size_t x, std::size_t y) {
  Rational t = 0;
  for (std::size_t a = 0; a <= x; ++a)
    for (std::size_t b = 0; b <= y; ++b) t += d.ordered_mass(Profile{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
  return t;
}

/// Positive quadrant dependence comparison for N = 2.
inline OrderVerdict check_pqd_2d(const JointDist& f, const JointDist& g) {
  detail::require_compatible(f, g);
  if (f.players() != 2) throw std::invalid_argument("PQD comparison requires two players");
  if (auto mm = detail::marginal_mismatch(f, g)) return detail::fail(Order::PQD2, *mm);
  const std::size_t n = f.signals();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Rational a = lower_orthant(f, x, y), b = lower_orthant(g, x, y);
      if (a < b) return detail::fail(Order::PQD2, OrthantViolation{x, y, a, b});
    }
  return detail::pass(Order::PQD2);
}

struct StatewiseReport {
  Order order = Order::CAD;
  std::vector<OrderVerdict> per_state;
  std::vector<std::size_t> differing;  // T: states where the joints differ
  bool holds = true;                   // holds on every state in T
  std::optional<StateViolation> violation;
};

/// Per-state comparison of two families sharing states, prior and
/// per-state marginals.
inline StatewiseReport check_cad_statewise(const StateFamily& ffam, const StateFamily& gfam, Order order) {
  if (order != Order::CAD && order != Order::CCAD)
    throw std::invalid_argument("statewise check supports cad and ccad only");
  if (ffam.states() != gfam.states()) throw std::invalid_argument("families have different states");
  if (ffam.prior() != gfam.prior()) throw std::invalid_argument("families have different priors");
  if (!(ffam.space() == gfam.space()) || ffam.players() != gfam.players())
    throw std::invalid_argument("families use different signal spaces or player counts");
  for (std::size_t t = 0; t < ffam.size(); ++t)
    if (ffam.at(t).marginal() != gfam.at(t).marginal())
      throw std::invalid_argument("per-state marginals differ at state '" + ffam.states()[t].label + "'");
  StatewiseReport r;
  r.order = order;
  for (std::size_t t = 0; t < ffam.size(); ++t) {
    auto v = order == Order::CAD ? check_cad(ffam.at(t), gfam.at(t)) : check_ccad(ffam.at(t), gfam.at(t));
    if (!(ffam.at(t) == gfam.at(t))) r.differing.push_back(t);
    if (!v.holds && r.holds) {
      r.holds = false;
      r.violation = StateViolation{t, std::visit([](const auto& x) -> BaseViolation {
                                     using T = std::decay_t<decltype(x)>;
                                     if constexpr (std::is_same_v<T, StateViolation> || std::is_same_v<T, PairViolation>)
                                       throw std::logic_error("nested violation");
                                     else
                                       return x;
                                   }, *v.violation)};
    }
    r.per_state.push_back(std::move(v));
  }
  return r;
}

/// CAD for distributions without symmetry: every player's marginal matches
/// and the diagonal/off-diagonal conditions hold for each ordered pair.
inline OrderVerdict check_cad_nonexch(const NonExchJointDist& f, const NonExchJointDist& g) {
  detail::require_compatible(f, g);
  const std::size_t n = f.signals(), players = f.players();
  for (std::size_t i = 0; i < players; ++i) {
    auto mf = f.marginal(i), mg = g.marginal(i);
    for (std::size_t s = 0; s < n; ++s)
      if (mf[s] != mg[s]) return detail::fail(Order::CAD_NONEXCH, MarginalMismatch{s, i, mf[s], mg[s]});
  }
  for (std::size_t i = 0; i < players; ++i)
    for (std::size_t j = 0; j < players; ++j) {
      if (i == j) continue;
      auto v = detail::scan_cad(n, [&](std::size_t s, std::size_t t) {
        return std::pair{f.cond_prob(i, j, s, SignalSet::single(t)), g.cond_prob(i, j, s, SignalSet::single(t))};
      });
      if (!v) continue;
      auto out = detail::fail(Order::CAD_NONEXCH, PairViolation{i, j, *v});
      out.set_form = detail::set_form_of(*v, n);
      out.set_players = std::pair{i, j};
      return out;
    }
  return detail::pass(Order::CAD_NONEXCH);
}

/// Recomputes the values a violation cites and confirms the strict
/// inequality. Returns false if the stored values or the inequality fail.
inline bool reverify(const JointDist& f, const JointDist& g, const BaseViolation& v) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MarginalMismatch>) {
          Rational a = f.marginal(x.s), b = g.marginal(x.s);
          return a == x.lhs && b == x.rhs && a != b;
        } else if constexpr (std::is_same_v<T, PointViolation>) {
          Rational a = f.cond_prob(x.s, SignalSet::single(x.s2)), b = g.cond_prob(x.s, SignalSet::single(x.s2));
          if (a != x.lhs || b != x.rhs) return false;
          return x.s == x.s2 ? a < b : a > b;
        } else if constexpr (std::is_same_v<T, SetViolation>) {
          if (!x.k.contains(x.s)) return false;
          Rational a = f.cond_prob(x.s, x.k), b = g.cond_prob(x.s, x.k);
          return a == x.lhs && b == x.rhs && a < b;
        } else if constexpr (std::is_same_v<T, ContourViolation>) {
          if (x.dir == Direction::Up ? x.shat > x.s : x.shat < x.s) return false;
          const auto k = x.set(f.signals());
          Rational a = f.cond_prob(x.s, k), b = g.cond_prob(x.s, k);
          return a == x.lhs && b == x.rhs && a < b;
        } else if constexpr (std::is_same_v<T, CountViolation>) {
          if (!x.k.contains(x.s) || x.m == 0 || x.m >= f.players()) return false;
          Rational a = f.count_at_least(x.s, x.k, x.m), b = g.count_at_least(x.s, x.k, x.m);
          return a == x.lhs && b == x.rhs && a < b;
        } else {
          Rational a = lower_orthant(f, x.x, x.y), b = lower_orthant(g, x.x, x.y);
          return a == x.lhs && b == x.rhs && a < b;
        }
      },
      v);
}

inline bool reverify(const StateFamily& ffam, const StateFamily& gfam, const StateViolation& v) {
  if (v.theta >= ffam.size() || v.theta >= gfam.size()) return false;
  return reverify(ffam.at(v.theta), gfam.at(v.theta), v.inner);
}

inline bool reverify(const NonExchJointDist& f, const NonExchJointDist& g, const PairViolation& v) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PointViolation>) {
          Rational a = f.cond_prob(v.i, v.j, x.s, SignalSet::single(x.s2));
          Rational b = g.cond_prob(v.i, v.j, x.s, SignalSet::single(x.s2));
          if (a != x.lhs || b != x.rhs) return false;
          return x.s == x.s2 ? a < b : a > b;
        } else if constexpr (std::is_same_v<T, SetViolation>) {
          Rational a = f.cond_prob(v.i, v.j, x.s, x.k), b = g.cond_prob(v.i, v.j, x.s, x.k);
          return x.k.contains(x.s) && a == x.lhs && b == x.rhs && a < b;
        } else {
          return false;
        }
      },
      v.inner);
}

}  // namespace simil
