#pragma once

// Second-price auction revenue for two bidders with truthful bids, and the
// decomposition of a CAD increase into elementary transformations on
// identical intervals (ETIs).

#include "simil/joint_dist.hpp"

#include <optional>
#include <vector>

namespace simil {

/// E[min(v1, v2)] using the numeric signal values.
inline Rational auction_revenue(const JointDist& d) {
  if (d.players() != 2) throw std::invalid_argument("auction revenue needs two bidders");
  Rational r = 0;
  for (const auto& [p, m] : d.masses()) r += m * d.space().value(p[0]);  // p is sorted, p[0] is the min
  return r;
}

struct EtiStep {
  std::size_t s = 0, s2 = 1;
  Rational a;
  friend bool operator==(const EtiStep&, const EtiStep&) = default;
};

/// Revenue change of one step: a (v(s2) - v(s)).
inline Rational eti_revenue_increment(const SignalSpace& sp, const EtiStep& e) {
  return e.a * (sp.value(e.s2) - sp.value(e.s));
}

struct EtiDecomposition {
  bool ok = false;
  std::vector<EtiStep> steps;
  // Failure certificate: an off-diagonal ordered cell where F exceeds G.
  std::optional<std::pair<std::size_t, std::size_t>> cell;
  Rational f_cell, g_cell;
};

inline JointDist apply_steps(JointDist d, const std::vector<EtiStep>& steps) {
  for (const auto& e : steps) d = apply_eti(d, e.s, e.s2, e.a);
  return d;
}

/// Net decomposition F = G + sum of ETIs, with a_{ss'} = G(s,s') - F(s,s')
/// on ordered cells. Succeeds iff no off-diagonal cell of F exceeds G's.
inline EtiDecomposition eti_decompose(const JointDist& f, const JointDist& g) {
  if (f.players() != 2 || g.players() != 2) throw std::invalid_argument("ETI decomposition needs two players");
  if (!(f.space() == g.space())) throw std::invalid_argument("distributions use different signal spaces");
  if (f.marginal() != g.marginal()) throw std::invalid_argument("marginals differ");
  EtiDecomposition out;
  const std::size_t n = f.signals();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      const Profile cell{static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(t)};
      const Rational fc = f.ordered_mass(cell), gc = g.ordered_mass(cell);
      if (fc > gc) {
        out.cell = std::pair{s, t};
        out.f_cell = fc;
        out.g_cell = gc;
        out.steps.clear();
        return out;
      }
      if (gc != fc) out.steps.push_back({s, t, gc - fc});
    }
  out.ok = true;
  return out;
}

/// Applies the steps one at a time and reports whether every intermediate
/// distribution is valid. For steps from eti_decompose this always holds:
/// off-diagonal cells only move from G's value to F's, and diagonal cells
/// only grow.
inline bool eti_prefix_valid(const JointDist& g, const std::vector<EtiStep>& steps) {
  JointDist d = g;
  for (const auto& e : steps) {
    try {
      d = apply_eti(d, e.s, e.s2, e.a);
    } catch (const InfeasibleError&) {
      return false;
    }
    if (!validate(d).passes()) return false;
  }
  return true;
}

}  // namespace simil
