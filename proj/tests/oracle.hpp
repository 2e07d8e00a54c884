#pragma once

// Brute-force reference computations. Everything here works on the full
// ordered-profile table, built by listing the distinct permutations of each
// stored multiset, and evaluates the defining formulas directly.

#include "simil/games.hpp"
#include "simil/state_family.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace oracle {

using simil::Profile;
using simil::Rational;
using simil::SignalSet;
using Table = std::map<Profile, Rational>;

inline Table expand(const simil::JointDist& d) {
  Table t;
  for (const auto& [key, m] : d.masses()) {
    Profile p = key;
    std::sort(p.begin(), p.end());
    std::vector<Profile> perms;
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    for (const auto& q : perms) t[q] += m / static_cast<long>(perms.size());
  }
  return t;
}

inline Table expand(const simil::NonExchJointDist& d) { return Table(d.masses().begin(), d.masses().end()); }

inline Rational total(const Table& t) {
  Rational s = 0;
  for (const auto& [p, m] : t) s += m;
  return s;
}

/// Marginal of player i.
inline std::vector<Rational> marginal(const Table& t, std::size_t n, std::size_t i = 0) {
  std::vector<Rational> out(n, Rational(0));
  for (const auto& [p, m] : t) out[p[i]] += m;
  return out;
}

/// Prob(s_j in K | s_i = s).
inline Rational cond(const Table& t, std::size_t s, SignalSet k, std::size_t i = 0, std::size_t j = 1) {
  Rational num = 0, den = 0;
  for (const auto& [p, m] : t)
    if (p[i] == s) {
      den += m;
      if (k.contains(p[j])) num += m;
    }
  return num / den;
}

/// Prob(C(K) = c | s_0 = s) for c = 0..N-1.
inline std::vector<Rational> count_pmf(const Table& t, std::size_t players, std::size_t s, SignalSet k) {
  std::vector<Rational> out(players, Rational(0));
  Rational den = 0;
  for (const auto& [p, m] : t)
    if (p[0] == s) {
      std::size_t c = 0;
      for (std::size_t j = 1; j < players; ++j) c += k.contains(p[j]);
      out[c] += m;
      den += m;
    }
  for (auto& x : out) x /= den;
  return out;
}

inline Rational tail(const std::vector<Rational>& pmf, std::size_t m) {
  Rational r = 0;
  for (std::size_t c = m; c < pmf.size(); ++c) r += pmf[c];
  return r;
}

inline bool same_marginals(const Table& f, const Table& g, std::size_t n) { return marginal(f, n) == marginal(g, n); }

// Orders, straight from their definitions.

inline bool cad(const simil::JointDist& fd, const simil::JointDist& gd) {
  const auto f = expand(fd), g = expand(gd);
  const std::size_t n = fd.signals();
  if (!same_marginals(f, g, n)) return false;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      const Rational a = cond(f, s, SignalSet::single(t)), b = cond(g, s, SignalSet::single(t));
      if (s == t ? a < b : a > b) return false;
    }
  return true;
}

inline bool ccad(const simil::JointDist& fd, const simil::JointDist& gd) {
  const auto f = expand(fd), g = expand(gd);
  const std::size_t n = fd.signals();
  if (!same_marginals(f, g, n)) return false;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t h = 0; h < n; ++h) {
      const SignalSet k = h <= s ? SignalSet::upper(h, n) : SignalSet::lower(h);
      if (cond(f, s, k) < cond(g, s, k)) return false;
      if (h == s && cond(f, s, SignalSet::lower(h)) < cond(g, s, SignalSet::lower(h))) return false;
    }
  return true;
}

inline bool icad(const simil::JointDist& fd, const simil::JointDist& gd) {
  const auto f = expand(fd), g = expand(gd);
  const std::size_t n = fd.signals();
  if (!same_marginals(f, g, n)) return false;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t lo = 0; lo <= s; ++lo)
      for (std::size_t hi = s; hi < n; ++hi) {
        const SignalSet k = SignalSet::interval(lo, hi);
        if (cond(f, s, k) < cond(g, s, k)) return false;
      }
  return true;
}

inline bool scad(const simil::JointDist& fd, const simil::JointDist& gd) {
  const auto f = expand(fd), g = expand(gd);
  const std::size_t n = fd.signals(), players = fd.players();
  if (!same_marginals(f, g, n)) return false;
  for (std::size_t s = 0; s < n; ++s)
    for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
      const SignalSet k(bits);
      if (!k.contains(s)) continue;
      const auto pf = count_pmf(f, players, s, k), pg = count_pmf(g, players, s, k);
      for (std::size_t m = 1; m < players; ++m)
        if (tail(pf, m) < tail(pg, m)) return false;
    }
  return true;
}

inline bool pqd(const simil::JointDist& fd, const simil::JointDist& gd) {
  const auto f = expand(fd), g = expand(gd);
  const std::size_t n = fd.signals();
  if (!same_marginals(f, g, n)) return false;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Rational a = 0, b = 0;
      for (const auto& [p, m] : f)
        if (p[0] <= x && p[1] <= y) a += m;
      for (const auto& [p, m] : g)
        if (p[0] <= x && p[1] <= y) b += m;
      if (a < b) return false;
    }
  return true;
}

// Games.

inline Rational h_at(const simil::Aggregator& h, std::size_t a) {
  return simil::eval_aggregator(h, Rational(static_cast<long>(a)));
}

/// E[d(A, s) | s] for player 0 by summing the ordered table.
inline Rational net_payoff(const simil::PrivateValueGame& g, const simil::JointDist& d, SignalSet p, std::size_t s) {
  const auto t = expand(d);
  Rational num = 0, den = 0;
  for (const auto& [prof, m] : t)
    if (prof[0] == s) {
      std::size_t a = 0;
      for (std::size_t j = 1; j < prof.size(); ++j) a += p.contains(prof[j]);
      num += m * h_at(g.h(), a);
      den += m;
    }
  return g.alpha()[s] + g.beta()[s] * num / den;
}

inline std::vector<SignalSet> equilibria(const simil::PrivateValueGame& g, const simil::JointDist& d) {
  std::vector<SignalSet> out;
  const std::size_t n = d.signals();
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    const SignalSet p(bits);
    bool ok = true;
    for (std::size_t s = 0; s < n && ok; ++s) {
      const Rational v = net_payoff(g, d, p, s);
      ok = p.contains(s) ? v >= 0 : v <= 0;
    }
    if (ok) out.push_back(p);
  }
  return out;
}

/// Bayes posterior from per-state ordered tables.
inline std::vector<Rational> posterior(const simil::StateFamily& fam, std::size_t s) {
  std::vector<Rational> w;
  Rational tot = 0;
  for (std::size_t t = 0; t < fam.size(); ++t) {
    const auto tab = expand(fam.at(t));
    w.push_back(fam.prior()[t] * marginal(tab, fam.signals())[s]);
    tot += w.back();
  }
  for (auto& x : w) x /= tot;
  return w;
}

inline Rational net_payoff_common(const simil::CommonValueGame& g, const simil::StateFamily& fam, SignalSet p,
                                  std::size_t s) {
  const auto mu = oracle::posterior(fam, s);
  Rational v = 0;
  for (std::size_t t = 0; t < fam.size(); ++t) {
    if (mu[t] == 0) continue;
    const auto tab = expand(fam.at(t));
    Rational num = 0, den = 0;
    for (const auto& [prof, m] : tab)
      if (prof[0] == s) {
        std::size_t a = 0;
        for (std::size_t j = 1; j < prof.size(); ++j) a += p.contains(prof[j]);
        num += m * h_at(g.h(), a);
        den += m;
      }
    v += mu[t] * (g.alpha()[t] + g.beta()[t] * num / den);
  }
  return v;
}

/// Cutoff indices c (1-based, n+1 = empty) that are equilibria.
inline std::vector<std::size_t> cutoffs(const simil::CommonValueGame& g, const simil::StateFamily& fam) {
  std::vector<std::size_t> out;
  const std::size_t n = fam.signals();
  for (std::size_t c = 1; c <= n + 1; ++c) {
    const SignalSet p = c <= n ? SignalSet::upper(c - 1, n) : SignalSet();
    bool ok = true;
    for (std::size_t s = 0; s < n && ok; ++s) {
      const Rational v = net_payoff_common(g, fam, p, s);
      ok = p.contains(s) ? v >= 0 : v <= 0;
    }
    if (ok) out.push_back(c);
  }
  return out;
}

}  // namespace oracle
