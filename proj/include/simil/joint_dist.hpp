#pragma once

// Joint signal distributions over S^N with exact rational masses.
//
// Exchangeable distributions are stored canonically: one mass per sorted
// multiset of signals. An ordered profile receives mass(multiset) divided by
// the number of distinct orderings of that multiset, so permutation
// invariance holds by construction.
//
// Conditionals given s_i = s never expand ordered profiles. For a multiset M
// containing s with multiplicity c, a uniformly random ordering of M puts s
// at position i with probability c/N, and the other players then hold M - {s}.
// Every query is therefore one pass over the stored multisets, O(C(n+N-1, N))
// terms (at most 24310 for the n <= 10, N <= 8 bounds).

#include "simil/rational.hpp"
#include "simil/signals.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace simil {

/// Thrown when conditioning on a signal with zero marginal probability.
class ZeroProbabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a requested transformation would create negative mass.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using Profile = std::vector<std::uint8_t>;

/// Per-signal probabilities, indexed like the signal space.
using MarginalDist = std::vector<Rational>;

/// c[m] = Prob(C <= m | s_i = s) for m = 0..N-1.
using CountCDF = std::vector<Rational>;

namespace detail {

inline Integer factorial(std::size_t k) {
  Integer r = 1;
  for (std::size_t i = 2; i <= k; ++i) r *= i;
  return r;
}

/// Number of distinct orderings of a sorted multiset.
inline Integer orderings(const Profile& sorted) {
  Integer r = factorial(sorted.size());
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      r /= factorial(run);
      run = 1;
    }
  }
  return r;
}

inline std::size_t multiplicity(const Profile& p, std::size_t s) {
  return static_cast<std::size_t>(std::count(p.begin(), p.end(), static_cast<std::uint8_t>(s)));
}

inline std::size_t count_in(const Profile& p, SignalSet k) {
  std::size_t c = 0;
  for (auto x : p) c += k.contains(x) ? 1 : 0;
  return c;
}

inline void check_players(std::size_t players) {
  if (players < 2 || players > kMaxPlayers)
    throw std::invalid_argument("player count must be in [2, " + std::to_string(kMaxPlayers) + "]");
}

inline void check_profile(const Profile& p, std::size_t players, std::size_t n) {
  if (p.size() != players)
    throw std::invalid_argument("profile length " + std::to_string(p.size()) + " != players " +
                                std::to_string(players));
  for (auto x : p)
    if (x >= n) throw std::invalid_argument("profile refers to a signal outside the space");
}

/// Enumerates every ordered profile in S^N (lexicographic).
template <typename F>
void for_each_ordered_profile(std::size_t n, std::size_t players, F&& f) {
  Profile p(players, 0);
  while (true) {
    f(static_cast<const Profile&>(p));
    std::size_t k = players;
    while (k > 0) {
      --k;
      if (++p[k] < n) break;
      p[k] = 0;
      if (k == 0) return;
    }
  }
}

/// Enumerates sorted multisets of size N over {0..n-1}.
template <typename F>
void for_each_multiset(std::size_t n, std::size_t players, F&& f) {
  Profile p(players, 0);
  while (true) {
    f(static_cast<const Profile&>(p));
    std::size_t k = players;
    while (k > 0) {
      --k;
      if (p[k] + 1u < n) {
        ++p[k];
        for (std::size_t j = k + 1; j < players; ++j) p[j] = p[k];
        break;
      }
      if (k == 0) return;
    }
  }
}

inline std::string render(const SignalSpace& space, const Profile& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += space.label(p[i]);
  }
  return out + ")";
}

}  // namespace detail

/// Exchangeable joint distribution over S^N.
class JointDist {
 public:
  using MassMap = std::map<Profile, Rational>;

  JointDist() = default;

  /// `mass` is keyed by sorted multisets. Zero entries are dropped.
  JointDist(SignalSpace space, std::size_t players, MassMap mass)
      : space_(std::move(space)), players_(players) {
    detail::check_players(players_);
    for (auto& [profile, p] : mass) {
      detail::check_profile(profile, players_, space_.size());
      if (!std::is_sorted(profile.begin(), profile.end()))
        throw std::invalid_argument("exchangeable mass must be keyed by sorted profiles");
      if (p != 0) mass_.emplace(profile, std::move(p));
    }
  }

  /// Builds from masses on ordered profiles; throws unless the ordered
  /// masses are permutation invariant.
  static JointDist from_ordered(SignalSpace space, std::size_t players, const MassMap& ordered) {
    detail::check_players(players);
    MassMap sums;
    for (const auto& [profile, p] : ordered) {
      detail::check_profile(profile, players, space.size());
      Profile key = profile;
      std::sort(key.begin(), key.end());
      sums[key] += p;
    }
    JointDist out(std::move(space), players, sums);
    // Every ordering of a supported multiset must be listed with equal mass.
    for (const auto& [key, m] : out.mass_) {
      Profile q = key;
      const Rational each = out.ordered_mass(key);
      do {
        auto it = ordered.find(q);
        if (it == ordered.end() || it->second != each)
          throw std::invalid_argument("ordered masses are not exchangeable at " +
                                      detail::render(out.space_, q));
      } while (std::next_permutation(q.begin(), q.end()));
    }
    for (const auto& [key, m] : sums)
      if (m == 0 && out.mass_.count(key) == 0)
        for (const auto& [q, x] : ordered) {
          Profile s = q;
          std::sort(s.begin(), s.end());
          if (s == key && x != 0)
            throw std::invalid_argument("ordered masses are not exchangeable at " + detail::render(out.space_, q));
        }
    return out;
  }

  const SignalSpace& space() const { return space_; }
  std::size_t players() const { return players_; }
  std::size_t signals() const { return space_.size(); }
  const MassMap& masses() const { return mass_; }

  Rational mass(const Profile& sorted) const {
    auto it = mass_.find(sorted);
    return it == mass_.end() ? Rational(0) : it->second;
  }

  /// Mass of one ordered profile (any order of entries).
  Rational ordered_mass(Profile profile) const {
    detail::check_profile(profile, players_, space_.size());
    std::sort(profile.begin(), profile.end());
    const Rational m = mass(profile);
    if (m == 0) return m;
    return m / Rational(detail::orderings(profile));
  }

  /// Calls f(ordered_profile, mass) for every ordered profile with nonzero mass.
  template <typename F>
  void for_each_ordered(F&& f) const {
    detail::for_each_ordered_profile(space_.size(), players_, [&](const Profile& p) {
      Rational m = ordered_mass(p);
      if (m != 0) f(p, m);
    });
  }

  Rational total_mass() const {
    Rational t = 0;
    for (const auto& [p, m] : mass_) t += m;
    return t;
  }

  /// Marginal probability that a given player holds signal s.
  Rational marginal(std::size_t s) const {
    Rational t = 0;
    for (const auto& [p, m] : mass_) {
      const auto c = detail::multiplicity(p, s);
      if (c) t += m * c;
    }
    return t / players_;
  }

  MarginalDist marginal() const {
    MarginalDist out(space_.size());
    for (std::size_t s = 0; s < space_.size(); ++s) out[s] = marginal(s);
    return out;
  }

  /// Marginal of player `index`; identical for every index.
  MarginalDist marginal_of(std::size_t index) const {
    if (index >= players_) throw std::out_of_range("player index out of range");
    return marginal();
  }

  /// Prob(s_j in K | s_i = s) for any j != i.
  Rational cond_prob(std::size_t s, SignalSet k) const {
    Rational joint = 0;
    Rational total = 0;
    const std::size_t own = k.contains(s) ? 1 : 0;
    for (const auto& [p, m] : mass_) {
      const auto c = detail::multiplicity(p, s);
      if (!c) continue;
      // Each ordering with s at position i leaves N-1 others; a fixed other
      // player j is in K with probability (|M cap K| - [s in K]) / (N-1).
      total += m * c;
      joint += m * c * (detail::count_in(p, k) - own);
    }
    require_positive(total, s);
    return joint / (total * (players_ - 1));
  }

  /// Conditional pmf of C(K) = #{j != i : s_j in K} given s_i = s.
  std::vector<Rational> count_pmf(std::size_t s, SignalSet k) const {
    std::vector<Rational> pmf(players_, Rational(0));
    Rational total = 0;
    const std::size_t own = k.contains(s) ? 1 : 0;
    for (const auto& [p, m] : mass_) {
      const auto c = detail::multiplicity(p, s);
      if (!c) continue;
      const Rational w = m * c;
      pmf[detail::count_in(p, k) - own] += w;
      total += w;
    }
    require_positive(total, s);
    for (auto& x : pmf) x /= total;
    return pmf;
  }

  CountCDF count_cdf(std::size_t s, SignalSet k) const {
    auto pmf = count_pmf(s, k);
    CountCDF cdf(pmf.size());
    Rational run = 0;
    for (std::size_t m = 0; m < pmf.size(); ++m) {
      run += pmf[m];
      cdf[m] = run;
    }
    return cdf;
  }

  /// E[C(K) | s_i = s], computed from the count pmf.
  Rational expected_count(std::size_t s, SignalSet k) const {
    auto pmf = count_pmf(s, k);
    Rational e = 0;
    for (std::size_t m = 0; m < pmf.size(); ++m) e += pmf[m] * m;
    return e;
  }

  /// Prob(C(K) >= m | s_i = s).
  Rational count_at_least(std::size_t s, SignalSet k, std::size_t m) const {
    auto pmf = count_pmf(s, k);
    Rational t = 0;
    for (std::size_t c = m; c < pmf.size(); ++c) t += pmf[c];
    return t;
  }

  /// Probability that a given player's signal lies in K.
  Rational prob(SignalSet k) const {
    Rational t = 0;
    for (auto s : k.indices()) t += marginal(s);
    return t;
  }

  friend bool operator==(const JointDist&, const JointDist&) = default;

 private:
  void require_positive(const Rational& total, std::size_t s) const {
    if (total == 0)
      throw ZeroProbabilityError("conditioning on zero-probability signal '" + space_.label(s) + "'");
  }

  SignalSpace space_;
  std::size_t players_ = 2;
  MassMap mass_;
};

/// Joint distribution without the symmetry requirement.
class NonExchJointDist {
 public:
  using MassMap = std::map<Profile, Rational>;

  NonExchJointDist() = default;

  NonExchJointDist(SignalSpace space, std::size_t players, MassMap mass)
      : space_(std::move(space)), players_(players) {
    detail::check_players(players_);
    for (auto& [profile, p] : mass) {
      detail::check_profile(profile, players_, space_.size());
      if (p != 0) mass_.emplace(profile, std::move(p));
    }
  }

  static NonExchJointDist from_exchangeable(const JointDist& d) {
    MassMap m;
    d.for_each_ordered([&](const Profile& p, const Rational& x) { m[p] = x; });
    return NonExchJointDist(d.space(), d.players(), std::move(m));
  }

  const SignalSpace& space() const { return space_; }
  std::size_t players() const { return players_; }
  std::size_t signals() const { return space_.size(); }
  const MassMap& masses() const { return mass_; }

  Rational mass(const Profile& p) const {
    auto it = mass_.find(p);
    return it == mass_.end() ? Rational(0) : it->second;
  }

  Rational total_mass() const {
    Rational t = 0;
    for (const auto& [p, m] : mass_) t += m;
    return t;
  }

  MarginalDist marginal(std::size_t player) const {
    if (player >= players_) throw std::out_of_range("player index out of range");
    MarginalDist out(space_.size(), Rational(0));
    for (const auto& [p, m] : mass_) out[p[player]] += m;
    return out;
  }

  /// Prob(s_j in K | s_i = s).
  Rational cond_prob(std::size_t i, std::size_t j, std::size_t s, SignalSet k) const {
    if (i >= players_ || j >= players_ || i == j) throw std::out_of_range("bad player pair");
    Rational joint = 0, total = 0;
    for (const auto& [p, m] : mass_) {
      if (p[i] != s) continue;
      total += m;
      if (k.contains(p[j])) joint += m;
    }
    if (total == 0)
      throw ZeroProbabilityError("player " + std::to_string(i) + " conditioning on zero-probability signal '" +
                                 space_.label(s) + "'");
    return joint / total;
  }

  bool is_exchangeable() const {
    for (const auto& [p, m] : mass_) {
      Profile q = p;
      std::sort(q.begin(), q.end());
      do {
        if (mass(q) != m) return false;
      } while (std::next_permutation(q.begin(), q.end()));
    }
    return true;
  }

  JointDist to_exchangeable() const {
    if (!is_exchangeable()) throw std::invalid_argument("distribution is not exchangeable");
    return JointDist::from_ordered(space_, players_, mass_);
  }

  friend bool operator==(const NonExchJointDist&, const NonExchJointDist&) = default;

 private:
  SignalSpace space_;
  std::size_t players_ = 2;
  MassMap mass_;
};

struct ValidationReport {
  Rational total;
  std::vector<std::string> negative;  // offending profiles, rendered
  bool normalized = false;
  bool exchangeable = true;
  bool passes() const { return normalized && negative.empty(); }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& n : negative) out.push_back("negative mass at " + n);
    if (!normalized) out.push_back("total mass " + to_string(total) + " != 1");
    return out;
  }
};


inline ValidationReport validate(const JointDist& d) {
  ValidationReport r;
  r.total = d.total_mass();
  r.normalized = r.total == 1;
  for (const auto& [p, m] : d.masses())
    if (m < 0) r.negative.push_back(detail::render(d.space(), p));
  r.exchangeable = true;
  return r;
}

inline ValidationReport validate(const NonExchJointDist& d) {
  ValidationReport r;
  r.total = d.total_mass();
  r.normalized = r.total == 1;
  for (const auto& [p, m] : d.masses())
    if (m < 0) r.negative.push_back(detail::render(d.space(), p));
  r.exchangeable = d.is_exchangeable();
  return r;
}

template <typename Dist>
void require_valid(const Dist& d, const std::string& what = "distribution") {
  auto r = validate(d);
  if (!r.passes()) {
    std::string msg = what + " is invalid:";
    for (const auto& f : r.failures()) msg += " " + f + ";";
    throw std::invalid_argument(msg);
  }
}

/// (1-t) F + t D, where D places each marginal mass m(s) on (s,...,s).
inline JointDist diagonal_mixture(const JointDist& f, const Rational& t) {
  if (t < 0 || t > 1) throw std::invalid_argument("mixture weight must lie in [0, 1]");
  JointDist::MassMap m;
  for (const auto& [p, x] : f.masses()) m[p] += (1 - t) * x;
  for (std::size_t s = 0; s < f.signals(); ++s) {
    const Rational ms = f.marginal(s);
    if (ms != 0) m[Profile(f.players(), static_cast<std::uint8_t>(s))] += t * ms;
  }
  return JointDist(f.space(), f.players(), std::move(m));
}

/// Elementary transformation on identical intervals (N = 2): +a on (s,s)
/// and (s',s'), -a on each of (s,s') and (s',s).
inline JointDist apply_eti(const JointDist& f, std::size_t s, std::size_t s2, const Rational& a) {
  if (f.players() != 2) throw std::invalid_argument("ETI requires two players");
  if (!(s < s2) || s2 >= f.signals()) throw std::invalid_argument("ETI requires s < s'");
  if (a < 0) throw std::invalid_argument("ETI magnitude must be nonnegative");
  const Profile off{static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(s2)};
  if (f.ordered_mass(off) < a)
    throw InfeasibleError("ETI of magnitude " + to_string(a) + " exceeds off-diagonal mass " +
                          to_string(f.ordered_mass(off)) + " at " + detail::render(f.space(), off));
  JointDist::MassMap m = f.masses();
  m[Profile{off[0], off[0]}] += a;
  m[Profile{off[1], off[1]}] += a;
  m[off] -= 2 * a;
  return JointDist(f.space(), f.players(), std::move(m));
}

}  // namespace simil
