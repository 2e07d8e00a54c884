#pragma once

// State-conditional signal distributions with a common prior.

#include "simil/joint_dist.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace simil {

/// Posterior over states, indexed like StateFamily::states().
using Posterior = std::vector<Rational>;

struct State {
  std::string label;
  Rational value;
  friend bool operator==(const State&, const State&) = default;
};

class StateFamily {
 public:
  StateFamily() = default;

  StateFamily(std::vector<State> states, std::vector<Rational> prior, std::vector<JointDist> per_state)
      : states_(std::move(states)), prior_(std::move(prior)), per_state_(std::move(per_state)) {
    if (states_.empty()) throw std::invalid_argument("state family needs at least one state");
    if (prior_.size() != states_.size() || per_state_.size() != states_.size())
      throw std::invalid_argument("states, prior and per-state distributions differ in length");
    for (std::size_t i = 0; i < states_.size(); ++i)
      for (std::size_t j = i + 1; j < states_.size(); ++j)
        if (states_[i].label == states_[j].label)
          throw std::invalid_argument("duplicate state label '" + states_[i].label + "'");
    Rational total = 0;
    for (std::size_t t = 0; t < prior_.size(); ++t) {
      if (prior_[t] < 0) throw std::invalid_argument("negative prior at state '" + states_[t].label + "'");
      total += prior_[t];
    }
    if (total != 1) throw std::invalid_argument("prior sums to " + to_string(total) + ", not 1");
    for (std::size_t t = 0; t < per_state_.size(); ++t) {
      if (!(per_state_[t].space() == per_state_[0].space()) || per_state_[t].players() != per_state_[0].players())
        throw std::invalid_argument("per-state distributions must share one signal space and player count");
      require_valid(per_state_[t], "distribution for state '" + states_[t].label + "'");
    }
    for (std::size_t s = 0; s < signals(); ++s)
      if (signal_weight(s) <= 0)
        throw std::invalid_argument("signal '" + space().label(s) + "' has zero probability under the prior");
  }

  /// One-state family wrapping a plain distribution.
  static StateFamily single(const JointDist& d) {
    return StateFamily({State{"0", Rational(0)}}, {Rational(1)}, {d});
  }

  const std::vector<State>& states() const { return states_; }
  const std::vector<Rational>& prior() const { return prior_; }
  const std::vector<JointDist>& per_state() const { return per_state_; }
  const JointDist& at(std::size_t t) const { return per_state_.at(t); }
  std::size_t size() const { return states_.size(); }
  const SignalSpace& space() const { return per_state_.front().space(); }
  std::size_t players() const { return per_state_.front().players(); }
  std::size_t signals() const { return space().size(); }

  /// sum_theta mu0(theta) marg F^theta(s).
  Rational signal_weight(std::size_t s) const {
    Rational w = 0;
    for (std::size_t t = 0; t < size(); ++t)
      if (prior_[t] != 0) w += prior_[t] * per_state_[t].marginal(s);
    return w;
  }

  std::optional<std::size_t> find_state(const std::string& label) const {
    for (std::size_t t = 0; t < states_.size(); ++t)
      if (states_[t].label == label) return t;
    return std::nullopt;
  }

  friend bool operator==(const StateFamily&, const StateFamily&) = default;

 private:
  std::vector<State> states_;
  std::vector<Rational> prior_;
  std::vector<JointDist> per_state_;
};

inline Posterior posterior(const StateFamily& fam, std::size_t s) {
  const Rational w = fam.signal_weight(s);
  if (w == 0) throw ZeroProbabilityError("signal '" + fam.space().label(s) + "' has zero probability");
  Posterior out(fam.size());
  for (std::size_t t = 0; t < fam.size(); ++t)
    out[t] = fam.prior()[t] == 0 ? Rational(0) : fam.prior()[t] * fam.at(t).marginal(s) / w;
  return out;
}

/// F = sum_theta mu0(theta) F^theta.
inline JointDist mix_family(const StateFamily& fam) {
  JointDist::MassMap m;
  for (std::size_t t = 0; t < fam.size(); ++t)
    for (const auto& [p, x] : fam.at(t).masses()) m[p] += fam.prior()[t] * x;
  return JointDist(fam.space(), fam.players(), std::move(m));
}

/// True when every state's joint has the same marginal as the other family's.
inline bool same_state_marginals(const StateFamily& f, const StateFamily& g) {
  if (f.size() != g.size()) return false;
  for (std::size_t t = 0; t < f.size(); ++t)
    if (f.at(t).marginal() != g.at(t).marginal()) return false;
  return true;
}

}  // namespace simil
