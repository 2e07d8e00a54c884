#pragma once

// Two-depositor bank run with states and signals in {-1/2, 1/2, 3/2}.
// Action 1 is "stay"; the payoff difference is d(A, theta) = theta - 1 + A.
// Extreme states draw signals independently; state 1/2 adds a perturbation
// of size a' that moves mass from the center and the far corners to the
// four cells next to the center, keeping the marginals fixed.

#include "simil/games.hpp"
#include "simil/orders.hpp"
#include "simil/state_family.hpp"

#include <string>
#include <vector>

namespace simil {

enum class BankRunPrior {
  Asymmetric,  // (eps, 1 - 3 eps, 2 eps), where the thresholds are derived
  Symmetric,   // (eps, 1 - 2 eps, eps), the introductory preset
};

struct BankRunParams {
  Rational epsilon{1, 20};
  Rational accuracy{97, 100};
  Rational perturbation{0};
  BankRunPrior prior = BankRunPrior::Asymmetric;
};

inline SignalSpace bank_run_space() { return SignalSpace::from_values({frac(-1, 2), frac(1, 2), frac(3, 2)}); }

/// (3 - 3 eps) / (3 - eps).
inline Rational bank_run_dominance_bound(const Rational& eps) { return (3 - 3 * eps) / (3 - eps); }

/// Largest a' keeping every cell of the state-1/2 joint nonnegative.
inline Rational bank_run_feasibility_bound(const Rational& p) {
  const Rational q = (1 - p) / 2;
  const Rational corner = q * q, center = p * p / 2;
  return corner < center ? corner : center;
}

inline void validate_bank_run(const BankRunParams& bp, bool check_perturbation = true) {
  const Rational& e = bp.epsilon;
  const Rational& p = bp.accuracy;
  if (!(e > 0 && e < Rational(1, 3))) throw std::invalid_argument("epsilon must lie in (0, 1/3)");
  if (!(p > 0 && p < 1)) throw std::invalid_argument("accuracy p must lie in (0, 1)");
  if (!(p > bank_run_dominance_bound(e)))
    throw std::invalid_argument("dominance condition p > (3-3eps)/(3-eps) fails");
  if (!check_perturbation) return;
  const Rational& a = bp.perturbation;
  if (a < 0) throw std::invalid_argument("perturbation must be nonnegative");
  const Rational q = (1 - p) / 2;
  std::vector<std::string> bad;
  if (p * p - 2 * a < 0) bad.push_back("(1/2,1/2)");
  if (q * q - a < 0) bad.push_back("(-1/2,3/2) and (3/2,-1/2)");
  if (!bad.empty()) {
    std::string msg = "perturbation " + to_string(a) + " is infeasible: negative mass at cell";
    for (const auto& b : bad) msg += " " + b;
    throw std::invalid_argument(msg);
  }
}

namespace detail {

inline JointDist product_joint(const SignalSpace& sp, const std::vector<Rational>& m) {
  JointDist::MassMap mass;
  for (std::uint8_t a = 0; a < m.size(); ++a)
    for (std::uint8_t b = 0; b < m.size(); ++b) {
      Profile key{std::min(a, b), std::max(a, b)};
      mass[key] += m[a] * m[b];
    }
  return JointDist(sp, 2, std::move(mass));
}

}  // namespace detail

/// Joint of the middle state with perturbation a.
inline JointDist bank_run_middle_joint(const Rational& p, const Rational& a) {
  const Rational q = (1 - p) / 2;
  JointDist::MassMap m;
  m[{0, 0}] = q * q;
  m[{2, 2}] = q * q;
  m[{1, 1}] = p * p - 2 * a;
  m[{0, 1}] = 2 * (q * p + a);
  m[{1, 2}] = 2 * (q * p + a);
  m[{0, 2}] = 2 * (q * q - a);
  return JointDist(bank_run_space(), 2, std::move(m));
}

inline StateFamily bank_run_family(const BankRunParams& bp) {
  validate_bank_run(bp);
  const auto sp = bank_run_space();
  const Rational& p = bp.accuracy;
  const Rational q = (1 - p) / 2;
  const Rational& e = bp.epsilon;
  std::vector<State> states{{"-1/2", frac(-1, 2)}, {"1/2", frac(1, 2)}, {"3/2", frac(3, 2)}};
  std::vector<Rational> prior = bp.prior == BankRunPrior::Asymmetric ? std::vector<Rational>{e, 1 - 3 * e, 2 * e}
                                                                     : std::vector<Rational>{e, 1 - 2 * e, e};
  std::vector<JointDist> joints{detail::product_joint(sp, {p, q, q}), bank_run_middle_joint(p, bp.perturbation),
                                detail::product_joint(sp, {q, q, p})};
  return StateFamily(std::move(states), std::move(prior), std::move(joints));
}

/// d(A, theta) = theta - 1 + A.
inline CommonValueGame bank_run_game() {
  std::vector<Rational> alpha{frac(-3, 2), frac(-1, 2), frac(1, 2)};
  return CommonValueGame(2, alpha, {1, 1, 1}, identity_aggregator());
}

struct BankRunThresholds {
  Rational alpha_star, alpha_star_star;
};

/// Closed forms evaluated on the unperturbed family.
inline BankRunThresholds bank_run_thresholds(const Rational& eps, const Rational& p) {
  BankRunParams bp{eps, p, 0, BankRunPrior::Asymmetric};
  const auto fam = bank_run_family(bp);
  const std::size_t mid = 1;
  const Posterior mu = posterior(fam, mid);
  Rational e_theta = 0;
  for (std::size_t t = 0; t < fam.size(); ++t) e_theta += mu[t] * fam.states()[t].value;
  const JointDist mix = mix_family(fam);
  const Rational up = mix.cond_prob(mid, SignalSet::single(2));
  const Rational down = mix.cond_prob(mid, SignalSet::single(0));
  BankRunThresholds th;
  th.alpha_star = -(e_theta + up - 1) * p / mu[mid];
  th.alpha_star_star = (e_theta - down) * p / mu[mid];
  if (!(th.alpha_star < th.alpha_star_star)) throw std::logic_error("threshold ordering fails");
  return th;
}

struct BankRunAnalysis {
  bool eg_exists = false;  // stay on {1/2, 3/2}
  bool eb_exists = false;  // stay on {3/2}
  Rational maximal_expected_run, minimal_expected_run;
  CutoffSet cutoffs;
};

/// Expected number of depositors who run, at the least (most) favourable
/// cutoff equilibrium: 2 (1 - eqminp) and 2 (1 - eqmaxp).
inline BankRunAnalysis bank_run_analysis(const BankRunParams& bp) {
  const auto fam = bank_run_family(bp);
  BankRunAnalysis r;
  r.cutoffs = enumerate_cutoff_equilibria(bank_run_game(), fam);
  r.eg_exists = r.cutoffs.contains(2);
  r.eb_exists = r.cutoffs.contains(3);
  r.maximal_expected_run = 2 * (1 - r.cutoffs.eqminp);
  r.minimal_expected_run = 2 * (1 - r.cutoffs.eqmaxp);
  return r;
}

struct BankRunRow {
  Rational perturbation;
  BankRunAnalysis analysis;
};

/// Rows at a' = bound * i / points for i = first..points.
inline std::vector<BankRunRow> bank_run_sweep(const BankRunParams& base, std::size_t points, std::size_t first = 1) {
  if (points == 0) throw std::invalid_argument("sweep needs at least one point");
  validate_bank_run(base, false);
  const Rational bound = bank_run_feasibility_bound(base.accuracy);
  std::vector<BankRunRow> rows;
  for (std::size_t i = first; i <= points; ++i) {
    BankRunParams bp = base;
    bp.perturbation = bound * Rational(i) / Rational(points);
    rows.push_back({bp.perturbation, bank_run_analysis(bp)});
  }
  return rows;
}

struct IntroReport {
  bool distributions_equal = false;
  bool pqd_holds = false;
  bool cad_holds = false;
  bool ccad_holds = false;
  std::optional<Violation> cad_violation, ccad_violation;
  bool eb_eliminated = false;  // e_B exists at a' = 0 and not at a'
  bool perturbation_above_alpha_star = false;
  BankRunThresholds thresholds;
};

/// Compares the perturbed middle-state joint with the unperturbed one.
inline IntroReport intro_example_suite(const BankRunParams& bp) {
  validate_bank_run(bp);
  IntroReport r;
  const JointDist f = bank_run_middle_joint(bp.accuracy, bp.perturbation);
  const JointDist g = bank_run_middle_joint(bp.accuracy, 0);
  r.distributions_equal = f == g;
  r.pqd_holds = check_pqd_2d(f, g).holds;
  auto cad = check_cad(f, g);
  auto ccad = check_ccad(f, g);
  r.cad_holds = cad.holds;
  r.ccad_holds = ccad.holds;
  r.cad_violation = cad.violation;
  r.ccad_violation = ccad.violation;
  r.thresholds = bank_run_thresholds(bp.epsilon, bp.accuracy);
  r.perturbation_above_alpha_star = bp.perturbation > r.thresholds.alpha_star;
  BankRunParams base = bp;
  base.perturbation = 0;
  base.prior = BankRunPrior::Asymmetric;
  BankRunParams pert = bp;
  pert.prior = BankRunPrior::Asymmetric;
  r.eb_eliminated = bank_run_analysis(base).eb_exists && !bank_run_analysis(pert).eb_exists;
  return r;
}

}  // namespace simil
