#include "oracle.hpp"
#include "simil/auction.hpp"
#include "simil/beliefs.hpp"
#include "simil/examples.hpp"
#include "simil/random.hpp"

#include <gtest/gtest.h>

using namespace simil;
namespace ex = simil::examples;

namespace {

BankRunParams with_perturbation(const Rational& a) {
  BankRunParams bp;
  bp.perturbation = a;
  return bp;
}

/// Payoff from staying at s = 1/2 when only 3/2 stays, from the reference
/// implementation. e_B needs this to be <= 0.
Rational eb_payoff(const Rational& a) {
  return oracle::net_payoff_common(bank_run_game(), bank_run_family(with_perturbation(a)), SignalSet::single(2), 1);
}

bool within(const EventPair& a, const EventPair& b) { return a[0].subset_of(b[0]) && a[1].subset_of(b[1]); }

}  // namespace

TEST(Auction, IndependentUniformBinary) { EXPECT_EQ(auction_revenue(ex::uniform_independent(2, 2)), frac(1, 4)); }

TEST(Auction, PerfectlyCorrelatedBinary) { EXPECT_EQ(auction_revenue(ex::perfectly_correlated(2, 2)), frac(1, 2)); }

TEST(Auction, UsesSignalValues) {
  JointDist d(SignalSpace::from_values({frac(-1, 2), 3}), 2, {{{0, 1}, frac(1, 2)}, {{1, 1}, frac(1, 2)}});
  EXPECT_EQ(auction_revenue(d), frac(-1, 4) + frac(3, 2));
}

TEST(Auction, TwoBiddersOnly) { EXPECT_THROW(auction_revenue(ex::table1_f()), std::invalid_argument); }

TEST(Auction, SingleStepIncrement) {
  auto g = ex::uniform_independent(3, 2);
  const EtiStep e{0, 2, frac(1, 20)};
  auto f = apply_eti(g, e.s, e.s2, e.a);
  EXPECT_EQ(auction_revenue(f) - auction_revenue(g), e.a * 2);
  EXPECT_EQ(eti_revenue_increment(g.space(), e), frac(1, 10));
}

TEST(EtiDecompose, MixtureOfUniformBinary) {
  auto u = ex::uniform_independent(2, 2);
  auto d = eti_decompose(diagonal_mixture(u, frac(1, 2)), u);
  ASSERT_TRUE(d.ok);
  EXPECT_EQ(d.steps, (std::vector<EtiStep>{{0, 1, frac(1, 8)}}));
}

TEST(EtiDecompose, IdenticalIsEmpty) {
  auto f = ex::figure2_f();
  auto d = eti_decompose(f, f);
  EXPECT_TRUE(d.ok);
  EXPECT_TRUE(d.steps.empty());
}

TEST(EtiDecompose, ReversedFailsWithCell) {
  auto u = ex::uniform_independent(2, 2);
  auto d = eti_decompose(u, diagonal_mixture(u, frac(1, 2)));
  EXPECT_FALSE(d.ok);
  ASSERT_TRUE(d.cell);
  EXPECT_EQ(*d.cell, (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_GT(d.f_cell, d.g_cell);
}

TEST(EtiDecompose, MarginalMismatchIsError) {
  auto u = ex::uniform_independent(2, 2);
  auto c = ex::perfectly_correlated(2, 2);
  JointDist skew(u.space(), 2, {{{0, 0}, frac(1, 2)}, {{0, 1}, frac(1, 2)}});
  EXPECT_NO_THROW(eti_decompose(c, u));
  EXPECT_THROW(eti_decompose(skew, u), std::invalid_argument);
}

TEST(BankRunFamily, BaseIsProductPerState) {
  auto fam = bank_run_family(ex::bankrun_base());
  EXPECT_EQ(fam.size(), 3u);
  EXPECT_EQ(fam.prior(), (std::vector<Rational>{frac(1, 20), frac(17, 20), frac(1, 10)}));
  for (const auto& d : fam.per_state()) {
    const auto m = d.marginal();
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        EXPECT_EQ(d.ordered_mass({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)}), m[a] * m[b]);
  }
}

TEST(BankRunFamily, MiddleMarginalsIgnorePerturbation) {
  const Rational p = frac(97, 100), q = (1 - p) / 2;
  const Rational bound = bank_run_feasibility_bound(p);
  for (const Rational& a : std::vector<Rational>{0, Rational(bound / 3), bound}) {
    EXPECT_EQ(bank_run_middle_joint(p, a).marginal(), (std::vector<Rational>{q, p, q}));
  }
}

TEST(BankRunFamily, CenterCellInfeasible) {
  try {
    bank_run_family(with_perturbation(frac(1, 2)));
    FAIL() << "expected infeasibility";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("(1/2,1/2)"), std::string::npos);
  }
}

TEST(BankRunFamily, ParameterErrors) {
  BankRunParams bp;
  bp.epsilon = frac(1, 3);
  EXPECT_THROW(bank_run_family(bp), std::invalid_argument);
  bp = BankRunParams{};
  bp.accuracy = frac(1, 2);
  EXPECT_THROW(bank_run_family(bp), std::invalid_argument);
  bp = BankRunParams{};
  bp.perturbation = -frac(1, 100);
  EXPECT_THROW(bank_run_family(bp), std::invalid_argument);
  EXPECT_THROW(bank_run_family(with_perturbation(bank_run_feasibility_bound(frac(97, 100)) + frac(1, 1000000))),
               std::invalid_argument);
}

TEST(BankRunThresholds, OrderedAndPositive) {
  auto th = bank_run_thresholds(frac(1, 20), frac(97, 100));
  EXPECT_LT(th.alpha_star, th.alpha_star_star);
  EXPECT_GE(th.alpha_star, 0);
  EXPECT_EQ(bank_run_analysis(ex::bankrun_base()).eb_exists, th.alpha_star >= 0);
  EXPECT_THROW(bank_run_thresholds(frac(1, 20), frac(1, 2)), std::invalid_argument);
}

// The e_B condition at s = 1/2 is affine in a'. Its root, found from two
// evaluations of the reference payoff, must be the closed-form threshold.
TEST(BankRunThresholds, AlphaStarIsRootOfEbCondition) {
  const Rational b = bank_run_feasibility_bound(frac(97, 100));
  const Rational v0 = eb_payoff(0), vb = eb_payoff(b), vh = eb_payoff(b / 2);
  EXPECT_EQ(vh, (v0 + vb) / 2);  // affine
  const Rational root = -v0 * b / (vb - v0);
  EXPECT_EQ(root, bank_run_thresholds(frac(1, 20), frac(97, 100)).alpha_star);
}

// alpha* sits beyond the corner-cell bound for these parameters, so no
// feasible perturbation removes e_B.
TEST(BankRunThresholds, AlphaStarBeyondFeasibleRange) {
  const Rational a = bank_run_thresholds(frac(1, 20), frac(97, 100)).alpha_star;
  EXPECT_GT(a, bank_run_feasibility_bound(frac(97, 100)));
  EXPECT_THROW(bank_run_analysis(with_perturbation(a + frac(1, 1000000))), std::invalid_argument);
}

TEST(BankRunAnalysis, BaseHasBothEquilibria) {
  auto r = bank_run_analysis(ex::bankrun_base());
  EXPECT_TRUE(r.eg_exists);
  EXPECT_TRUE(r.eb_exists);
  // The adversarial and favourable runs differ by 2 P(s = 1/2).
  const auto fam = bank_run_family(ex::bankrun_base());
  EXPECT_EQ(r.maximal_expected_run - r.minimal_expected_run, 2 * fam.signal_weight(1));
  EXPECT_EQ(r.maximal_expected_run, 2 * (fam.signal_weight(0) + fam.signal_weight(1)));
}

TEST(BankRunSweep, GridAgreesWithThresholdsAndOracle) {
  const auto th = bank_run_thresholds(frac(1, 20), frac(97, 100));
  auto rows = bank_run_sweep(ex::bankrun_base(), 20);
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows.back().perturbation, bank_run_feasibility_bound(frac(97, 100)));
  for (const auto& row : rows) {
    EXPECT_EQ(row.analysis.eb_exists, row.perturbation <= th.alpha_star);
    EXPECT_EQ(row.analysis.eg_exists, row.perturbation <= th.alpha_star_star);
    std::vector<std::size_t> got;
    for (const auto& c : row.analysis.cutoffs.equilibria) got.push_back(c.cutoff);
    EXPECT_EQ(got, oracle::cutoffs(bank_run_game(), bank_run_family(with_perturbation(row.perturbation))));
  }
  EXPECT_THROW(bank_run_sweep(ex::bankrun_base(), 0), std::invalid_argument);
}

TEST(IntroSuite, PerturbedAtBound) {
  auto r = intro_example_suite(ex::bankrun_perturbed());
  EXPECT_FALSE(r.distributions_equal);
  EXPECT_TRUE(r.pqd_holds);
  EXPECT_FALSE(r.cad_holds);
  EXPECT_FALSE(r.ccad_holds);
  ASSERT_TRUE(r.ccad_violation);
  EXPECT_EQ(describe(bank_run_space(), *r.ccad_violation), "Contour(1/2, 1/2, up)");
  EXPECT_FALSE(r.perturbation_above_alpha_star);
  EXPECT_FALSE(r.eb_eliminated);
}

TEST(IntroSuite, UnperturbedIsDegenerate) {
  auto r = intro_example_suite(ex::bankrun_base());
  EXPECT_TRUE(r.distributions_equal);
  EXPECT_TRUE(r.cad_holds);
  EXPECT_TRUE(r.pqd_holds);
  EXPECT_FALSE(r.eb_eliminated);
}

TEST(IntroSuite, SymmetricPreset) {
  BankRunParams bp = ex::bankrun_perturbed();
  bp.prior = BankRunPrior::Symmetric;
  auto fam = bank_run_family(bp);
  EXPECT_EQ(fam.prior(), (std::vector<Rational>{frac(1, 20), frac(9, 10), frac(1, 20)}));
  EXPECT_TRUE(intro_example_suite(bp).pqd_holds);
}

TEST(BeliefStep, VacuousThreshold) {
  auto d = ex::figure2_f();
  const EventPair all{d.space().all(), d.space().all()};
  const Thresholds zero(4, Rational(0));
  EXPECT_EQ(belief_step(d, all, {zero, zero}), all);
}

TEST(BeliefStep, ImpossibleThreshold) {
  auto d = ex::figure2_f();
  const EventPair all{d.space().all(), d.space().all()};
  const Thresholds high(4, 1 + frac(1, 100));
  EXPECT_EQ(belief_step(d, all, {high, high}), (EventPair{SignalSet(), SignalSet()}));
}

TEST(BeliefStep, PerfectCorrelationFixedPoint) {
  auto d = ex::perfectly_correlated(2, 2);
  const EventPair e{SignalSet::single(1), SignalSet::single(1)};
  const Thresholds one(2, Rational(1));
  EXPECT_EQ(belief_step(d, e, {one, one}), e);
}

TEST(BeliefStep, Validation) {
  auto d = ex::perfectly_correlated(2, 2);
  const EventPair all{d.space().all(), d.space().all()};
  EXPECT_THROW(belief_step(d, all, {Thresholds(1), Thresholds(2)}), std::invalid_argument);
  EXPECT_THROW(belief_step(ex::table1_f(), all, {Thresholds(2), Thresholds(2)}), std::invalid_argument);
}

TEST(Rationalizable, Dominance) {
  auto d = ex::uniform_independent(3, 2);
  auto r = rationalizable_sets(d, {1, frac(3, 2), 2});
  EXPECT_EQ(r.invest, d.space().all());
  EXPECT_EQ(r.invest_iterations, 0u);
}

TEST(Rationalizable, NegativeXEmptiesAtOnce) {
  auto d = ex::uniform_independent(3, 2);
  auto r = rationalizable_sets(d, {-1, frac(-1, 2), frac(-1, 10)});
  EXPECT_TRUE(r.invest.empty());
  EXPECT_EQ(r.invest_iterations, 1u);
  EXPECT_EQ(r.not_invest, d.space().all());
}

TEST(Rationalizable, MixtureExample) {
  auto g = ex::uniform_independent(4, 2);
  auto f = diagonal_mixture(g, frac(1, 2));
  const std::vector<Rational> x{frac(-1, 10), frac(1, 5), frac(3, 5), frac(4, 5)};
  auto rg = rationalizable_sets(g, x), rf = rationalizable_sets(f, x);
  EXPECT_TRUE(rg.invest.subset_of(rf.invest));
  EXPECT_TRUE(rg.not_invest.subset_of(rf.not_invest));
  EXPECT_THROW(rationalizable_sets(g, {0, 1}), std::invalid_argument);
}

// Properties.

class ApplicationProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ApplicationProperty, RevenueMonotoneUnderEtis) {
  Rng rng(GetParam());
  for (int i = 0; i < 40; ++i) {
    auto g = random_exchangeable(rng, 2 + uniform_int(rng, 0, 3), 2);
    auto steps = random_eti_steps(rng, g, 1 + uniform_int(rng, 0, 4));
    JointDist d = g;
    for (const auto& e : steps) {
      auto next = apply_eti(d, e.s, e.s2, e.a);
      EXPECT_EQ(auction_revenue(next) - auction_revenue(d), eti_revenue_increment(g.space(), e));
      EXPECT_GE(auction_revenue(next), auction_revenue(d));
      d = next;
    }
    EXPECT_GE(auction_revenue(d), auction_revenue(g));
    EXPECT_TRUE(check_cad(d, g).holds);
  }
}

TEST_P(ApplicationProperty, DecompositionIffCad) {
  Rng rng(GetParam());
  for (int i = 0; i < 60; ++i) {
    auto [f, g] = random_pair(rng, 2 + uniform_int(rng, 0, 3), 2);
    auto d = eti_decompose(f, g);
    EXPECT_EQ(d.ok, check_cad(f, g).holds);
    if (d.ok) {
      EXPECT_EQ(apply_steps(g, d.steps), f);
      EXPECT_TRUE(eti_prefix_valid(g, d.steps));
      Rational sum = 0;
      for (const auto& e : d.steps) sum += eti_revenue_increment(g.space(), e);
      EXPECT_EQ(auction_revenue(f) - auction_revenue(g), sum);
    }
  }
}

TEST_P(ApplicationProperty, BeliefOperatorMonotone) {
  Rng rng(GetParam());
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 2 + uniform_int(rng, 0, 3);
    auto d = random_exchangeable(rng, n, 2);
    std::array<Thresholds, 2> phi;
    for (auto& t : phi)
      for (std::size_t s = 0; s < n; ++s) t.push_back(random_rational(rng, 0, 1));
    auto pick = [&] { return SignalSet(static_cast<std::uint32_t>(uniform_int(rng, 0, (1 << n) - 1))); };
    const EventPair small{pick(), pick()};
    const EventPair big{small[0].with(uniform_int(rng, 0, n - 1)), small[1].with(uniform_int(rng, 0, n - 1))};
    EXPECT_TRUE(within(belief_step(d, small, phi), belief_step(d, big, phi)));
    EXPECT_TRUE(within(belief_step(d, big, phi), big));
    auto cb = common_belief(d, {d.space().all(), d.space().all()}, phi);
    EXPECT_LE(cb.iterations, 2 * n);
    EXPECT_EQ(belief_step(d, cb.sets, phi), cb.sets);
  }
}

TEST_P(ApplicationProperty, RationalizableMonotoneUnderMixing) {
  Rng rng(GetParam());
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 2 + uniform_int(rng, 0, 3);
    auto g = random_exchangeable(rng, n, 2);
    auto f = diagonal_mixture(g, random_unit(rng));
    std::vector<Rational> x(n);
    for (auto& v : x) v = random_rational(rng, frac(-1, 2), frac(3, 2));
    auto rg = rationalizable_sets(g, x), rf = rationalizable_sets(f, x);
    EXPECT_TRUE(rg.invest.subset_of(rf.invest));
    EXPECT_TRUE(rg.not_invest.subset_of(rf.not_invest));
    EXPECT_LE(rg.invest_iterations, n);
    EXPECT_LE(rf.invest_iterations, n);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ApplicationProperty, ::testing::Values(41u, 42u, 43u));
