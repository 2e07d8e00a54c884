#include "oracle.hpp"
#include "simil/examples.hpp"
#include "simil/linear.hpp"
#include "simil/random.hpp"

#include <gtest/gtest.h>

using namespace simil;
namespace ex = simil::examples;

namespace {

const SignalSet k0 = SignalSet::single(0);

JointDist uniform_binary() { return ex::uniform_independent(2, 2); }

}  // namespace

TEST(Validate, UniformPasses) {
  auto r = validate(uniform_binary());
  EXPECT_TRUE(r.passes());
  EXPECT_EQ(r.total, 1);
}

TEST(Validate, NegativeMassFails) {
  JointDist d(SignalSpace::integers(2), 2, {{{0, 0}, frac(51, 100)}, {{0, 1}, frac(-1, 100)}, {{1, 1}, frac(1, 2)}});
  auto r = validate(d);
  EXPECT_FALSE(r.passes());
  ASSERT_EQ(r.negative.size(), 1u);
  EXPECT_EQ(r.failures().front(), "negative mass at (0,1)");
}

TEST(Validate, UnnormalizedFails) {
  JointDist d(SignalSpace::integers(2), 2, {{{0, 0}, frac(1, 2)}, {{1, 1}, frac(2, 5)}});
  auto r = validate(d);
  EXPECT_FALSE(r.passes());
  EXPECT_EQ(r.total, frac(9, 10));
}

TEST(JointDistTest, RejectsUnsortedKeys) {
  EXPECT_THROW(JointDist(SignalSpace::integers(2), 2, {{{1, 0}, Rational(1)}}), std::invalid_argument);
}

TEST(JointDistTest, EnforcesDeskBounds) {
  EXPECT_THROW(ex::uniform_independent(2, kMaxPlayers + 1), std::invalid_argument);
  EXPECT_THROW(SignalSpace::integers(kMaxSignals + 1), std::invalid_argument);
}

TEST(JointDistTest, OrderedQueriesArePermutationInvariant) {
  auto f = ex::table1_f();
  EXPECT_EQ(f.ordered_mass({0, 1, 1}), frac(1, 6));
  EXPECT_EQ(f.ordered_mass({1, 0, 1}), frac(1, 6));
  EXPECT_EQ(f.ordered_mass({1, 1, 0}), frac(1, 6));
}

TEST(JointDistTest, FromOrderedRequiresSymmetry) {
  auto sp = SignalSpace::integers(2);
  EXPECT_NO_THROW(JointDist::from_ordered(sp, 2, {{{0, 1}, frac(1, 4)}, {{1, 0}, frac(1, 4)}, {{0, 0}, frac(1, 2)}}));
  EXPECT_THROW(JointDist::from_ordered(sp, 2, {{{0, 1}, frac(1, 4)}, {{1, 0}, frac(1, 8)}, {{0, 0}, frac(5, 8)}}),
               std::invalid_argument);
}

TEST(Marginal, Table1) {
  auto f = ex::table1_f();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f.marginal_of(i), (MarginalDist{frac(1, 2), frac(1, 2)}));
}

TEST(Marginal, PerfectlyCorrelated) {
  EXPECT_EQ(ex::perfectly_correlated(2, 2).marginal(), (MarginalDist{frac(1, 2), frac(1, 2)}));
}

TEST(Marginal, Figure1PairShareMarginals) {
  for (auto a : {Rational(0), frac(1, 10000), bank_run_feasibility_bound(frac(97, 100))})
    EXPECT_EQ(bank_run_middle_joint(frac(97, 100), a).marginal(), ex::figure1_g().marginal());
}

TEST(Marginal, PlayerIndexOutOfRange) { EXPECT_THROW(ex::table1_f().marginal_of(3), std::out_of_range); }

TEST(CondProb, Table1Values) {
  EXPECT_EQ(ex::table1_f().cond_prob(0, k0), frac(2, 3));
  EXPECT_EQ(ex::table1_g().cond_prob(0, k0), frac(1, 2));
}

TEST(CondProb, FullSetIsOne) {
  auto f = ex::figure2_f();
  for (std::size_t s = 0; s < 4; ++s) EXPECT_EQ(f.cond_prob(s, f.space().all()), 1);
}

TEST(CondProb, ZeroMarginalIsAnError) {
  JointDist d(SignalSpace::integers(3), 2, {{{0, 0}, frac(1, 2)}, {{1, 1}, frac(1, 2)}});
  EXPECT_THROW(d.cond_prob(2, k0), ZeroProbabilityError);
}

TEST(CountCdf, Table1) {
  EXPECT_EQ(ex::table1_f().count_cdf(0, k0), (CountCDF{frac(1, 3), frac(1, 3), 1}));
}

TEST(CountCdf, PerfectlyCorrelated) {
  EXPECT_EQ(ex::perfectly_correlated(2, 2).count_cdf(0, k0), (CountCDF{0, 1}));
}

TEST(CountCdf, IndependentUniform) { EXPECT_EQ(uniform_binary().count_cdf(0, k0), (CountCDF{frac(1, 2), 1})); }

TEST(ExpectedCount, Table1) { EXPECT_EQ(ex::table1_f().expected_count(0, k0), frac(4, 3)); }

TEST(ExpectedCount, FullSetIsNMinusOne) {
  auto f = ex::table1_g();
  EXPECT_EQ(f.expected_count(1, f.space().all()), 2);
}

TEST(ExpectedCount, IndependentUniform) { EXPECT_EQ(uniform_binary().expected_count(0, k0), frac(1, 2)); }

TEST(Posterior, BankRunHighSignal) {
  const Rational e = frac(1, 20), p = frac(97, 100), q = (1 - p) / 2;
  auto fam = bank_run_family(BankRunParams{});
  const Rational w0 = e * q, w1 = (1 - 3 * e) * q, w2 = 2 * e * p, tot = w0 + w1 + w2;
  EXPECT_EQ(posterior(fam, 2), (Posterior{w0 / tot, w1 / tot, w2 / tot}));
  EXPECT_EQ(posterior(fam, 2), oracle::posterior(fam, 2));
}

TEST(Posterior, LowSignalClosedForm) {
  const Rational e = frac(1, 20), p = frac(97, 100);
  auto fam = bank_run_family(BankRunParams{});
  EXPECT_EQ(posterior(fam, 0)[0], p * e / (p * e + (1 - p) * (1 - e) / 2));
}

TEST(Posterior, SingleStateIsPointMass) {
  auto fam = StateFamily::single(ex::table1_f());
  EXPECT_EQ(posterior(fam, 1), (Posterior{1}));
}

TEST(Posterior, UninformativeEqualsPrior) {
  auto u = uniform_binary();
  StateFamily fam({{"a", 0}, {"b", 1}}, {frac(1, 3), frac(2, 3)}, {u, ex::perfectly_correlated(2, 2)});
  EXPECT_EQ(posterior(fam, 0), fam.prior());
  EXPECT_EQ(posterior(fam, 1), fam.prior());
}

TEST(StateFamilyTest, RejectsBadPrior) {
  auto u = uniform_binary();
  EXPECT_THROW(StateFamily({{"a", 0}, {"b", 1}}, {frac(1, 3), frac(1, 3)}, {u, u}), std::invalid_argument);
  EXPECT_THROW(StateFamily({{"a", 0}, {"a", 1}}, {frac(1, 2), frac(1, 2)}, {u, u}), std::invalid_argument);
}

TEST(StateFamilyTest, RejectsZeroSignalWeight) {
  JointDist d(SignalSpace::integers(2), 2, {{{0, 0}, Rational(1)}});
  EXPECT_THROW(StateFamily::single(d), std::invalid_argument);
}

TEST(MixFamily, SingleStateReturnsJoint) {
  auto f = ex::figure2_f();
  EXPECT_EQ(mix_family(StateFamily::single(f)), f);
}

TEST(MixFamily, BankRunTotalsOne) {
  auto mix = mix_family(bank_run_family(BankRunParams{}));
  EXPECT_EQ(mix.total_mass(), 1);
  EXPECT_EQ(oracle::total(oracle::expand(mix)), 1);
}

TEST(MixFamily, EqualJointsGiveThatJoint) {
  auto f = ex::table1_g();
  StateFamily fam({{"a", 0}, {"b", 1}}, {frac(1, 4), frac(3, 4)}, {f, f});
  EXPECT_EQ(mix_family(fam), f);
}

TEST(DiagonalMixture, HalfOnUniformBinary) {
  auto m = diagonal_mixture(uniform_binary(), frac(1, 2));
  EXPECT_EQ(m.ordered_mass({0, 0}), frac(3, 8));
  EXPECT_EQ(m.ordered_mass({1, 1}), frac(3, 8));
  EXPECT_EQ(m.ordered_mass({0, 1}), frac(1, 8));
  EXPECT_EQ(m.ordered_mass({1, 0}), frac(1, 8));
  EXPECT_EQ(m.cond_prob(0, k0), frac(3, 4));
}

TEST(DiagonalMixture, Endpoints) {
  auto f = ex::figure2_f();
  EXPECT_EQ(diagonal_mixture(f, 0), f);
  auto d = diagonal_mixture(f, 1);
  for (std::size_t s = 0; s < 4; ++s) EXPECT_EQ(d.cond_prob(s, SignalSet::single(s)), 1);
}

TEST(DiagonalMixture, RejectsOutOfRange) {
  EXPECT_THROW(diagonal_mixture(uniform_binary(), frac(3, 2)), std::invalid_argument);
  EXPECT_THROW(diagonal_mixture(uniform_binary(), frac(-1, 2)), std::invalid_argument);
}

TEST(ApplyEti, EighthOnUniformBinary) {
  auto e = apply_eti(uniform_binary(), 0, 1, frac(1, 8));
  EXPECT_EQ(e.ordered_mass({0, 0}), frac(3, 8));
  EXPECT_EQ(e.ordered_mass({0, 1}), frac(1, 8));
  EXPECT_EQ(e.ordered_mass({1, 0}), frac(1, 8));
  EXPECT_EQ(e.ordered_mass({1, 1}), frac(3, 8));
}

TEST(ApplyEti, ZeroIsIdentity) { EXPECT_EQ(apply_eti(uniform_binary(), 0, 1, 0), uniform_binary()); }

TEST(ApplyEti, InfeasibleAmount) {
  EXPECT_THROW(apply_eti(uniform_binary(), 0, 1, frac(1, 4) + frac(1, 100)), InfeasibleError);
}

TEST(AffineIndependence, SimplexVertices) {
  EXPECT_TRUE(affinely_independent({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}).independent);
}

TEST(AffineIndependence, DuplicateGivesWitness) {
  auto r = affinely_independent({{frac(1, 2), frac(1, 2)}, {frac(1, 2), frac(1, 2)}});
  EXPECT_FALSE(r.independent);
  EXPECT_EQ(r.lambda, (Vec{1, -1}));
}

TEST(AffineIndependence, BankRunPosteriors) {
  auto fam = bank_run_family(BankRunParams{});
  EXPECT_TRUE(affinely_independent(posteriors(fam)).independent);
}

TEST(AffineIndependence, EmptyInputIsAnError) { EXPECT_THROW(affinely_independent({}), std::invalid_argument); }

// Properties over seeded random instances.

class DistProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(DistProperty, ExpansionMatchesOracle) {
  Rng rng(GetParam());
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + uniform_int(rng, 0, 4), players = 2 + uniform_int(rng, 0, 2);
    auto d = random_exchangeable(rng, n, players);
    const auto t = oracle::expand(d);
    EXPECT_EQ(oracle::total(t), 1);
    for (const auto& [p, m] : t) EXPECT_EQ(d.ordered_mass(p), m);
    for (std::size_t i2 = 0; i2 < players; ++i2) EXPECT_EQ(d.marginal_of(i2), oracle::marginal(t, n, i2));
  }
}

TEST_P(DistProperty, ConditionalsAndCountsMatchOracle) {
  Rng rng(GetParam());
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + uniform_int(rng, 0, 3), players = 2 + uniform_int(rng, 0, 2);
    auto d = random_exchangeable(rng, n, players);
    const auto t = oracle::expand(d);
    const std::size_t s = uniform_int(rng, 0, n - 1);
    const SignalSet k(static_cast<std::uint32_t>(uniform_int(rng, 0, (1 << n) - 1)));
    EXPECT_EQ(d.cond_prob(s, k), oracle::cond(t, s, k));
    const auto pmf = oracle::count_pmf(t, players, s, k);
    EXPECT_EQ(d.count_pmf(s, k), pmf);
    for (std::size_t m = 0; m < players; ++m) EXPECT_EQ(d.count_at_least(s, k, m), oracle::tail(pmf, m));
  }
}

TEST_P(DistProperty, ExpectedCountIdentity) {
  Rng rng(GetParam());
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 1 + uniform_int(rng, 0, 4), players = 2 + uniform_int(rng, 0, 3);
    auto d = random_exchangeable(rng, n, players);
    const std::size_t s = uniform_int(rng, 0, n - 1);
    const SignalSet k(static_cast<std::uint32_t>(uniform_int(rng, 0, (1 << n) - 1)));
    EXPECT_EQ(d.expected_count(s, k), Rational(players - 1) * d.cond_prob(s, k));
  }
}

TEST_P(DistProperty, CountCdfShape) {
  Rng rng(GetParam());
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + uniform_int(rng, 0, 4), players = 2 + uniform_int(rng, 0, 3);
    auto d = random_exchangeable(rng, n, players);
    const std::size_t s = uniform_int(rng, 0, n - 1);
    const SignalSet k(static_cast<std::uint32_t>(uniform_int(rng, 0, (1 << n) - 1)));
    auto c = d.count_cdf(s, k);
    ASSERT_EQ(c.size(), players);
    EXPECT_GE(c.front(), 0);
    EXPECT_EQ(c.back(), 1);
    for (std::size_t j = 1; j < c.size(); ++j) EXPECT_LE(c[j - 1], c[j]);
  }
}

TEST_P(DistProperty, TransformationsKeepMarginals) {
  Rng rng(GetParam());
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + uniform_int(rng, 0, 3), players = 2 + uniform_int(rng, 0, 2);
    auto d = random_exchangeable(rng, n, players);
    EXPECT_EQ(diagonal_mixture(d, random_rational(rng, 0, 1)).marginal(), d.marginal());
    EXPECT_EQ(random_swaps(rng, d, 3).marginal(), d.marginal());
    if (players == 2) {
      auto steps = random_eti_steps(rng, d, 3);
      EXPECT_EQ(apply_steps(d, steps).marginal(), d.marginal());
    }
  }
}

TEST_P(DistProperty, PosteriorsSumToOne) {
  Rng rng(GetParam());
  for (int i = 0; i < 5; ++i) {
    auto fam = random_family(rng, 2 + uniform_int(rng, 0, 1), 3, 2);
    for (std::size_t s = 0; s < fam.signals(); ++s) {
      auto mu = posterior(fam, s);
      Rational sum = 0;
      for (const auto& x : mu) sum += x;
      EXPECT_EQ(sum, 1);
      EXPECT_EQ(mu, oracle::posterior(fam, s));
    }
  }
}

TEST_P(DistProperty, DiagonalMixtureMonotone) {
  Rng rng(GetParam());
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + uniform_int(rng, 0, 3), players = 2 + uniform_int(rng, 0, 2);
    auto d = random_exchangeable(rng, n, players);
    Rational t1 = random_rational(rng, 0, 1), t2 = random_rational(rng, 0, 1);
    if (t1 < t2) std::swap(t1, t2);
    auto hi = diagonal_mixture(d, t1), lo = diagonal_mixture(d, t2);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t s2 = 0; s2 < n; ++s2) {
        const auto k = SignalSet::single(s2);
        if (s == s2)
          EXPECT_GE(hi.cond_prob(s, k), lo.cond_prob(s, k));
        else
          EXPECT_LE(hi.cond_prob(s, k), lo.cond_prob(s, k));
      }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, DistProperty, ::testing::Values(1u, 2u, 3u, 42u));
