#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ys/priors.hpp"

using namespace ys;

namespace {

const double kAlphas[] = {0.1, 0.3, 0.5, 0.7, 0.9};

// 10^6-point midpoint rule on the u = sqrt(1 - alpha) scale.
constexpr double kJeffreysNormalizerGolden = 1.8913857049565234;

// exp(min KL) - 1, normalized, from a brute-force KL matrix summed to
// k = 2e7 in long double. The truncated sums are short by ~1e-8 at alpha = 0.1.
constexpr double kLossM10Golden[] = {
    0.046367913956341432, 0.042513473205501796, 0.05058286903586623,
    0.061243659609014304, 0.075829863925547498, 0.09678099375349404,
    0.12915110402001335,  0.18566482998812419,  0.31186529250609715};

double bound_integrand(double a) { return std::sqrt((3.0 - a) / (1.0 - a)) / (2.0 - a); }

}  // namespace

TEST(Fisher, MatchesBruteForceOracle) {
  for (double a : kAlphas) {
    const auto o = fisher_information_oracle(a, 1'000'000);
    const double closed = fisher_information(a);
    EXPECT_LT(std::abs(closed - o.value) / closed, 1e-6) << a;
    EXPECT_GT(o.truncation_bound, 0.0);
  }
}

TEST(Fisher, OracleExpectations) {
  for (double a : kAlphas) {
    const auto o = fisher_information_oracle(a, 1'000'000);
    EXPECT_NEAR(o.first_expectation, 1.0 - a, 1e-6) << a;
    const double c = 1.0 / (1.0 - a);
    const double f = hyp3f2_unit(c + 1.0, c + 2.0);
    const double want = (1.0 - a) * (1.0 - a) / ((2.0 - a) * (2.0 - a)) * f;
    EXPECT_NEAR(o.second_expectation, want, 1e-6 * want) << a;
  }
}

TEST(Fisher, OracleRejectsSmallCutoff) { EXPECT_THROW(fisher_information_oracle(0.5, 999), DomainError); }

TEST(Jeffreys, SquareRootOfFisher) {
  for (double a = 0.01; a < 1.0; a += 0.01)
    EXPECT_NEAR(std::sqrt(fisher_information(a)), jeffreys_unnormalized(a),
                1e-10 * jeffreys_unnormalized(a))
        << a;
}

TEST(Jeffreys, PointwiseBoundAndPositiveRadicand) {
  for (double a = 0.001; a < 0.9995; a += 0.001) {
    const double c = 1.0 / (1.0 - a);
    ASSERT_LT(hyp3f2_unit(c + 1.0, c + 2.0), (2.0 - a) * (2.0 - a)) << a;
    ASSERT_LE(jeffreys_unnormalized(a), bound_integrand(a)) << a;
  }
}

TEST(Jeffreys, RisesTowardOne) { EXPECT_GT(jeffreys_unnormalized(0.9), jeffreys_unnormalized(0.1)); }

TEST(Jeffreys, Normalizer) {
  const JeffreysPrior prior;
  const double k = prior.normalizer();
  EXPECT_GT(k, 0.0);
  EXPECT_LE(k, std::numbers::pi / 3.0 - std::log(2.0 - std::sqrt(3.0)));
  // Dense midpoint oracle (10^6 points), frozen.
  EXPECT_NEAR(k, kJeffreysNormalizerGolden, 1e-6);
  // A coarser live midpoint check.
  const double mid = static_cast<double>(
      oracle::midpoint_unit([](double a) { return jeffreys_unnormalized(a); }, 20'000));
  EXPECT_NEAR(k, mid, 1e-5);
}

TEST(Jeffreys, DensityIntegratesToOne) {
  const JeffreysPrior prior;
  const auto r = integrate_unit_interval([&](double a) { return prior.density(a); });
  EXPECT_NEAR(r.value, 1.0, 1e-8);
}

TEST(Jeffreys, CopiesShareNormalizer) {
  const JeffreysPrior a;
  const JeffreysPrior b = a;
  EXPECT_EQ(a.normalizer(), b.normalizer());
  EXPECT_NEAR(a.log_unnormalized(0.3), std::log(a.unnormalized(0.3)), 1e-14);
}

TEST(KL, Identity) {
  EXPECT_EQ(kl_divergence(0.5, 0.5), 0.0);
  EXPECT_EQ(kl_divergence(0.123, 0.123), 0.0);
}

TEST(KL, MatchesBruteForce) {
  const double ref = static_cast<double>(oracle::kl_brute(0.5L, 0.6L, 10'000'000));
  EXPECT_NEAR(kl_divergence(0.5, 0.6), ref, 1e-12);
  const double ref2 = static_cast<double>(oracle::kl_brute(0.9L, 0.8L, 2'000'000));
  EXPECT_NEAR(kl_divergence(0.9, 0.8), ref2, 1e-12);
}

TEST(KL, GibbsInequality) {
  std::mt19937_64 g(42);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int i = 0; i < 100; ++i) {
    const double a = u(g), b = u(g);
    EXPECT_GT(kl_divergence(a, b), 0.0) << a << ' ' << b;
  }
}

TEST(KL, Errors) {
  EXPECT_THROW(kl_divergence(0.0, 0.5), DomainError);
  EXPECT_THROW(kl_divergence(0.5, 1.0), DomainError);
}

TEST(LossPrior, M10Golden) {
  const GridPrior p = loss_based_prior(10);
  ASSERT_EQ(p.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_NEAR(p.support[i], (i + 1) / 10.0, 1e-15);
    EXPECT_NEAR(p.masses[i], kLossM10Golden[i], 1e-6) << i;
  }
}

TEST(LossPrior, PositiveIncreasingAndNormalized) {
  for (int m : {10, 20, 100}) {
    const GridPrior p = loss_based_prior(m, {}, 4);
    double total = 0.0;
    for (double w : p.masses) {
      EXPECT_GT(w, 0.0);
      total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_GT(p.masses.back(), p.masses.front()) << m;
    EXPECT_NO_THROW(p.validate());
  }
}

TEST(LossPrior, BitIdenticalAcrossRunsAndWorkers) {
  const GridPrior a = loss_based_prior(20, {}, 1);
  const GridPrior b = loss_based_prior(20, {}, 1);
  const GridPrior c = loss_based_prior(20, {}, 8);
  EXPECT_EQ(a.masses, b.masses);
  EXPECT_EQ(a.masses, c.masses);
}

TEST(LossPrior, NearestIsAdjacent) {
  const auto worth = loss_based_worth(10);
  for (std::size_t i = 0; i < worth.size(); ++i) {
    const auto j = worth[i].nearest;
    EXPECT_TRUE(j + 1 == i || j == i + 1) << i << " -> " << j;
  }
}

TEST(GridPrior, Validation) {
  EXPECT_THROW(GridPrior::grid(2), DomainError);
  EXPECT_THROW(loss_based_prior(2), DomainError);
  GridPrior g = GridPrior::uniform(5);
  EXPECT_NO_THROW(g.validate());
  g.masses[0] += 1e-9;
  EXPECT_THROW(g.validate(), DomainError);
  g = GridPrior::uniform(5);
  g.masses[0] = -g.masses[0];
  EXPECT_THROW(g.validate(), DomainError);
  g = GridPrior::uniform(5);
  g.support.pop_back();
  EXPECT_THROW(g.validate(), DomainError);
  EXPECT_EQ(GridPrior::uniform(10).nearest_index(0.68), 6u);
}
