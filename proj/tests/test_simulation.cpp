#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "mgvp/monte_carlo.h"
#include "mgvp/simulation.h"

namespace mgvp {
namespace {

constexpr double kRlUnitIncrementValue = 1.06635668218259139833119494089;  // mpmath: kbar(1, cell 0), H=.75, n=4

TEST(MixParams, RejectsDegenerateChannel) {
  try {
    MixParams p(0.0, 0.0);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "degenerate observation channel");
  }
  const MixParams p(3.0, 4.0);
  EXPECT_DOUBLE_EQ(p.gain(), 3.0 / 25.0);
  EXPECT_DOUBLE_EQ(p.information(), 9.0 / 25.0);
  EXPECT_DOUBLE_EQ(p.residual_share(), 16.0 / 25.0);
}

TEST(DrawNoise, DeterministicPerSeedAndPath) {
  const TimeGrid g(1.0, 32);
  const NoiseDraw a = draw_noise(g, 42, 3);
  const NoiseDraw b = draw_noise(g, 42, 3);
  EXPECT_EQ(a.dW, b.dW);
  EXPECT_EQ(a.dWt, b.dWt);
  EXPECT_NE(a.dW, draw_noise(g, 42, 4).dW);
  EXPECT_NE(a.dW, draw_noise(g, 43, 3).dW);
  EXPECT_NE(a.dW, a.dWt);
  EXPECT_EQ(a.dW.size(), 32u);
}

TEST(DrawNoise, IncrementVarianceAndIndependence) {
  const TimeGrid g(1.0, 8);
  const std::size_t n = 100000;
  const std::size_t cell = 5;
  PairMoments m = reduce_paths<PairMoments>(
      n, [] { return PairMoments(2, {{0, 1}}); },
      [&](PairMoments& acc, std::size_t p) {
        const NoiseDraw d = draw_noise(g, 42, p);
        const double x[2] = {d.dW[cell], d.dWt[cell]};
        acc.add(x);
      });
  EXPECT_NEAR(m.variance(0) / g.dt(), 1.0, 0.02);
  EXPECT_NEAR(m.variance(1) / g.dt(), 1.0, 0.02);
  const double corr = m.covariance(0).value / std::sqrt(m.variance(0) * m.variance(1));
  EXPECT_LT(std::abs(corr), 0.01);
}

TEST(BuildPath, BrownianIsPartialSum) {
  const TimeGrid g(1.0, 2);
  const std::vector<double> inc{0.5, -0.2};
  const auto x = build_path(VolterraKernel::brownian(), inc, g);
  ASSERT_EQ(x.size(), 3u);
  EXPECT_EQ(x[0], 0.0);
  EXPECT_DOUBLE_EQ(x[1], 0.5);
  EXPECT_DOUBLE_EQ(x[2], 0.3);
}

TEST(BuildPath, ZeroIncrementsGiveZeroPath) {
  const TimeGrid g(1.0, 16);
  for (double v : build_path(VolterraKernel::riemann_liouville(0.3), std::vector<double>(16, 0.0), g)) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(BuildPath, SingleIncrementPicksCellAverage) {
  const TimeGrid g(1.0, 4);
  const auto k = VolterraKernel::riemann_liouville(0.75);
  const auto x = build_path(k, std::vector<double>{1.0, 0.0, 0.0, 0.0}, g);
  EXPECT_EQ(x[4], cell_integral(k, 1.0, 0, g) / 0.25);
  EXPECT_NEAR(x[4], kRlUnitIncrementValue, 1e-14);
}

TEST(BuildPath, LengthMismatchFails) {
  const TimeGrid g(1.0, 4);
  EXPECT_THROW(build_path(VolterraKernel::brownian(), std::vector<double>{1.0}, g), std::invalid_argument);
}

TEST(Mix, Examples) {
  NoiseDraw d;
  d.dW = {0.1, 0.2};
  d.dWt = {-0.05, 0.7};
  EXPECT_EQ(mix(d, MixParams(1.0, 0.0)), d.dW);
  EXPECT_EQ(mix(d, MixParams(0.0, 1.0)), d.dWt);
  EXPECT_NEAR(mix(d, MixParams(3.0, 4.0))[0], 0.1, 1e-15);
}

TEST(MakeBundle, InvariantsHold) {
  const TimeGrid g(1.0, 16);
  const KernelMatrix km(VolterraKernel::exponential_ou(1.5, 0.7), g);
  const NoiseDraw d = draw_noise(g, 9, 1);
  const MixParams p(0.8, 1.3);
  const PathBundle b = make_bundle(km, d, p);
  EXPECT_EQ(b.X[0], 0.0);
  EXPECT_EQ(b.Xt[0], 0.0);
  EXPECT_EQ(b.Xb[0], 0.0);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(b.dWab[j], 0.8 * d.dW[j] + 1.3 * d.dWt[j]);
  for (std::size_t i = 0; i <= 16; ++i) EXPECT_EQ(b.Xb[i], b.X[i] + 1.3 * b.Xt[i]);
  EXPECT_EQ(b.X, build_path(km, d.dW));
}

TEST(MakeBundle, NoiselessAndBrownianCases) {
  const TimeGrid g(1.0, 16);
  const NoiseDraw d = draw_noise(g, 1, 0);
  const PathBundle quiet = make_bundle(VolterraKernel::riemann_liouville(0.7), d, MixParams(2.0, 0.0), g);
  EXPECT_EQ(quiet.Xb, quiet.X);

  const PathBundle bm = make_bundle(VolterraKernel::brownian(), d, MixParams(1.0, 1.0), g);
  double w = 0.0, wt = 0.0;
  for (std::size_t j = 0; j < 16; ++j) {
    w += d.dW[j];
    wt += d.dWt[j];
  }
  EXPECT_NEAR(bm.Xb[16], w + wt, 1e-14);
}

// Var(X_t), Cov(X_t, X_s) and Var(X^b_t) against kernel_core, plus the
// independence of the two copies.
TEST(Simulation, MonteCarloMomentsMatchCovariance) {
  const TimeGrid g(1.0, 32);
  const std::size_t n = 100000;
  const double b = 1.5;
  for (const auto& kernel : {VolterraKernel::brownian(), VolterraKernel::riemann_liouville(0.3),
                             VolterraKernel::riemann_liouville(0.8), VolterraKernel::exponential_ou(2.0, 1.0)}) {
    const KernelMatrix km(kernel, g);
    const std::size_t it = 32, is = 12;
    // vars: X_t, X_s, Xt_t, Xb_t
    const PairMoments m = reduce_paths<PairMoments>(
        n, [] { return PairMoments(4, {{0, 1}, {0, 2}}); },
        [&](PairMoments& acc, std::size_t p) {
          const NoiseDraw d = draw_noise(g, 42, p);
          const double xt = path_value(km, d.dW, it);
          const double xs = path_value(km, d.dW, is);
          const double yt = path_value(km, d.dWt, it);
          const double v[4] = {xt, xs, yt, xt + b * yt};
          acc.add(v);
        });
    const double r_tt = covariance(km, it, it);
    const double tol = 3.0 * std::sqrt(2.0 / n);
    EXPECT_LE(std::abs(m.variance(0) / r_tt - 1.0), tol) << kernel.describe();
    EXPECT_LE(std::abs(m.variance(3) / ((1.0 + b * b) * r_tt) - 1.0), 0.02) << kernel.describe();
    const auto c = m.covariance(0);
    EXPECT_LE(std::abs(c.value - covariance(km, it, is)), 3.0 * c.standard_error) << kernel.describe();
    const double corr = m.covariance(1).value / std::sqrt(m.variance(0) * m.variance(2));
    EXPECT_LE(std::abs(corr), 3.0 / std::sqrt(static_cast<double>(n))) << kernel.describe();
  }
}

TEST(ReducePaths, ResultIndependentOfWorkerCount) {
  const TimeGrid g(1.0, 8);
  auto run = [&](std::size_t workers) {
    return reduce_paths<PairMoments>(
        5000, [] { return PairMoments(1, {{0, 0}}); },
        [&](PairMoments& acc, std::size_t p) {
          const double x = draw_noise(g, 5, p).dW[3];
          acc.add(std::span<const double>(&x, 1));
        },
        workers);
  };
  const PairMoments one = run(1);
  for (std::size_t w : {2u, 3u, 8u}) {
    const PairMoments many = run(w);
    EXPECT_EQ(one.count(), many.count());
    EXPECT_EQ(one.mean(0), many.mean(0));
    EXPECT_EQ(one.covariance(0).value, many.covariance(0).value);
    EXPECT_EQ(one.covariance(0).standard_error, many.covariance(0).standard_error);
  }
}

}  // namespace
}  // namespace mgvp
