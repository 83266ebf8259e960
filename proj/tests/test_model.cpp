#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qflow/bulk.hpp"
#include "qflow/errors.hpp"
#include "qflow/params.hpp"
#include "qflow/tensor.hpp"

using namespace qflow;

TEST(Params, DerivedScales) {
  Parameters p = transition_parameters(0.05);
  EXPECT_NEAR(p.A, 433.4391534391534, 1e-10);
  EXPECT_NEAR(p.h_plus(), 0.6095238095238096, 1e-15);
  EXPECT_DOUBLE_EQ(p.s_plus(), p.h_plus());
  EXPECT_NEAR(p.bound_q(), 0.4976741064702331, 1e-12);
  EXPECT_NEAR(p.well_norm_sq(), 0.2476795162509448, 1e-13);
  EXPECT_NEAR(p.interface_threshold(), 0.1238397581254724, 1e-13);
  EXPECT_NEAR(p.Lbar(), 1.2857142857142857e-4, 1e-18);
  EXPECT_NEAR(transition_parameters(0.01).Lbar(), 2.5714285714285714e-5, 1e-19);
}

TEST(Params, PhysicalClock) {
  Parameters p = transition_parameters(0.01);
  EXPECT_NEAR(p.physical_seconds(0.0625), 0.3125, 1e-15);
  EXPECT_NEAR(transition_parameters(0.05).physical_seconds(1.0), 1.0, 1e-15);
}

TEST(Params, Presets) {
  EXPECT_NEAR(parameter_preset("transition-L0.05").Ltilde, 0.05, 1e-15);
  EXPECT_NEAR(parameter_preset("transition-L0.01").Ltilde, 0.01, 1e-15);
  EXPECT_THROW(parameter_preset("unknown"), ConfigError);
  EXPECT_THROW(transition_parameters(-1.0), ConfigError);
}

TEST(Bulk, DegenerateWells) {
  Parameters p = transition_parameters(0.05);
  EXPECT_DOUBLE_EQ(bulk_potential(p, QTensor{}), 0.0);
  // at the transition temperature the nematic well is exactly degenerate
  QTensor well = uniaxial(p.h_plus(), normalized(Vec3{0.2, -0.3, 0.93}));
  EXPECT_NEAR(bulk_potential(p, well), 0.0, 1e-9);
  // everywhere else the potential is positive
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> d(-0.4, 0.4);
  for (int t = 0; t < 100; ++t) {
    QTensor q{d(gen), d(gen), d(gen), d(gen), d(gen)};
    EXPECT_GE(bulk_potential(p, q), -1e-9);
  }
}

TEST(Bulk, HalfWellBarrier) {
  Parameters p = transition_parameters(0.05);
  QTensor mid = uniaxial(p.s_plus() / 2.0, Vec3{0, 0, 1});
  EXPECT_NEAR(bulk_potential(p, mid), 3.3548124952508926, 1e-8);
  EXPECT_NEAR(bulk_potential(p, mid), (p.C / 144.0) * std::pow(p.s_plus(), 4), 1e-10);
}

TEST(Bulk, ReactionVanishesAtCriticalPoints) {
  Parameters p = transition_parameters(0.05);
  QTensor z = reaction(p, QTensor{});
  for (int k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(z.comp(k), 0.0);
  for (const Vec3& n : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, normalized(Vec3{1, 2, -2})}) {
    QTensor r = reaction(p, uniaxial(p.h_plus(), n));
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(r.comp(k), 0.0, 1e-9);
  }
}

// Independent route: finite differences of the scalar potential in the five
// stored coordinates, Richardson-extrapolated, then mapped to the tensor
// metric. With g_k = df/dq_k the tensor gradient T has
//   T11 = (2 g1 - g2)/3, T22 = (2 g2 - g1)/3, T12 = g3/2, T13 = g4/2,
//   T23 = g5/2,
// and reaction(Q) must equal -T.
TEST(Bulk, ReactionMatchesPotentialGradient) {
  Parameters p = transition_parameters(0.05);
  std::mt19937 gen(29);
  std::uniform_real_distribution<double> d(-0.28, 0.28);
  for (int t = 0; t < 25; ++t) {
    QTensor q{d(gen), d(gen), d(gen), d(gen), d(gen)};
    double g[5];
    for (int k = 0; k < 5; ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(q.comp(k)));
      auto diff = [&](double step) {
        QTensor qp = q, qm = q;
        qp.comp(k) += step;
        qm.comp(k) -= step;
        return (bulk_potential(p, qp) - bulk_potential(p, qm)) / (2.0 * step);
      };
      g[k] = (4.0 * diff(h / 2.0) - diff(h)) / 3.0;
    }
    const QTensor r = reaction(p, q);
    const double scale = std::max(1.0, qnorm(r));
    EXPECT_NEAR(r.q11, -(2.0 * g[0] - g[1]) / 3.0, 1e-6 * scale);
    EXPECT_NEAR(r.q22, -(2.0 * g[1] - g[0]) / 3.0, 1e-6 * scale);
    EXPECT_NEAR(r.q12, -g[2] / 2.0, 1e-6 * scale);
    EXPECT_NEAR(r.q13, -g[3] / 2.0, 1e-6 * scale);
    EXPECT_NEAR(r.q23, -g[4] / 2.0, 1e-6 * scale);
  }
}

TEST(Bulk, EvalBundlesBothRoutes) {
  Parameters p = transition_parameters(0.01);
  QTensor q{0.1, -0.05, 0.2, 0.03, -0.07};
  BulkEval e = bulk_eval(p, q);
  EXPECT_DOUBLE_EQ(e.value, bulk_potential(p, q));
  QTensor r = reaction(p, q);
  for (int k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(e.minus_gradient.comp(k), r.comp(k));
}

TEST(Bulk, RateBoundIsDeterministicAndDominatesOrigin) {
  Parameters p = transition_parameters(0.05);
  const double b1 = reaction_rate_bound(p);
  const double b2 = reaction_rate_bound(p);
  EXPECT_DOUBLE_EQ(b1, b2);
  // the Jacobian at Q = 0 is -A I, so the bound must exceed 1.25 A
  EXPECT_GE(b1, 1.25 * p.A);
  EXPECT_LT(b1, 20000.0);
}

TEST(Bulk, EscapeProbeShape) {
  std::vector<double> r{0.0, 0.5, 1.0};
  std::vector<double> psi = escape_probe(r);
  EXPECT_DOUBLE_EQ(psi[0], 0.0);
  EXPECT_NEAR(psi[1], 0.5408653846153846, 1e-15);
  EXPECT_NEAR(psi[2], 0.0, 1e-15);
}
