#include "qflow/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "qflow/errors.hpp"
#include "qflow/init.hpp"

namespace qflow {
namespace {

FieldState uniform_field(const GridGeometry& g, const QTensor& q) {
  FieldState f = make_field(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.set(i, q);
  return f;
}

// Bisection root of fn on [lo,hi]; the analysis oracles use it against the
// closed-form initial profiles.
double bisect(double lo, double hi, const std::function<double(double)>& fn) {
  double flo = fn(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TEST(Analysis, InterfaceRadiusSentinels) {
  const Parameters p = transition_parameters(0.05);
  const GridGeometry g = make_grid(3, 16);
  EXPECT_EQ(interface_radius(uniform_field(g, uniaxial(p.s_plus(), Vec3{0, 0, 1})), p), 0.0);
  EXPECT_EQ(interface_radius(make_field(g), p), 1.0);

  HedgehogProfile prof;
  prof.mesh = {64};
  prof.h.assign(prof.mesh.nodes(), p.s_plus());
  EXPECT_EQ(interface_radius(prof, p), 0.0);
  prof.h.assign(prof.mesh.nodes(), 0.0);
  EXPECT_EQ(interface_radius(prof, p), 1.0);
}

TEST(Analysis, TanhFrontRadiusMatchesClosedFormRoot) {
  // |Q|^2 = (2/3) h(r)^2 crosses h_+^2/3 where h = h_+/sqrt(2), i.e. at
  // r0 + sqrt(Ltilde) atanh(sqrt(2) - 1); the threshold crossing sits that
  // far outside the tanh midpoint, not at the midpoint itself.
  const Parameters p = transition_parameters(0.05);
  const double root = 0.5 + std::sqrt(p.Ltilde) * std::atanh(std::sqrt(2.0) - 1.0);

  InitSpec spec;
  spec.family = InitFamily::CaseI;
  spec.r0 = 0.5;
  RadialMesh mesh{1024};
  const HedgehogProfile prof = generate_hedgehog(spec, mesh, p);
  EXPECT_NEAR(interface_radius(prof, p), root, 1e-5);

  const GridGeometry g = make_grid(3, 64);
  const auto cls = classify(g);
  const FieldState field =
      generate_grid(spec, g, cls, BoundaryScenario::BallRadial, p);
  EXPECT_NEAR(interface_radius(field, p), root, g.h());
}

TEST(Analysis, PlanarPairFrontRadiusMatchesRootFind) {
  const Parameters p = transition_parameters(0.01);
  InitSpec spec;
  spec.family = InitFamily::UvTanh;
  spec.u0 = 0.6;
  spec.v0 = 0.4;
  const double hp = p.h_plus();
  const double sq = std::sqrt(p.Ltilde);
  auto norm_sq_of = [&](double r) {
    const double u = 0.5 * hp * (1.0 + std::tanh((r - spec.u0) / sq));
    const double v = -0.25 * hp * (1.0 + std::tanh((r - spec.v0) / sq));
    return u * u / 2.0 + (2.0 / 3.0) * v * v - p.interface_threshold();
  };
  const double root = bisect(0.3, 0.95, norm_sq_of);
  RadialMesh mesh{512};
  EXPECT_NEAR(interface_radius(generate_uv(spec, mesh, p), p), root, 2.0 * mesh.dr());
}

TEST(Analysis, ScalarDiscFrontRadiusMatchesClosedForm) {
  // 2 s^2 = h_+^2/3 at s = h_+/sqrt(6): tanh(X) = 2/sqrt(6) - 1 there.
  const Parameters p = transition_parameters(0.05);
  const double root =
      0.5 + std::sqrt(p.Ltilde) * std::atanh(2.0 / std::sqrt(6.0) - 1.0);
  InitSpec spec;
  spec.family = InitFamily::S2dTanh;
  spec.r0 = 0.5;
  RadialMesh mesh{512};
  EXPECT_NEAR(interface_radius(generate_s2d(spec, mesh, p), p), root, 1e-4);
}

TEST(Analysis, InterfaceRadiusNeverShrinksUnderScalingTowardZero) {
  const Parameters p = transition_parameters(0.01);
  const GridGeometry g = make_grid(2, 64);
  const auto cls = classify(g);
  InitSpec spec;
  spec.family = InitFamily::UvTanh;
  spec.u0 = 0.6;
  spec.v0 = 0.4;
  FieldState field = generate_grid(spec, g, cls, BoundaryScenario::DiscPlanarUniaxial, p);
  double prev = interface_radius(field, p);
  EXPECT_GT(prev, 0.0);
  for (double alpha : {0.9, 0.6, 0.3, 0.05}) {
    FieldState scaled = field;
    for (int k = 0; k < 5; ++k)
      for (double& v : scaled.comp[k]) v *= alpha;
    const double r = interface_radius(scaled, p);
    EXPECT_GE(r, prev - 1e-12) << "alpha " << alpha;
    prev = r;
  }
  EXPECT_EQ(prev, 1.0);
}

TEST(Analysis, CurvatureFitRecoversExactTrack) {
  InterfaceTrack track;
  track.r0 = 0.75;
  track.spacing = 0.01;
  for (int i = 0; i < 20; ++i) {
    const double t = 0.005 * i;
    track.time.push_back(t);
    track.radius.push_back(std::sqrt(0.5625 - 4.0 * t));
  }
  const CurvatureFit fit3 = mean_curvature_fit(track, 3);
  EXPECT_NEAR(fit3.slope, 4.0, 1e-12);
  EXPECT_NEAR(fit3.intercept, 0.5625, 1e-12);
  EXPECT_GE(fit3.r_squared, 1.0 - 1e-12);
  EXPECT_EQ(fit3.samples_used, 20);
  EXPECT_EQ(fit3.reference, 4.0);
  EXPECT_EQ(mean_curvature_fit(track, 2).reference, 2.0);
}

TEST(Analysis, CurvatureFitWindowStopsAtCollapse) {
  InterfaceTrack track;
  track.r0 = 0.75;
  track.spacing = 0.05;  // collapse cutoff 0.15
  for (int i = 0; i < 15; ++i) {
    const double t = 0.005 * i;
    track.time.push_back(t);
    track.radius.push_back(std::sqrt(0.5625 - 4.0 * t));
  }
  track.time.push_back(0.2);
  track.radius.push_back(0.1);  // collapsed: below 3 spacing
  track.time.push_back(0.21);
  track.radius.push_back(0.3);  // post-collapse rebound stays excluded
  const CurvatureFit fit = mean_curvature_fit(track, 3);
  EXPECT_EQ(fit.samples_used, 15);
  EXPECT_NEAR(fit.slope, 4.0, 1e-12);
}

TEST(Analysis, CurvatureFitRejectsBadInput) {
  InterfaceTrack track;
  track.spacing = 0.01;
  for (int i = 0; i < 9; ++i) {
    track.time.push_back(0.01 * i);
    track.radius.push_back(0.7 - 0.01 * i);
  }
  EXPECT_THROW(mean_curvature_fit(track, 3), ConfigError);
  track.time.push_back(0.09);
  track.radius.push_back(0.6);
  EXPECT_NO_THROW(mean_curvature_fit(track, 3));
  EXPECT_THROW(mean_curvature_fit(track, 5), ConfigError);
  track.radius.pop_back();
  EXPECT_THROW(mean_curvature_fit(track, 3), ConfigError);
}

TEST(Analysis, PredictedFrontFollowsTheCollapseLaw) {
  EXPECT_DOUBLE_EQ(predicted_front(0.75, 4.0, 0.0), 0.75);
  EXPECT_DOUBLE_EQ(predicted_front(0.75, 4.0, 0.078125), 0.5);
  EXPECT_DOUBLE_EQ(predicted_front(0.75, 4.0, 1.0), 0.0);
}

TEST(Analysis, PlanarityResidualSeesOnlyInteriorTilt) {
  const Parameters p = transition_parameters(0.05);
  const GridGeometry g = make_grid(2, 32);
  const auto cls = classify(g);
  InitSpec spec;
  spec.family = InitFamily::UvTanh;
  spec.u0 = 0.6;
  spec.v0 = 0.4;
  FieldState planar = generate_grid(spec, g, cls, BoundaryScenario::DiscPlanarUniaxial, p);
  EXPECT_EQ(planarity_residual(planar, cls), 0.0);

  // Tilt on a non-interior node is invisible to the residual.
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (cls[i] == NodeClass::Exterior) {
      planar.comp[3][i] = 7.0;
      break;
    }
  }
  EXPECT_EQ(planarity_residual(planar, cls), 0.0);

  spec.family = InitFamily::UvPerturbed;
  spec.eps = 1e-3;
  const FieldState tilted =
      generate_grid(spec, g, cls, BoundaryScenario::DiscPlanarUniaxial, p);
  EXPECT_GT(planarity_residual(tilted, cls), 0.0);

  const std::vector<NodeClass> wrong(cls.size() - 1, NodeClass::Interior);
  EXPECT_THROW(planarity_residual(planar, wrong), ConfigError);
}

TEST(Analysis, TStarInterpolationAndSentinels) {
  const Parameters p = transition_parameters(0.05);
  const double tau = p.interface_threshold();
  const std::vector<double> time{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> rising{0.0, 0.05, 0.2, 0.3};
  const double expected = 1.0 + (tau - 0.05) / (0.2 - 0.05);
  EXPECT_NEAR(detect_t_star(time, rising, p), expected, 1e-12);

  const std::vector<double> flat{0.0, 0.01, 0.02, 0.03};
  EXPECT_TRUE(std::isinf(detect_t_star(time, flat, p)));

  const std::vector<double> high{0.2, 0.3, 0.3, 0.3};
  EXPECT_EQ(detect_t_star(time, high, p), 0.0);

  EXPECT_THROW(detect_t_star(time, {0.0, 0.1}, p), ConfigError);
}

TEST(Analysis, TStarStableUnderCadenceRefinement) {
  const Parameters p = transition_parameters(0.05);
  const double tau = p.interface_threshold();
  auto value = [](double t) { return 0.3 * t * t; };
  const double analytic = std::sqrt(tau / 0.3);

  auto sampled = [&](double tick) {
    std::vector<double> time, qsq;
    for (double t = 0; t <= 1.0 + 1e-12; t += tick) {
      time.push_back(t);
      qsq.push_back(value(t));
    }
    return detect_t_star(time, qsq, p);
  };
  const double coarse = sampled(0.05);
  const double dense = sampled(0.001);
  EXPECT_NEAR(dense, analytic, 1e-4);
  EXPECT_LT(std::abs(coarse - dense), 0.05);
}

TEST(Analysis, DeviationVanishesOnTargetAndSeesBumps) {
  const Parameters p = transition_parameters(0.05);
  const GridGeometry g = make_grid(2, 64);
  const FieldState target = reference_escaped(g, p);
  const DeviationReport same = harmonic_map_deviation(target, target, p);
  EXPECT_EQ(same.max_norm, 0.0);
  EXPECT_EQ(same.l2_norm, 0.0);

  // A bump below the exclusion radius stays invisible; one inside the
  // window is reported at full size.
  FieldState bumped = target;
  const std::size_t origin_adjacent = g.index2(g.origin_axis_index() + 1, g.origin_axis_index());
  QTensor q = bumped.at(origin_adjacent);
  q.q12 += 0.2;
  bumped.set(origin_adjacent, q);
  const DeviationReport hidden = harmonic_map_deviation(bumped, target, p);
  EXPECT_EQ(hidden.max_norm, 0.0);

  const std::size_t mid = g.index2(g.origin_axis_index() + g.N / 4, g.origin_axis_index());
  q = bumped.at(mid);
  q.q12 += 0.2;
  bumped.set(mid, q);
  const DeviationReport seen = harmonic_map_deviation(bumped, target, p);
  EXPECT_NEAR(seen.max_norm, std::sqrt(2.0) * 0.2, 1e-12);

  const GridGeometry other = make_grid(2, 32);
  EXPECT_THROW(harmonic_map_deviation(target, reference_escaped(other, p), p), ConfigError);
}

TEST(Analysis, NormalizedDeviationMeasuresOrientation) {
  // The normalized comparison puts a unit tensor against the reference
  // shape of norm sqrt(2/3), so even a perfectly aligned uniaxial field
  // sits at the constant offset 1 - sqrt(2/3); orientation mismatch adds
  // on top of that floor.
  const Parameters p = transition_parameters(0.05);
  const GridGeometry g = make_grid(3, 32);
  const FieldState target = reference_radial(g, p);
  const DeviationReport aligned = harmonic_map_deviation(target, target, p, true);
  const double floor = 1.0 - std::sqrt(2.0 / 3.0);
  EXPECT_NEAR(aligned.max_norm, floor, 1e-12);

  // Scaling the field leaves the normalized comparison unchanged.
  FieldState scaled = target;
  for (int k = 0; k < 5; ++k)
    for (double& v : scaled.comp[k]) v *= 0.2;
  const DeviationReport still = harmonic_map_deviation(scaled, target, p, true);
  EXPECT_NEAR(still.max_norm, floor, 1e-12);

  // A field below the 1e-6 cut is skipped entirely.
  const DeviationReport empty = harmonic_map_deviation(make_field(g), target, p, true);
  EXPECT_EQ(empty.max_norm, 0.0);
  EXPECT_EQ(empty.l2_norm, 0.0);

  // A z-axis field against the radial reference is maximally misaligned on
  // the equator, far above the alignment floor.
  const FieldState crossed = uniform_field(g, uniaxial(p.s_plus(), Vec3{0, 0, 1}));
  const DeviationReport misaligned = harmonic_map_deviation(crossed, target, p, true);
  EXPECT_GT(misaligned.max_norm, 1.0);
}

TEST(Analysis, EigenvalueProfileRows) {
  const Parameters p = transition_parameters(0.01);
  const GridGeometry g = make_grid(3, 64);
  const FieldState uniform = uniform_field(g, uniaxial(p.s_plus(), Vec3{0, 0, 1}));
  const auto rows = eigenvalue_profile(uniform, Vec3{1, 0, 0});
  ASSERT_EQ(rows.size(), static_cast<std::size_t>(g.N / 2 + 1));
  for (const EigenRow& row : rows) {
    EXPECT_NEAR(row.value[0], -0.203175, 1e-6);
    EXPECT_NEAR(row.value[1], -0.203175, 1e-6);
    EXPECT_NEAR(row.value[2], 0.406349, 1e-6);
  }
  EXPECT_DOUBLE_EQ(rows[8].r, 8 * g.h());

  for (const EigenRow& row : eigenvalue_profile(make_field(g), Vec3{0, 0, 1}))
    for (double v : row.value) EXPECT_EQ(v, 0.0);

  InitSpec spec;
  spec.family = InitFamily::BiaxialSphere;
  spec.r0 = 0.5;
  const auto cls = classify(g);
  const FieldState biax = generate_grid(spec, g, cls, BoundaryScenario::BallRadial, p);
  const auto brows = eigenvalue_profile(biax, Vec3{1, 0, 0});
  const EigenRow& at_half = brows[g.N / 4];  // r = 0.5
  EXPECT_NEAR(at_half.r, 0.5, 1e-12);
  EXPECT_GT(at_half.value[1] - at_half.value[0], 0.02);
  EXPECT_GT(at_half.value[2] - at_half.value[1], 0.02);

  EXPECT_THROW(eigenvalue_profile(uniform, Vec3{0, 0, 0}), ConfigError);
  const FieldState disc = make_field(make_grid(2, 16));
  EXPECT_THROW(eigenvalue_profile(disc, Vec3{0, 0, 1}), ConfigError);
}

TEST(Analysis, WeightedEnergyOfZeroProfile) {
  const Parameters p = transition_parameters(0.05);
  HedgehogProfile prof;
  prof.mesh = {256};
  prof.h.assign(prof.mesh.nodes(), 0.0);
  const WeightedEnergyDiag diag = weighted_energy(prof, 0.5, p);
  EXPECT_EQ(diag.e_phi, 0.0);
  // g(w) = 0, so the mass is g(h_+) times the measure right of the front.
  EXPECT_NEAR(diag.g_mass, diag.g_reference * 0.5, 0.01 * diag.g_reference);
}

TEST(Analysis, WeightedEnergyRejectsFrontOutsideTheDomain) {
  const Parameters p = transition_parameters(0.05);
  HedgehogProfile prof;
  prof.mesh = {64};
  prof.h.assign(prof.mesh.nodes(), 0.0);
  for (double rho : {0.0, 1.0, -0.2, 1.5})
    EXPECT_THROW(weighted_energy(prof, rho, p), ConfigError);
}

TEST(Analysis, MovingFrameWeightIsOneAtTheFront) {
  for (double rho : {0.1, 0.5, 0.75, 0.99}) {
    EXPECT_DOUBLE_EQ(moving_frame_weight(0.0, rho), 1.0);
    EXPECT_EQ(moving_frame_weight(-rho, rho), 0.0);
    EXPECT_LT(moving_frame_weight(0.3 * rho, rho), 1.0);
  }
  EXPECT_NEAR(moving_frame_weight(0.5, 0.5), 4.0 * std::exp(-2.0), 1e-15);
  EXPECT_THROW(moving_frame_weight(0.0, 0.0), ConfigError);
}

TEST(Analysis, FrontEnergyScaleMatchesQuadrature) {
  const Parameters p = transition_parameters(0.05);
  const double hp = p.h_plus();
  // Simpson quadrature of (2/sqrt 3) integral of w (h_+ - w): exact for a
  // quadratic integrand, so this is an independent route to g.
  auto simpson = [&](double s) {
    const int n = 64;
    const double dw = s / n;
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      const double a = i * dw, b = a + dw, m = a + dw / 2;
      acc += (a * (hp - a) + 4.0 * m * (hp - m) + b * (hp - b)) * dw / 6.0;
    }
    return 2.0 / std::sqrt(3.0) * acc;
  };
  EXPECT_NEAR(front_energy_scale(hp, p), hp * hp * hp / (3.0 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(front_energy_scale(hp, p), simpson(hp), 1e-12);
  EXPECT_NEAR(front_energy_scale(hp, p), 0.043580, 1e-5);
  EXPECT_EQ(front_energy_scale(0.0, p), 0.0);

  double prev = 0;
  for (int i = 1; i <= 100; ++i) {
    const double g = front_energy_scale(hp * i / 100.0, p);
    EXPECT_GE(g, prev);
    EXPECT_NEAR(g, simpson(hp * i / 100.0), 1e-12);
    prev = g;
  }
}

TEST(Analysis, SmoothedStepEnergyApproachesTheInterfaceEnergy) {
  // The logistic profile is the exact minimizer of the unweighted
  // gradient/potential pair, so its weighted energy exceeds g(h_+) only by
  // the geometric tail, which shrinks with the elastic constant.
  const double rho = 0.5;
  RadialMesh mesh{4096};
  double prev_excess = std::numeric_limits<double>::infinity();
  for (double lt : {0.05, 0.025, 0.0125}) {
    const Parameters p = transition_parameters(lt);
    const double rate = std::sqrt(3.0) * p.h_plus() / std::sqrt(p.Lbar());
    HedgehogProfile prof;
    prof.mesh = mesh;
    prof.h.resize(mesh.nodes());
    for (int j = 0; j < mesh.nodes(); ++j)
      prof.h[j] = p.h_plus() / (1.0 + std::exp(-rate * (mesh.r(j) - rho)));
    const WeightedEnergyDiag diag = weighted_energy(prof, rho, p);
    const double excess = diag.e_phi - diag.g_reference;
    EXPECT_GT(excess, 0.0);
    EXPECT_LT(excess, std::pow(p.Lbar(), 0.25));
    EXPECT_LT(excess, prev_excess);
    prev_excess = excess;
  }
}

TEST(Analysis, FrontWeightNormalization) {
  EXPECT_DOUBLE_EQ(front_weight(0.75, 0.75), 1.0 / (0.75 * 0.75));
  EXPECT_GT(front_weight(0.5, 0.75), front_weight(0.9, 0.75));
  EXPECT_THROW(front_weight(0.5, 0.0), ConfigError);
}

TEST(Analysis, OperationsLeaveTheFieldUntouched) {
  const Parameters p = transition_parameters(0.05);
  const GridGeometry g = make_grid(2, 32);
  const auto cls = classify(g);
  InitSpec spec;
  spec.family = InitFamily::UvTanh;
  spec.u0 = 0.6;
  spec.v0 = 0.4;
  const FieldState field =
      generate_grid(spec, g, cls, BoundaryScenario::DiscPlanarUniaxial, p);
  const FieldState copy = field;
  interface_radius(field, p);
  planarity_residual(field, cls);
  harmonic_map_deviation(field, copy, p);
  eigenvalue_profile(field, Vec3{1, 0, 0});
  for (int k = 0; k < 5; ++k) EXPECT_EQ(field.comp[k], copy.comp[k]);
}

TEST(Analysis, HedgehogCollapseFollowsMeanCurvature) {
  // Front at 0.75 collapsing under the radial flow: the fitted slope of
  // r*^2 = r0^2 - c t lands near the exact collapse rate 4 with a tight
  // linear fit over the window before rho reaches 1/2.
  const Parameters p = transition_parameters(0.01);
  InitSpec spec;
  spec.family = InitFamily::CaseI;
  spec.r0 = 0.75;
  RadialMesh mesh{1024};
  HedgehogProfile prof = generate_hedgehog(spec, mesh, p);

  const double t_end = 0.0625;  // 0.8 of the time for the front to reach 1/2
  const double dt = stable_dt_hedgehog(mesh, p);
  const int chunk = 2000;
  InterfaceTrack track;
  track.r0 = spec.r0;
  track.spacing = mesh.dr();
  track.time.push_back(prof.time);
  track.radius.push_back(interface_radius(prof, p));
  while (prof.time < t_end) {
    step_hedgehog(prof, p, dt, chunk);
    track.time.push_back(prof.time);
    track.radius.push_back(interface_radius(prof, p));
  }
  const CurvatureFit fit = mean_curvature_fit(track, 3);
  EXPECT_NEAR(fit.slope, 4.0, 0.6);
  EXPECT_GE(fit.r_squared, 0.99);
  EXPECT_NEAR(predicted_front(track.r0, fit.slope, 0.0), 0.75, 1e-12);
}

}  // namespace
}  // namespace qflow
