#include "qflow/config.hpp"

#include <gtest/gtest.h>

#include <string>

#include "qflow/errors.hpp"

using namespace qflow;

namespace {

/// EXPECT a ConfigError whose message contains every given fragment.
void expect_config_error(const std::string& text,
                         std::initializer_list<const char*> fragments) {
  try {
    parse_config(text);
    FAIL() << "expected ConfigError for:\n" << text;
  } catch (const ConfigError& err) {
    const std::string msg = err.what();
    for (const char* frag : fragments) {
      EXPECT_NE(msg.find(frag), std::string::npos)
          << "message \"" << msg << "\" lacks \"" << frag << "\"";
    }
  }
}

bool same_run(const RunConfig& a, const RunConfig& b) {
  return a.kind == b.kind && a.dim == b.dim && a.n == b.n && a.m == b.m &&
         a.ltilde == b.ltilde && a.family == b.family &&
         a.boundary == b.boundary && a.r0 == b.r0 && a.u0 == b.u0 &&
         a.v0 == b.v0 && a.epsilon == b.epsilon && a.t_end == b.t_end &&
         a.dt == b.dt && a.stencil == b.stencil &&
         a.series_every == b.series_every &&
         a.snapshot_every == b.snapshot_every && a.out == b.out &&
         a.threads == b.threads;
}

TEST(Config, ParsesMinimalGridConfig) {
  const RunConfig cfg = parse_config(
      "kind = grid\n"
      "dim = 2\n"
      "n = 32\n"
      "family = uv_tanh\n"
      "boundary = disc_planar_uniaxial\n"
      "t_end = 0.1\n");
  EXPECT_EQ(cfg.kind, RunKind::Grid);
  EXPECT_EQ(cfg.dim, 2);
  EXPECT_EQ(cfg.n, 32);
  EXPECT_EQ(cfg.family, InitFamily::UvTanh);
  EXPECT_EQ(cfg.boundary, BoundaryScenario::DiscPlanarUniaxial);
  EXPECT_DOUBLE_EQ(cfg.t_end, 0.1);
  EXPECT_DOUBLE_EQ(cfg.ltilde, 0.05);
  EXPECT_EQ(cfg.series_every, 200);
  EXPECT_EQ(cfg.dt, 0.0);
  EXPECT_EQ(cfg.out, "out");
  EXPECT_TRUE(cfg.scenario.empty());
}

TEST(Config, ScenarioLineExpandsThePreset) {
  const RunConfig cfg = parse_config("scenario = case1_ball_L001\n");
  EXPECT_EQ(cfg.scenario, "case1_ball_L001");
  EXPECT_EQ(cfg.kind, RunKind::Grid);
  EXPECT_EQ(cfg.dim, 3);
  EXPECT_EQ(cfg.n, 256);
  EXPECT_DOUBLE_EQ(cfg.ltilde, 0.01);
  EXPECT_EQ(cfg.family, InitFamily::CaseI);
  EXPECT_DOUBLE_EQ(cfg.r0, 0.5);
  EXPECT_DOUBLE_EQ(cfg.t_end, 0.125);
}

TEST(Config, KeysAfterScenarioOverrideThePreset) {
  const RunConfig cfg = parse_config(
      "scenario = case1_ball_L001\n"
      "n = 128\n"
      "t_end = 0.02\n");
  EXPECT_EQ(cfg.n, 128);
  EXPECT_DOUBLE_EQ(cfg.t_end, 0.02);
  EXPECT_DOUBLE_EQ(cfg.ltilde, 0.01);
}

TEST(Config, ScenarioKeyWinsRegardlessOfLineOrder) {
  const RunConfig cfg = parse_config(
      "n = 128\n"
      "scenario = case1_ball_L001\n");
  EXPECT_EQ(cfg.n, 128);
  EXPECT_DOUBLE_EQ(cfg.ltilde, 0.01);
}

TEST(Config, EmptyConfigListsRequiredKeys) {
  expect_config_error("", {"scenario", "kind", "t_end"});
  expect_config_error("# only a comment\n\n", {"scenario", "kind"});
}

TEST(Config, CommentsAndBlankLinesAreIgnored) {
  const RunConfig cfg = parse_config(
      "# front collapse study\n"
      "\n"
      "kind = hedgehog   # reduced model\n"
      "m = 64\n"
      "family = case1\n"
      "t_end = 0.01\n");
  EXPECT_EQ(cfg.kind, RunKind::Hedgehog);
  EXPECT_EQ(cfg.m, 64);
}

TEST(Config, DuplicateKeyCitesBothLines) {
  expect_config_error(
      "kind = grid\n"
      "n = 32\n"
      "n = 64\n",
      {"line 3", "duplicate", "n", "line 2"});
}

TEST(Config, UnknownKeyCitesItsLine) {
  expect_config_error(
      "kind = grid\n"
      "wibble = 3\n",
      {"line 2", "wibble"});
}

TEST(Config, EpsilonRangeErrorCitesItsLine) {
  expect_config_error(
      "scenario = perturbed_disc_L005\n"
      "epsilon = -0.1\n",
      {"line 2", "epsilon"});
  expect_config_error(
      "scenario = perturbed_disc_L005\n"
      "epsilon = 1.0\n",
      {"line 2", "epsilon"});
}

TEST(Config, MalformedValuesAreRejectedWithLines) {
  expect_config_error("kind = grid\nt_end = banana\n", {"line 2", "banana"});
  expect_config_error("kind = grid\nn = 12.5\n", {"line 2", "integer"});
  expect_config_error("kind = grid\nn\n", {"line 2", "key = value"});
  expect_config_error("kind = grid\n= 3\n", {"line 2", "empty key"});
}

TEST(Config, ParameterPresetKeySetsTheElasticConstant) {
  const RunConfig cfg = parse_config(
      "kind = hedgehog\n"
      "m = 64\n"
      "family = case1\n"
      "t_end = 0.01\n"
      "params = transition-L0.01\n");
  EXPECT_DOUBLE_EQ(cfg.ltilde, 0.01);
  expect_config_error("kind = grid\nparams = transition-L9\n",
                      {"line 2", "transition-L9"});
}

TEST(Config, ParamsAndLtildeConflictEitherOrder) {
  expect_config_error(
      "kind = grid\n"
      "ltilde = 0.02\n"
      "params = transition-L0.05\n",
      {"line 3", "line 2"});
  expect_config_error(
      "kind = grid\n"
      "params = transition-L0.05\n"
      "ltilde = 0.02\n",
      {"line 3", "line 2"});
}

TEST(Config, UnknownScenarioListsTheCatalog) {
  expect_config_error("scenario = nope\n",
                      {"line 1", "nope", "case1_ball_L001"});
}

TEST(Config, MissingKindSpecificKeysAreListed) {
  expect_config_error("kind = hedgehog\nm = 64\n", {"family", "t_end"});
  expect_config_error("kind = grid\nn = 32\nfamily = case1\n",
                      {"boundary", "t_end"});
  expect_config_error("kind = uv_static\n", {"m"});
}

TEST(Config, RangeChecksRejectBoundaryValues) {
  expect_config_error("kind = grid\nr0 = 0\n", {"line 2", "r0"});
  expect_config_error("kind = grid\nr0 = 1\n", {"line 2", "r0"});
  expect_config_error("kind = grid\nn = 15\n", {"line 2", "even"});
  expect_config_error("kind = grid\nn = 8\n", {"line 2", "16"});
  expect_config_error("kind = grid\nm = 4\n", {"line 2", "8"});
  expect_config_error("kind = grid\nltilde = 0\n", {"line 2", "positive"});
  expect_config_error("kind = grid\nseries_every = 0\n", {"line 2"});
  expect_config_error("kind = grid\nthreads = -1\n", {"line 2"});
}

TEST(Config, OverridesApplyInOrderAndValidate) {
  RunConfig cfg = scenario_preset("case1_ball_L005");
  apply_overrides(cfg, {"n=64", "t_end=0.01", "t_end=0.02"});
  EXPECT_EQ(cfg.n, 64);
  EXPECT_DOUBLE_EQ(cfg.t_end, 0.02);

  RunConfig bad = scenario_preset("case1_ball_L005");
  EXPECT_THROW(apply_overrides(bad, {"scenario=case2_ball_L005"}), ConfigError);
  try {
    apply_overrides(bad, {"n=13"});
    FAIL();
  } catch (const ConfigError& err) {
    EXPECT_NE(std::string(err.what()).find("--set"), std::string::npos);
  }
}

TEST(Config, FamilyKindCompatibilityIsEnforced) {
  EXPECT_THROW(parse_config("kind = hedgehog\nm = 64\nfamily = uv_tanh\n"
                            "t_end = 0.01\n"),
               ConfigError);
  EXPECT_THROW(parse_config("kind = s2d\nm = 64\nfamily = case1\n"
                            "t_end = 0.01\n"),
               ConfigError);
  EXPECT_THROW(parse_config("kind = uv\nm = 64\nfamily = s2d_tanh\n"
                            "t_end = 0.01\n"),
               ConfigError);
  EXPECT_NO_THROW(parse_config("kind = s2d\nm = 64\nfamily = step_front\n"
                               "t_end = 0.01\n"));
  EXPECT_NO_THROW(parse_config("kind = uv\nm = 64\nfamily = uv_static\n"
                               "t_end = 0.01\n"));
}

TEST(Config, EveryPresetValidatesAndRoundTripsThroughRender) {
  const std::vector<std::string> names = scenario_names();
  EXPECT_EQ(names.size(), 14u);
  for (const std::string& name : names) {
    SCOPED_TRACE(name);
    const RunConfig cfg = scenario_preset(name);
    EXPECT_EQ(cfg.scenario, name);
    EXPECT_NO_THROW(validate_run(cfg));
    const RunConfig back = parse_config(render_config(cfg));
    EXPECT_TRUE(same_run(cfg, back));
  }
}

TEST(Config, PresetCatalogPinsThePublishedScenarios) {
  const RunConfig biax = scenario_preset("biaxial_ball_L001");
  EXPECT_EQ(biax.family, InitFamily::BiaxialSphere);
  EXPECT_EQ(biax.n, 256);
  EXPECT_DOUBLE_EQ(biax.t_end, 0.085);

  const RunConfig uv = scenario_preset("uv_planar_disc_L001");
  EXPECT_EQ(uv.dim, 2);
  EXPECT_EQ(uv.boundary, BoundaryScenario::DiscPlanarUniaxial);
  EXPECT_DOUBLE_EQ(uv.u0, 0.6);
  EXPECT_DOUBLE_EQ(uv.v0, 0.4);
  EXPECT_DOUBLE_EQ(uv.t_end, 0.25);

  const RunConfig bc = scenario_preset("biaxial_bc_disc_r092");
  EXPECT_EQ(bc.family, InitFamily::S2dTanh);
  EXPECT_EQ(bc.boundary, BoundaryScenario::DiscBiaxial);
  EXPECT_DOUBLE_EQ(bc.r0, 0.92);

  const RunConfig hh = scenario_preset("hedgehog_radial_L001");
  EXPECT_EQ(hh.kind, RunKind::Hedgehog);
  EXPECT_EQ(hh.m, 2048);
  EXPECT_DOUBLE_EQ(hh.r0, 0.75);
  EXPECT_DOUBLE_EQ(hh.ltilde, 0.01);
  EXPECT_EQ(hh.series_every, 2000);

  const RunConfig s2 = scenario_preset("s2d_radial_L005");
  EXPECT_EQ(s2.kind, RunKind::S2d);
  EXPECT_EQ(s2.m, 2048);
}

TEST(Config, UnknownPresetNameThrows) {
  EXPECT_THROW(scenario_preset("case1_ball"), ConfigError);
}

TEST(Config, ValidateRejectsProgrammaticInconsistency) {
  RunConfig cfg;
  cfg.kind = RunKind::Grid;
  cfg.n = 0;
  cfg.t_end = 0.1;
  EXPECT_THROW(validate_run(cfg), ConfigError);

  cfg.n = 32;
  cfg.t_end = 0.0;
  EXPECT_THROW(validate_run(cfg), ConfigError);

  cfg.t_end = 0.1;
  cfg.out.clear();
  EXPECT_THROW(validate_run(cfg), ConfigError);
}

}  // namespace
