#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "polisim/error.hpp"
#include "polisim/params.hpp"

using namespace polisim;
using nlohmann::json;

TEST(Params, StandardRunDefaults) {
  const SimParams p;
  EXPECT_DOUBLE_EQ(p.alpha, 0.6);
  EXPECT_DOUBLE_EQ(p.beta, 10.0);
  EXPECT_DOUBLE_EQ(p.iota, 0.75);
  EXPECT_DOUBLE_EQ(p.eta, 0.3);
  EXPECT_DOUBLE_EQ(p.phi, 0.0045);
  EXPECT_EQ(p.sigma, 20);
  EXPECT_EQ(p.varsigma, 5);
  EXPECT_DOUBLE_EQ(p.rho_plus, 1.3);
  EXPECT_DOUBLE_EQ(p.rho_minus, 0.7);
  EXPECT_DOUBLE_EQ(p.tau, 3.0);
  EXPECT_DOUBLE_EQ(p.gamma, 0.6);
  EXPECT_DOUBLE_EQ(p.kappa, -0.01);
  EXPECT_DOUBLE_EQ(p.markup, 0.15);
  EXPECT_DOUBLE_EQ(p.nu, 0.7);
  EXPECT_DOUBLE_EQ(p.chi, 0.5);
  EXPECT_EQ(p.n_months, 24);
  EXPECT_DOUBLE_EQ(p.upsilon, 0.15);
  EXPECT_DOUBLE_EQ(p.zeta, 0.7);
  EXPECT_DOUBLE_EQ(p.delta, 0.2);
  EXPECT_DOUBLE_EQ(p.theta, 0.2);
  EXPECT_NO_THROW(p.validate());
}

TEST(Params, OutOfDomainIsRejected) {
  SimParams p;
  p.pop = 0.2;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.sigma = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.eta = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Params, ZeroRateRejectedAtLoad) {
  EXPECT_THROW(config_from_json(json{{"series", {{"baseline_rate", 0.0}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"series", {{"baseline_rate", json::array({0.01, 0.0})}}}}),
               ConfigError);
}

TEST(Params, UnknownKeysAreRejected) {
  EXPECT_THROW(config_from_json(json{{"bogus", 1}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"params", {{"not_a_param", 1}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"city", {{"size", 1}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"scenario", "socialism"}}), ConfigError);
}

TEST(Params, JsonRoundTrip) {
  RunConfig c;
  c.params.alpha = 0.4;
  c.params.sigma = 9;
  c.params.wage_unemployment = false;
  c.params.firm_tax_base = FirmTaxBase::profit;
  c.scenario = PolicyKind::voucher;
  c.seed = 77;
  c.horizon_months = 36;
  c.city.scale = 250.0;
  const RunConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_DOUBLE_EQ(back.params.alpha, 0.4);
  EXPECT_EQ(back.params.sigma, 9);
  EXPECT_FALSE(back.params.wage_unemployment);
  EXPECT_EQ(back.params.firm_tax_base, FirmTaxBase::profit);
  EXPECT_EQ(back.scenario, PolicyKind::voucher);
}

TEST(Params, RegistryLookupIsCaseInsensitive) {
  const ParamInfo* a = find_param("alpha");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a, find_param("ALPHA"));
  EXPECT_EQ(find_param("nonsense"), nullptr);

  SimParams p;
  set_param(p, *find_param("SIGMA"), 7.0);
  EXPECT_EQ(p.sigma, 7);
  set_param(p, *a, 0.25);
  EXPECT_DOUBLE_EQ(get_param(p, *a), 0.25);
  EXPECT_FALSE(param_names().empty());
}

TEST(Params, LoadConfigErrors) {
  EXPECT_THROW(load_config("/nonexistent/polisim.json"), ConfigError);
  const auto path = std::filesystem::temp_directory_path() / "polisim_bad_config.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_config(path.string()), ConfigError);
  std::filesystem::remove(path);
}

TEST(Series, GeneratedSeriesCoverHorizon) {
  SeriesSpec spec;
  const auto s = build_series(spec, 24, 100, {1000, 500}, 1);
  EXPECT_GE(s.horizon(), 24u);
  EXPECT_NO_THROW(s.validate(24, 2));
  EXPECT_THROW(s.validate(48, 2), HorizonError);
  for (double r : s.baseline_rate) EXPECT_GT(r, 0.0);
}
