#include "polisim/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>

#include "polisim/error.hpp"
#include "polisim/rng.hpp"

namespace polisim {

using nlohmann::json;

std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::baseline: return "baseline";
    case PolicyKind::acquisition: return "acquisition";
    case PolicyKind::voucher: return "voucher";
    case PolicyKind::aid: return "aid";
  }
  return "baseline";
}

PolicyKind policy_from_string(std::string_view s) {
  if (s == "baseline") return PolicyKind::baseline;
  if (s == "acquisition") return PolicyKind::acquisition;
  if (s == "voucher") return PolicyKind::voucher;
  if (s == "aid") return PolicyKind::aid;
  throw ConfigError("unknown scenario '" + std::string(s) +
                    "' (expected baseline|acquisition|voucher|aid)");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid parameter: " + what);
}

bool unit(double x) { return x >= 0.0 && x <= 1.0; }
bool rate(double x) { return x >= 0.0 && x < 1.0; }

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

void SimParams::validate() const {
  require(pop > 0.0 && pop <= 0.05, "pop must be in (0, 0.05]");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must be in [0, 1]");
  require(beta > 0.0, "beta must be > 0");
  require(unit(iota), "iota must be in [0, 1]");
  require(unit(eta), "eta must be in [0, 1]");
  require(unit(phi), "phi must be in [0, 1]");
  require(sigma >= 1, "sigma must be >= 1");
  require(varsigma >= 1, "varsigma must be >= 1");
  require(rho_plus >= 1.0 && rho_minus <= 1.0 && rho_minus >= 0.0,
          "need rho_plus >= 1 >= rho_minus >= 0");
  require(tau >= 0.0, "tau must be >= 0");
  require(unit(gamma), "gamma must be in [0, 1]");
  require(kappa <= 0.0, "kappa must be <= 0");
  require(markup >= 0.0, "markup must be >= 0");
  require(psi >= 0.0, "psi must be >= 0");
  require(unit(nu), "nu must be in [0, 1]");
  require(unit(chi), "chi must be in [0, 1]");
  require(n_months >= 1, "n_months must be >= 1");
  require(upsilon >= 0.0, "upsilon must be >= 0");
  require(unit(zeta), "zeta must be in [0, 1]");
  require(unit(delta), "delta must be in [0, 1]");
  require(unit(theta), "theta must be in [0, 1]");
  require(ltv > 0.0 && ltv <= 1.0, "ltv must be in (0, 1]");
  require(unit(rental_share), "rental_share must be in [0, 1]");
  require(vacancy_share >= 0.0 && vacancy_share < 0.5, "vacancy_share must be in [0, 0.5)");
  require(unit(rental_price_fraction), "rental_price_fraction must be in [0, 1]");
  require(rate(tax_consumption) && rate(tax_labor) && rate(tax_firm) && rate(tax_transaction) &&
              rate(tax_property),
          "tax rates must be in [0, 1)");
  require(reserve_multiple >= 0.0, "reserve_multiple must be >= 0");
  require(max_loan_months >= 1, "max_loan_months must be >= 1");
  require(transport_cost_car >= 0.0 && transport_cost_public >= 0.0, "transport costs must be >= 0");
  require(labor_age_min <= labor_age_max, "labor age band is empty");
  require(unit(marriage_rate) && unit(divorce_rate), "marriage/divorce rates must be in [0, 1]");
  require(voucher_months >= 1, "voucher_months must be >= 1");
}

const std::vector<ParamInfo>& param_registry() {
  static const std::vector<ParamInfo> reg = {
      {"POP", "pop", &SimParams::pop},
      {"ALPHA", "alpha", &SimParams::alpha},
      {"BETA", "beta", &SimParams::beta},
      {"IOTA", "iota", &SimParams::iota},
      {"ETA", "eta", &SimParams::eta},
      {"PHI", "phi", &SimParams::phi},
      {"SIGMA", "sigma", &SimParams::sigma},
      {"VARSIGMA", "varsigma", &SimParams::varsigma},
      {"RHO_PLUS", "rho_plus", &SimParams::rho_plus},
      {"RHO_MINUS", "rho_minus", &SimParams::rho_minus},
      {"TAU", "tau", &SimParams::tau},
      {"GAMMA", "gamma", &SimParams::gamma},
      {"KAPPA", "kappa", &SimParams::kappa},
      {"MARKUP", "markup", &SimParams::markup},
      {"PSI", "psi", &SimParams::psi},
      {"NU", "nu", &SimParams::nu},
      {"CHI", "chi", &SimParams::chi},
      {"N_MONTHS", "n_months", &SimParams::n_months},
      {"UPSILON", "upsilon", &SimParams::upsilon},
      {"ZETA", "zeta", &SimParams::zeta},
      {"DELTA", "delta", &SimParams::delta},
      {"THETA", "theta", &SimParams::theta},
      {"LTV", "ltv", &SimParams::ltv},
      {"RENTAL_SHARE", "rental_share", &SimParams::rental_share},
      {"VACANCY_SHARE", "vacancy_share", &SimParams::vacancy_share},
      {"RENTAL_PRICE_FRACTION", "rental_price_fraction", &SimParams::rental_price_fraction},
      {"TAX_CONSUMPTION", "tax_consumption", &SimParams::tax_consumption},
      {"TAX_LABOR", "tax_labor", &SimParams::tax_labor},
      {"TAX_FIRM", "tax_firm", &SimParams::tax_firm},
      {"TAX_TRANSACTION", "tax_transaction", &SimParams::tax_transaction},
      {"TAX_PROPERTY", "tax_property", &SimParams::tax_property},
      {"RESERVE_MULTIPLE", "reserve_multiple", &SimParams::reserve_multiple},
      {"MAX_LOAN_MONTHS", "max_loan_months", &SimParams::max_loan_months},
      {"LOAN_AGE_LIMIT", "loan_age_limit", &SimParams::loan_age_limit},
      {"TRANSPORT_COST_CAR", "transport_cost_car", &SimParams::transport_cost_car},
      {"TRANSPORT_COST_PUBLIC", "transport_cost_public", &SimParams::transport_cost_public},
      {"LABOR_AGE_MIN", "labor_age_min", &SimParams::labor_age_min},
      {"LABOR_AGE_MAX", "labor_age_max", &SimParams::labor_age_max},
      {"MARRIAGE_RATE", "marriage_rate", &SimParams::marriage_rate},
      {"DIVORCE_RATE", "divorce_rate", &SimParams::divorce_rate},
      {"ADULT_AGE", "adult_age", &SimParams::adult_age},
      {"WAGE_UNEMPLOYMENT", "wage_unemployment", &SimParams::wage_unemployment},
      {"SYMMETRIC_PRICE_DOWN", "symmetric_price_down", &SimParams::symmetric_price_down},
      {"TAX_POOL_EQUAL", "tax_pool_equal", &SimParams::tax_pool_equal},
      {"QLI_PROCUREMENT", "qli_procurement", &SimParams::qli_procurement},
      {"VOUCHER_MONTHS", "voucher_months", &SimParams::voucher_months},
  };
  return reg;
}

const ParamInfo* find_param(std::string_view name) {
  const std::string u = upper(name);
  for (const auto& p : param_registry()) {
    if (p.name == u) return &p;
  }
  return nullptr;
}

void set_param(SimParams& p, const ParamInfo& info, double value) {
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(p.*member)>;
        if constexpr (std::is_same_v<T, double>) {
          p.*member = value;
        } else if constexpr (std::is_same_v<T, int>) {
          p.*member = static_cast<int>(std::lround(value));
        } else {
          p.*member = value != 0.0;
        }
      },
      info.field);
}

double get_param(const SimParams& p, const ParamInfo& info) {
  return std::visit(
      [&](auto member) -> double {
        return static_cast<double>(p.*member);
      },
      info.field);
}

std::vector<std::string> param_names() {
  std::vector<std::string> out;
  for (const auto& p : param_registry()) out.push_back(p.name);
  return out;
}

void to_json(json& j, const SimParams& p) {
  j = json::object();
  for (const auto& info : param_registry()) {
    std::visit([&](auto member) { j[info.key] = p.*member; }, info.field);
  }
  j["firm_tax_base"] = p.firm_tax_base == FirmTaxBase::profit ? "profit" : "revenue";
}

void apply_json(SimParams& p, const json& j) {
  if (!j.is_object()) throw ConfigError("params must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "firm_tax_base") {
      const auto s = value.get<std::string>();
      if (s == "profit") p.firm_tax_base = FirmTaxBase::profit;
      else if (s == "revenue") p.firm_tax_base = FirmTaxBase::revenue;
      else throw ConfigError("firm_tax_base must be profit|revenue");
      continue;
    }
    const ParamInfo* info = nullptr;
    for (const auto& r : param_registry()) {
      if (r.key == key) info = &r;
    }
    if (info == nullptr) {
      std::string names;
      for (const auto& r : param_registry()) names += " " + r.key;
      throw ConfigError("unknown parameter '" + key + "'; valid:" + names);
    }
    if (value.is_boolean()) {
      set_param(p, *info, value.get<bool>() ? 1.0 : 0.0);
    } else if (value.is_number()) {
      set_param(p, *info, value.get<double>());
    } else {
      throw ConfigError("parameter '" + key + "' must be numeric");
    }
  }
}

std::size_t ExogenousSeries::horizon() const {
  return std::min({baseline_rate.size(), mortgage_rate.size(), firm_entry.size(),
                   population_target.size()});
}

void ExogenousSeries::validate(std::size_t months, std::size_t n_municipalities) const {
  if (horizon() < months) {
    throw HorizonError("exogenous series cover " + std::to_string(horizon()) +
                       " months, horizon needs " + std::to_string(months));
  }
  for (double r : baseline_rate) {
    if (!(r > 0.0)) throw ConfigError("baseline_rate must be > 0 in every month");
  }
  for (double r : mortgage_rate) {
    if (!(r > 0.0)) throw ConfigError("mortgage_rate must be > 0 in every month");
  }
  for (const auto& row : population_target) {
    if (row.size() != n_municipalities) {
      throw ConfigError("population_target rows must have one entry per municipality");
    }
  }
}

ExogenousSeries build_series(const SeriesSpec& spec, std::size_t months, std::size_t initial_firms,
                             const std::vector<std::int64_t>& initial_population,
                             std::uint64_t seed) {
  ExogenousSeries s;
  Rng rng(mix_seed(seed, hash_name("series")));

  if (spec.baseline_rate) {
    s.baseline_rate = *spec.baseline_rate;
  } else {
    s.baseline_rate.assign(months, spec.baseline_rate_value);
  }

  if (spec.mortgage_rate) {
    s.mortgage_rate = *spec.mortgage_rate;
  } else {
    s.mortgage_rate.resize(months);
    for (std::size_t t = 0; t < months; ++t) {
      double r = spec.mortgage_rate_value;
      if (spec.mortgage_mode != MortgageRateMode::fixed) {
        // A slow cycle plus noise, clamped to the observed real-rate range.
        r += 0.003 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 60.0) +
             0.0005 * rng.normal();
        r = std::clamp(r, 0.0001, 0.016);
        if (spec.mortgage_mode == MortgageRateMode::nominal) r += 0.004;
      }
      s.mortgage_rate[t] = r;
    }
  }

  if (spec.firm_entry) {
    s.firm_entry = *spec.firm_entry;
  } else {
    s.firm_entry.resize(months);
    double acc = 0.0;
    for (std::size_t t = 0; t < months; ++t) {
      acc += spec.firm_growth * static_cast<double>(initial_firms);
      const int whole = static_cast<int>(std::floor(acc));
      s.firm_entry[t] = whole;
      acc -= whole;
    }
  }

  if (spec.population_target) {
    s.population_target = *spec.population_target;
  } else {
    s.population_target.resize(months);
    for (std::size_t t = 0; t < months; ++t) {
      const double g = std::pow(1.0 + spec.population_growth, static_cast<double>(t + 1));
      for (auto p0 : initial_population) {
        s.population_target[t].push_back(
            static_cast<std::int64_t>(std::llround(static_cast<double>(p0) * g)));
      }
    }
  }
  return s;
}

void RunConfig::validate() const {
  params.validate();
  if (horizon_months == 0) throw ConfigError("horizon_months must be >= 1");
  if (city.n_regions < city.n_municipalities || city.n_municipalities == 0) {
    throw ConfigError("need n_regions >= n_municipalities >= 1");
  }
  if (!(city.scale > 0.0)) throw ConfigError("city.scale must be > 0");
  // r = 0 would divide by zero in the permanent-income rule.
  if (!(series.baseline_rate_value > 0.0) || !(series.mortgage_rate_value > 0.0)) {
    throw ConfigError("interest rates must be > 0");
  }
  for (const auto* v : {&series.baseline_rate, &series.mortgage_rate}) {
    if (*v) {
      for (double r : **v) {
        if (!(r > 0.0)) throw ConfigError("interest rates must be > 0");
      }
    }
  }
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "params") {
        apply_json(c.params, value);
      } else if (key == "scenario") {
        c.scenario = policy_from_string(value.get<std::string>());
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "horizon_months") {
        c.horizon_months = value.get<std::size_t>();
      } else if (key == "start_year") {
        c.start_year = value.get<int>();
      } else if (key == "series") {
        for (const auto& [sk, sv] : value.items()) {
          if (sk == "baseline_rate") {
            if (sv.is_array()) c.series.baseline_rate = sv.get<std::vector<double>>();
            else c.series.baseline_rate_value = sv.get<double>();
          } else if (sk == "mortgage_rate") {
            if (sv.is_array()) c.series.mortgage_rate = sv.get<std::vector<double>>();
            else c.series.mortgage_rate_value = sv.get<double>();
          } else if (sk == "mortgage_rate_mode") {
            const auto m = sv.get<std::string>();
            if (m == "real") c.series.mortgage_mode = MortgageRateMode::real;
            else if (m == "nominal") c.series.mortgage_mode = MortgageRateMode::nominal;
            else if (m == "fixed") c.series.mortgage_mode = MortgageRateMode::fixed;
            else throw ConfigError("mortgage_rate_mode must be real|nominal|fixed");
          } else if (sk == "firm_entry") {
            if (sv.is_array()) c.series.firm_entry = sv.get<std::vector<int>>();
            else c.series.firm_growth = sv.get<double>();
          } else if (sk == "population_growth") {
            c.series.population_growth = sv.get<double>();
          } else if (sk == "population_target") {
            c.series.population_target = sv.get<std::vector<std::vector<std::int64_t>>>();
          } else {
            throw ConfigError("unknown series key '" + sk + "'");
          }
        }
      } else if (key == "city") {
        for (const auto& [ck, cv] : value.items()) {
          if (ck == "n_regions") c.city.n_regions = cv.get<std::size_t>();
          else if (ck == "n_municipalities") c.city.n_municipalities = cv.get<std::size_t>();
          else if (ck == "scale") c.city.scale = cv.get<double>();
          else if (ck == "renter_share") c.city.renter_share = cv.get<double>();
          else if (ck == "construction_share") c.city.construction_share = cv.get<double>();
          else if (ck == "initial_employment") c.city.initial_employment = cv.get<double>();
          else if (ck == "initial_wage") c.city.initial_wage = cv.get<double>();
          else if (ck == "savings_months") c.city.savings_months = cv.get<double>();
          else if (ck == "bank_capital_share") c.city.bank_capital_share = cv.get<double>();
          else if (ck == "firm_cash_months") c.city.firm_cash_months = cv.get<double>();
          else if (ck == "construction_cash") c.city.construction_cash = cv.get<double>();
          else if (ck == "data_dir") c.city.data_dir = cv.get<std::string>();
          else if (ck == "seed") c.city.seed = cv.get<std::uint64_t>();
          else throw ConfigError("unknown city key '" + ck + "'");
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["params"] = c.params;
  j["scenario"] = std::string(to_string(c.scenario));
  j["seed"] = c.seed;
  j["horizon_months"] = c.horizon_months;
  j["start_year"] = c.start_year;
  json s;
  if (c.series.baseline_rate) s["baseline_rate"] = *c.series.baseline_rate;
  else s["baseline_rate"] = c.series.baseline_rate_value;
  if (c.series.mortgage_rate) s["mortgage_rate"] = *c.series.mortgage_rate;
  else s["mortgage_rate"] = c.series.mortgage_rate_value;
  s["mortgage_rate_mode"] = c.series.mortgage_mode == MortgageRateMode::real      ? "real"
                            : c.series.mortgage_mode == MortgageRateMode::nominal ? "nominal"
                                                                                  : "fixed";
  if (c.series.firm_entry) s["firm_entry"] = *c.series.firm_entry;
  else s["firm_entry"] = c.series.firm_growth;
  if (c.series.population_target) s["population_target"] = *c.series.population_target;
  else s["population_growth"] = c.series.population_growth;
  j["series"] = s;
  json city;
  city["n_regions"] = c.city.n_regions;
  city["n_municipalities"] = c.city.n_municipalities;
  city["scale"] = c.city.scale;
  city["renter_share"] = c.city.renter_share;
  city["construction_share"] = c.city.construction_share;
  city["initial_employment"] = c.city.initial_employment;
  city["initial_wage"] = c.city.initial_wage;
  city["savings_months"] = c.city.savings_months;
  city["bank_capital_share"] = c.city.bank_capital_share;
  city["firm_cash_months"] = c.city.firm_cash_months;
  city["construction_cash"] = c.city.construction_cash;
  if (c.city.data_dir) city["data_dir"] = *c.city.data_dir;
  if (c.city.seed) city["seed"] = *c.city.seed;
  j["city"] = city;
  return j;
}

}  // namespace polisim
