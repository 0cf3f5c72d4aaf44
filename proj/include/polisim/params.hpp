#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace polisim {

enum class PolicyKind { baseline, acquisition, voucher, aid };

std::string_view to_string(PolicyKind k);
PolicyKind policy_from_string(std::string_view s);  // throws ConfigError

enum class FirmTaxBase { profit, revenue };

// Behavioural knobs. Greek-letter defaults are the standard-run values.
struct SimParams {
  double pop = 0.01;            // fraction of the real population instantiated
  double alpha = 0.6;           // productivity exponent
  double beta = 10.0;           // productivity divisor
  double iota = 0.75;           // firm labor-market participation probability
  double eta = 0.3;             // share of distance-only hiring posts
  double phi = 0.0045;          // households sampled into the housing market
  int sigma = 20;               // candidate / listing sample size
  int varsigma = 5;             // goods-market firm sample size
  double rho_plus = 1.3;        // ask/offer cap ratio
  double rho_minus = 0.7;       // savings/ask floor ratio for cash offers
  double tau = 3.0;             // neighborhood-income price weight
  double gamma = 0.6;           // lower bound of time-on-market discount
  double kappa = -0.01;         // time-on-market decay rate
  double markup = 0.15;         // firm markup (pi)
  double psi = 3e-7;            // municipal efficiency, calibrated to this currency scale
  double nu = 0.7;              // max loans / deposits
  double chi = 0.5;             // payment / permanent income cap
  int n_months = 24;            // construction backlog horizon
  double upsilon = 0.15;        // lot cost premium
  double zeta = 0.7;            // sticky-price probability
  double delta = 0.2;           // policy share of municipal taxes
  double theta = 0.2;           // policy eligibility quantile

  double ltv = 0.8;
  double rental_share = 0.3;
  double vacancy_share = 0.1;
  double rental_price_fraction = 0.0029;

  double tax_consumption = 0.1;
  double tax_labor = 0.1;
  double tax_firm = 0.1;
  double tax_transaction = 0.005;
  double tax_property = 0.0003;
  FirmTaxBase firm_tax_base = FirmTaxBase::revenue;

  double reserve_multiple = 6.0;
  int max_loan_months = 360;
  int loan_age_limit = 75;

  double transport_cost_car = 1.0;
  double transport_cost_public = 0.3;
  int labor_age_min = 16;
  int labor_age_max = 70;

  double marriage_rate = 0.002;  // monthly probability per unmarried adult
  double divorce_rate = 0.0;     // monthly probability per married adult
  int adult_age = 18;

  bool wage_unemployment = true;      // U_t enters the wage rule
  bool symmetric_price_down = false;  // firms also cut prices by 1/(1+pi)
  bool tax_pool_equal = false;        // pool municipal taxes and split equally
  bool qli_procurement = true;        // QLI spending buys local goods instead of leaving the economy

  double voucher_months = 24;

  // Throws ConfigError when a field is outside its domain.
  void validate() const;
};

void to_json(nlohmann::json& j, const SimParams& p);
// Overlays the keys present in `j` onto `p`; unknown keys are rejected.
void apply_json(SimParams& p, const nlohmann::json& j);

// Named access used by sensitivity sweeps ("ALPHA", "ETA", ...).
struct ParamInfo {
  std::string name;  // upper-case sweep token
  std::string key;   // JSON key
  std::variant<double SimParams::*, int SimParams::*, bool SimParams::*> field;
};
const std::vector<ParamInfo>& param_registry();
const ParamInfo* find_param(std::string_view name);  // case-insensitive
void set_param(SimParams& p, const ParamInfo& info, double value);
double get_param(const SimParams& p, const ParamInfo& info);
std::vector<std::string> param_names();

enum class MortgageRateMode { real, nominal, fixed };

// Monthly exogenous inputs. Index = month.
struct ExogenousSeries {
  std::vector<double> baseline_rate;
  std::vector<double> mortgage_rate;
  std::vector<int> firm_entry;
  std::vector<std::vector<std::int64_t>> population_target;  // [month][municipality]

  std::size_t horizon() const;
  void validate(std::size_t months, std::size_t n_municipalities) const;
};

// How series are generated when the config gives scalars instead of arrays.
struct SeriesSpec {
  std::optional<std::vector<double>> baseline_rate;
  double baseline_rate_value = 0.005;
  std::optional<std::vector<double>> mortgage_rate;
  double mortgage_rate_value = 0.0076;
  MortgageRateMode mortgage_mode = MortgageRateMode::real;
  std::optional<std::vector<int>> firm_entry;
  double firm_growth = 0.0012;  // monthly, relative to the initial firm count
  std::optional<std::vector<std::vector<std::int64_t>>> population_target;
  double population_growth = 0.0012;  // monthly
};

ExogenousSeries build_series(const SeriesSpec& spec, std::size_t months, std::size_t initial_firms,
                             const std::vector<std::int64_t>& initial_population,
                             std::uint64_t seed);

struct CityConfig {
  std::size_t n_regions = 12;
  std::size_t n_municipalities = 3;
  double scale = 1000.0;  // real population, thousands
  double renter_share = 0.3;
  double construction_share = 0.06;
  double initial_employment = 0.9;
  double initial_wage = 2.0;          // mean monthly wage, currency units
  double savings_months = 12.0;       // median savings in months of income
  double bank_capital_share = 0.1;    // bank equity / initial deposits
  double firm_cash_months = 1.0;      // firm cash endowment in months of wage bill
  double construction_cash = 50.0;
  std::optional<std::string> data_dir;  // load input CSVs instead of generating
  std::optional<std::uint64_t> seed;    // defaults to the run seed
};

struct RunConfig {
  SimParams params;
  SeriesSpec series;
  CityConfig city;
  PolicyKind scenario = PolicyKind::baseline;
  std::uint64_t seed = 42;
  std::size_t horizon_months = 120;
  int start_year = 2010;

  void validate() const;
};

RunConfig load_config(const std::string& path);  // throws ConfigError / IoError
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

}  // namespace polisim
