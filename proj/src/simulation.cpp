#include "polisim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "polisim/demographics.hpp"
#include "polisim/error.hpp"
#include "polisim/finance.hpp"
#include "polisim/firms.hpp"
#include "polisim/goods.hpp"
#include "polisim/govern.hpp"
#include "polisim/housing.hpp"
#include "polisim/labor.hpp"
#include "polisim/ledger.hpp"

namespace polisim {

std::string_view phase_name(int phase) {
  static constexpr std::string_view kNames[kPhases] = {
      "exogenous series", "licenses",        "firm entry",     "production",
      "demographics",     "migration and marriage", "consumption", "loans and rent",
      "firm payments",    "construction planning", "labor market", "real estate",
      "moving",           "investment",      "municipalities", "statistics"};
  return phase >= 1 && phase <= kPhases ? kNames[phase - 1] : "unknown";
}

namespace {

void begin_month(State& s, const SimParams& p, const ExogenousSeries& series) {
  const auto t = static_cast<std::size_t>(s.clock.month_index);
  if (t >= series.horizon()) {
    throw HorizonError("exogenous series end before month " + std::to_string(t));
  }
  s.baseline_rate = series.baseline_rate[t];
  s.mortgage_rate = series.mortgage_rate[t];

  s.flows = MonthFlows{};
  s.flows.gdp_by_municipality.assign(s.municipalities.size(), Money{});
  for (auto& h : s.households) {
    h.moved = false;
    h.rent_default = false;
  }
  for (auto& d : s.dwellings) {
    if (d.listing != Listing::none) ++d.months_listed;
  }
  refresh_income_index(s);
  refresh_dwelling_values(s, p);
  if (s.clock.calendar_month() == 0 && s.clock.month_index > 0) assign_cars(s, s.rng[Stream::labor]);
}

void issue_licenses(State& s) {
  for (auto& r : s.regions) {
    r.license_accrual += r.license_rate;
    const double whole = std::floor(r.license_accrual);
    r.licenses += static_cast<int>(whole);
    r.license_accrual -= whole;
  }
}

void close_month(State& s, const SimParams& p) {
  for (auto& h : s.households) {
    if (!h.active) continue;
    const double n = h.income_months;
    h.income_mean = (h.income_mean * n + h.income_month.units()) / (n + 1.0);
    ++h.income_months;
    h.income_month = {};
    rebalance_household(s, h, p);
  }
  pay_deposit_interest(s, s.baseline_rate);
}

void record_permanent_income(State& s) {
  for (auto& h : s.households) {
    if (!h.active || h.members.empty()) continue;
    h.pi_history[static_cast<std::size_t>(h.pi_count % 12)] = h.permanent_income;
    ++h.pi_count;
  }
}

}  // namespace

IndicatorFrame step_month(State& s, const SimParams& p, const ExogenousSeries& series,
                          PolicyKind scenario, const StepOptions& options) {
  const auto t = static_cast<std::size_t>(s.clock.month_index);
  LedgerSnapshot before = take_snapshot(s);
  auto checkpoint = [&](int phase) {
    if (!options.check_conservation) return;
    LedgerSnapshot after = take_snapshot(s);
    const ConservationReport r = check_conservation(before, after);
    if (r.violated) {
      throw IntegrityError("money not conserved in phase " + std::to_string(phase) + " (" +
                           std::string(phase_name(phase)) + "), month " + std::to_string(t) +
                           ": drift " + r.drift.to_string());
    }
    before = std::move(after);
  };

  begin_month(s, p, series);
  checkpoint(1);
  issue_licenses(s);
  checkpoint(2);
  run_firm_entry(s, series.firm_entry[t], p);
  checkpoint(3);
  for (auto& f : s.firms) produce(s, f, p);
  checkpoint(4);
  run_demographics(s, p);
  checkpoint(5);
  {
    Rng& rng = s.rng[Stream::migration];
    const MigrationStats mig = process_migration(s, series.population_target[t], p, rng);
    s.flows.migrants_in = mig.persons;
    s.flows.migrant_households = mig.households;
    s.flows.migrants_rejected = mig.rejected;
    Rng& demo = s.rng[Stream::demographics];
    const auto pool = draw_marriage_pool(s, p.marriage_rate, p, demo);
    const MarriageStats mar = process_marriage(s, pool, p, demo);
    s.flows.marriages = mar.marriages;
    s.flows.marriages_rolled_back = mar.rolled_back;
    process_divorce(s, p, demo);
  }
  checkpoint(6);
  run_goods_market(s, p);
  std::vector<double> sold;
  sold.reserve(s.firms.size());
  for (const auto& f : s.firms) sold.push_back(f.sold);
  checkpoint(7);
  service_loans(s);
  collect_rent(s);
  checkpoint(8);
  run_firm_payments(s, p, !options.skip_wage_payout);
  checkpoint(9);
  run_construction_planning(s, p);
  checkpoint(10);
  run_labor_market(s, p);
  checkpoint(11);
  {
    list_vacant(s, p);
    const std::vector<Id> entrants = sample_market_entrants(s, p);
    std::vector<Id> tenants;
    for (Id h : entrants) {
      if (s.households[h].owned.empty()) tenants.push_back(h);
    }
    run_rental_market(s, tenants, p);
    run_sales_market(s, entrants, p);
  }
  checkpoint(12);
  run_moving(s, p);
  checkpoint(13);
  close_month(s, p);
  checkpoint(14);
  collect_property_tax(s, p);
  run_municipal_budget(s, p, scenario);
  checkpoint(15);
  record_permanent_income(s);
  IndicatorFrame frame = compute_indicators(s, p, sold);
  checkpoint(16);
  s.clock.advance();
  return frame;
}

CityInputs city_inputs(const RunConfig& config) {
  if (config.city.data_dir) return read_inputs(*config.city.data_dir);
  const std::uint64_t seed = config.city.seed.value_or(config.seed);
  return generate_synthetic_inputs(seed, config.city.n_regions, config.city.n_municipalities,
                                   config.city.scale);
}

State build_state(const RunConfig& config) {
  const CityInputs in = city_inputs(config);
  const std::uint64_t seed = config.city.seed.value_or(config.seed);
  const double r0 = config.series.baseline_rate ? config.series.baseline_rate->front()
                                                : config.series.baseline_rate_value;
  State s = instantiate_city(in, config.params, config.city, seed, r0);
  // Behaviour streams follow the run seed even when the city is shared.
  s.rng = RngStreams(config.seed);
  s.universe = mix_seed(config.seed, hash_name("universe"));
  s.clock.start_year = config.start_year;
  return s;
}

ExogenousSeries build_series(const RunConfig& config, const State& s) {
  ExogenousSeries series = polisim::build_series(config.series, config.horizon_months, s.firms.size(),
                                                 s.population_by_municipality(), config.seed);
  series.validate(config.horizon_months, s.municipalities.size());
  return series;
}

Simulation::Simulation(const RunConfig& config)
    : config_(config), state_(build_state(config)), series_(build_series(config, state_)) {}

Simulation::Simulation(const RunConfig& config, State state, ExogenousSeries series)
    : config_(config), state_(std::move(state)), series_(std::move(series)) {}

IndicatorFrame Simulation::step(const StepOptions& options) {
  frames_.push_back(step_month(state_, config_.params, series_, config_.scenario, options));
  return frames_.back();
}

const std::vector<IndicatorFrame>& Simulation::run() {
  while (static_cast<std::size_t>(state_.clock.month_index) < config_.horizon_months) step();
  return frames_;
}

}  // namespace polisim
