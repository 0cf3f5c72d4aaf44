#include "polisim/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "polisim/error.hpp"

namespace polisim {

using nlohmann::json;

void to_json(json& j, const Money& m) { j = m.minor(); }
void from_json(const json& j, Money& m) { m = Money::from_minor(j.get<std::int64_t>()); }

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Point, x, y)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Person, id, age_months, gender, birthday_month, qualification, cash,
                                   wage, employer, household, origin_household, spouse, has_car, alive,
                                   last_labor_month)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Household, id, members, dwelling, owned, reserve, savings, rent,
                                   renting, loan, voucher, parent, income_mean, income_months,
                                   income_month, permanent_income, pi_history, pi_count, active,
                                   null_consumption, rent_default, moved, last_goods_month,
                                   last_rental_month, last_sales_month)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConstructionProject, region, size, quality, total_cost, remaining,
                                   license_paid)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Firm, id, region, kind, cash, inventory, price, employees, revenue,
                                   last_revenue, profit, wage_pool, produced, sold, projects)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Dwelling, id, region, size, quality, owner_household, owner_firm,
                                   occupant, listing, months_listed, force_sale, value, ask)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Region, id, municipality, location, qli, income_index,
                                   license_price, licenses, license_rate, license_accrual,
                                   avg_household_size, qualification_cdf, population_weight)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TaxReceipts, consumption, labor, firm, transaction, property, license)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Municipality, id, regions, treasury, policy_carry, voucher_escrow,
                                   receipts, hdi, pop_prev, policy_register, last_taxes,
                                   last_qli_investment, last_policy_outlay, last_carry_in,
                                   last_carry_out, last_beneficiaries)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Loan, id, household, principal, outstanding, rate, term, remaining,
                                   payment, arrears, active, origination_month)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Bank, cash, loans, interest_paid, interest_received, written_off)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Voucher, id, household, dwelling, municipality, monthly,
                                   months_remaining, escrow, active)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InputTables, pyramid, fertility, mortality, marriage_rate,
                                   car_by_decile, population_estimates, estimates_start_year, hdi)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MonthFlows, births, deaths, migrants_in, migrant_households,
                                   migrants_rejected, marriages, marriages_rolled_back,
                                   null_consumption, rent_defaults, renters, sales, mortgage_sales,
                                   sales_value, rentals, hires, fires, constructions_started,
                                   constructions_finished, gdp, gdp_by_municipality, goods_quantity,
                                   goods_spend)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MortgageAudit, month, household, loan, price, book_after,
                                   deposits_after, nu, ltv, live_mortgages_of_household)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Clock, month_index, start_year, start_month)

json save_snapshot(const State& s) {
  json j;
  j["version"] = kSnapshotVersion;
  j["clock"] = s.clock;
  j["universe"] = s.universe;
  j["persons"] = s.persons;
  j["households"] = s.households;
  j["firms"] = s.firms;
  j["dwellings"] = s.dwellings;
  j["regions"] = s.regions;
  j["municipalities"] = s.municipalities;
  j["vouchers"] = s.vouchers;
  j["bank"] = s.bank;
  j["external"] = s.external;
  j["tables"] = s.tables;
  j["flows"] = s.flows;
  j["mortgage_audit"] = s.mortgage_audit;
  j["unemployment"] = s.unemployment;
  j["price_index"] = s.price_index;
  j["last_prices"] = s.last_prices;
  j["baseline_rate"] = s.baseline_rate;
  j["mortgage_rate"] = s.mortgage_rate;
  j["construction_share"] = s.construction_share;
  j["rng_master"] = s.rng.master_seed();
  json streams = json::array();
  for (std::size_t i = 0; i < static_cast<std::size_t>(Stream::count_); ++i) {
    std::ostringstream os;
    os << s.rng[static_cast<Stream>(i)];
    streams.push_back(os.str());
  }
  j["rng"] = streams;
  return j;
}

State load_snapshot(const json& j) {
  try {
    if (j.at("version").get<int>() != kSnapshotVersion) {
      throw ConfigError("snapshot version " + j.at("version").dump() + " is not supported");
    }
    State s;
    j.at("clock").get_to(s.clock);
    j.at("universe").get_to(s.universe);
    j.at("persons").get_to(s.persons);
    j.at("households").get_to(s.households);
    j.at("firms").get_to(s.firms);
    j.at("dwellings").get_to(s.dwellings);
    j.at("regions").get_to(s.regions);
    j.at("municipalities").get_to(s.municipalities);
    j.at("vouchers").get_to(s.vouchers);
    j.at("bank").get_to(s.bank);
    j.at("external").get_to(s.external);
    j.at("tables").get_to(s.tables);
    j.at("flows").get_to(s.flows);
    j.at("mortgage_audit").get_to(s.mortgage_audit);
    j.at("unemployment").get_to(s.unemployment);
    j.at("price_index").get_to(s.price_index);
    j.at("last_prices").get_to(s.last_prices);
    j.at("baseline_rate").get_to(s.baseline_rate);
    j.at("mortgage_rate").get_to(s.mortgage_rate);
    j.at("construction_share").get_to(s.construction_share);
    s.rng = RngStreams(j.at("rng_master").get<std::uint64_t>());
    const auto& streams = j.at("rng");
    for (std::size_t i = 0; i < static_cast<std::size_t>(Stream::count_); ++i) {
      std::istringstream is(streams.at(i).get<std::string>());
      is >> s.rng[static_cast<Stream>(i)];
    }
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed snapshot: ") + e.what());
  }
}

void write_snapshot(const State& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << save_snapshot(s).dump() << '\n';
}

State read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return load_snapshot(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed snapshot: ") + e.what());
  }
}

std::uint64_t state_digest(const State& s) {
  const std::string bytes = save_snapshot(s).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace polisim
