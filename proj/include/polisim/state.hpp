#pragma once

#include <cstdint>
#include <vector>

#include "polisim/entities.hpp"
#include "polisim/rng.hpp"
#include "polisim/tables.hpp"

namespace polisim {

struct Clock {
  int month_index = 0;
  int start_year = 2010;
  int start_month = 0;  // 0 = January

  int calendar_month() const { return (start_month + month_index) % 12; }
  int year() const { return start_year + (start_month + month_index) / 12; }
  void advance() { ++month_index; }
};

// Counters reset at the start of each month and read by the statistics phase.
struct MonthFlows {
  int births = 0;
  int deaths = 0;
  int migrants_in = 0;        // persons
  int migrant_households = 0;
  int migrants_rejected = 0;  // households that found no residence
  int marriages = 0;
  int marriages_rolled_back = 0;
  int null_consumption = 0;
  int rent_defaults = 0;
  int renters = 0;
  int sales = 0;
  int mortgage_sales = 0;
  Money sales_value;
  int rentals = 0;
  int hires = 0;
  int fires = 0;
  int constructions_started = 0;
  int constructions_finished = 0;
  Money gdp;
  std::vector<Money> gdp_by_municipality;
  double goods_quantity = 0.0;
  Money goods_spend;
};

// One record per mortgage-financed sale, written when the sale completes.
struct MortgageAudit {
  int month = 0;
  Id household = kNone;
  Money loan;
  Money price;
  Money book_after;
  Money deposits_after;
  double nu = 0.0;
  double ltv = 0.0;
  int live_mortgages_of_household = 0;  // counted after origination
};

struct State {
  Clock clock;
  std::uint64_t universe = 0;  // identifies the run for ledger comparisons

  std::vector<Person> persons;
  std::vector<Household> households;
  std::vector<Firm> firms;
  std::vector<Dwelling> dwellings;
  std::vector<Region> regions;
  std::vector<Municipality> municipalities;
  std::vector<Voucher> vouchers;
  Bank bank;
  Money external;  // counterpart of every exogenous injection

  InputTables tables;
  RngStreams rng;

  MonthFlows flows;
  std::vector<MortgageAudit> mortgage_audit;

  double unemployment = 0.0;  // U_t used by the wage rule, updated by statistics
  double price_index = 1.0;
  std::vector<double> last_prices;  // per firm, for the chained price index
  double baseline_rate = 0.005;
  double mortgage_rate = 0.0076;
  double construction_share = 0.06;  // of entrant firms

  Person& person(Id id) { return persons[id]; }
  const Person& person(Id id) const { return persons[id]; }
  Household& household(Id id) { return households[id]; }
  const Household& household(Id id) const { return households[id]; }

  Point household_location(const Household& h) const;
  Point firm_location(const Firm& f) const { return regions[f.region].location; }
  Id household_municipality(const Household& h) const;
  Id household_region(const Household& h) const;

  std::int64_t population() const;
  std::vector<std::int64_t> population_by_municipality() const;
  std::size_t active_households() const;

  Money deposits() const;   // sum of household savings claims
  Money loan_book() const;  // outstanding principal plus arrears
  int live_mortgages(Id household) const;
  std::size_t listed_count() const;

  Id add_person(Person p);
  Id add_household(Household h);
  Id add_firm(Firm f);
  Id add_dwelling(Dwelling d);

  void remove_member(Household& h, Id person);
};

// Sources a household drew money from, so unspent amounts can go back.
struct Draw {
  Money cash;
  Money reserve;
  Money savings;
  Money total() const { return cash + reserve + savings; }
};

Money household_cash(const State& s, const Household& h);
Money household_funds(const State& s, const Household& h);  // cash + reserve + savings

// Takes up to `amount` from member cash, then reserve, then savings (withdrawn
// from the bank). The money ends in `out`.
Draw draw_funds(State& s, Household& h, Money amount, Money& out);
// Returns `amount` (<= d.total()) to the sources in reverse order.
void refund(State& s, Household& h, const Draw& d, Money amount, Money& from);
// Credits money into the household reserve and books it as income.
void credit_income(Household& h, Money& from, Money amount);
// Moves money into the household's bank deposit.
void deposit(State& s, Household& h, Money& from, Money amount);

}  // namespace polisim
