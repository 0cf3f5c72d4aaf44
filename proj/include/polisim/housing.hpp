#pragma once

#include <optional>
#include <span>
#include <vector>

#include "polisim/entities.hpp"
#include "polisim/money.hpp"
#include "polisim/params.hpp"
#include "polisim/rng.hpp"

namespace polisim {

struct State;

// Asking price: H_s*H_q * QLI * (1 + tau*N_q) * ((1-gamma)*e^(kappa*T) + gamma).
double ask_price(double size_quality, double qli, double income_index, int months_listed,
                 const SimParams& p);
double ask_price(const State& s, const Dwelling& d, const SimParams& p, int months_listed);

// Hedonic ranking used for moving and rental choices.
double dwelling_score(const State& s, const Dwelling& d);

// Regional mean household income, min-max normalized over inhabited regions.
void refresh_income_index(State& s);
void refresh_dwelling_values(State& s, const SimParams& p);

Money rent_for(const Dwelling& d, const SimParams& p);

// Rental listings out of `vacant` newly listed dwellings.
std::size_t rental_count(std::size_t vacant, double rental_share);

// Lists every vacant unlisted dwelling. Builder-owned and force-sale units go to
// the sales market; the rest are split by rental_share.
void list_vacant(State& s, const SimParams& p);
void delist(Dwelling& d);

// Ends the current occupancy (rental contract, voucher) without moving anywhere.
void vacate(State& s, Household& h);
// Moves a household into `d` as owner-occupier or tenant.
void occupy(State& s, Household& h, Dwelling& d, bool renting, Money rent);

struct RentalChoice {
  Id dwelling = kNone;
  Money rent;
};

// One household's visit to the rental market: sample sigma listings, take the
// best affordable one, otherwise offer its permanent income on the cheapest.
// Declines anything worse than the current home. `municipality` restricts the
// search when set.
std::optional<RentalChoice> seek_rental(State& s, const Household& h, const SimParams& p, Rng& rng,
                                        Id municipality = kNone);

void run_rental_market(State& s, std::vector<Id> participants, const SimParams& p);

// Tenants pay their landlords, vouchers first. Partial payment is a default.
void collect_rent(State& s);

// Average of ask and offer, or offer * rho_plus / 2 when ask / offer > rho_plus.
double negotiated_price(double ask, double offer, double rho_plus);

void run_sales_market(State& s, std::vector<Id> buyers, const SimParams& p);

// The households sampled into the housing market this month.
std::vector<Id> sample_market_entrants(State& s, const SimParams& p);

// Occupy the best owned dwelling when someone is employed, else the worst,
// listing the best for sale.
void decide_move(State& s, Household& h, const SimParams& p);
void run_moving(State& s, const SimParams& p);

// Production value that pays down construction projects this month.
void advance_construction(State& s, Firm& f, double work_value, const SimParams& p);

// Profitability of building `size` x `quality` in a region whose comparable
// listings average `mean_ask`.
double construction_profit(double mean_ask, double size, int quality, double cost_factor,
                           double license_price, double upsilon);

std::optional<ConstructionProject> plan_construction(State& s, Firm& f, const SimParams& p);
void run_construction_planning(State& s, const SimParams& p);

double mean_consumer_price(const State& s);
double vacancy_share(const State& s);

}  // namespace polisim
