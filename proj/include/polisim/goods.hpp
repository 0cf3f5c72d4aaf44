#pragma once

#include <optional>
#include <span>

#include "polisim/money.hpp"
#include "polisim/params.hpp"
#include "polisim/rng.hpp"

namespace polisim {

struct State;
struct Household;

// Simplified permanent income: i*Y + i*Y/r + w*r with i = r/(1+r).
// `mean_income` is the household's average monthly income, `wealth` the sum of
// property values, reserve, savings and (negative) loans. Requires r > 0.
double permanent_income(double mean_income, double wealth, double r);

double household_wealth(const State& s, const Household& h);
void refresh_permanent_income(State& s, Household& h);

struct FirmOffer {
  std::size_t firm = 0;
  double distance = 0.0;
  double price = 0.0;
};

enum class ChoiceRule { nearest, cheapest };

// Picks from a non-empty sample; ties keep the earlier entry.
std::size_t choose_offer(std::span<const FirmOffer> sample, ChoiceRule rule);
// Draws the rule with probability .5 each, then picks.
std::optional<std::size_t> choose_firm(std::span<const FirmOffer> sample, Rng& rng);

struct Purchase {
  Money spent;     // gross amount paid
  Money revenue;   // to the firm, net of consumption tax
  Money tax;
  Money returned;  // unspent part of the budget
  double quantity = 0.0;
};

// Budget `spend` at unit `price`, limited by `inventory`.
Purchase settle_purchase(Money spend, double price, double inventory, double tax_consumption);

// Month-end rebalance of one household: cash beyond one month of permanent
// income tops up the reserve to reserve_multiple * PI, the rest is deposited.
void rebalance_household(State& s, Household& h, const SimParams& p);

// Goods-market phase: every household consumes once.
void run_goods_market(State& s, const SimParams& p);

}  // namespace polisim
