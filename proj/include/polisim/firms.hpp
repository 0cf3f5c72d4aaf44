#pragma once

#include <span>
#include <vector>

#include "polisim/entities.hpp"
#include "polisim/money.hpp"
#include "polisim/params.hpp"
#include "polisim/rng.hpp"

namespace polisim {

struct State;

// Sum over workers of q^alpha / beta.
double production(std::span<const int> qualifications, double alpha, double beta);
double firm_output(const State& s, const Firm& f, const SimParams& p);

// Adds this month's output: inventory for consumer firms, work on projects for
// builders. Returns the quantity produced.
double produce(State& s, Firm& f, const SimParams& p);

// Skips with probability zeta; otherwise raises the price by (1 + markup) when
// last month's sales exceeded production, and optionally cuts it when they fell short.
double maybe_update_price(Firm& f, double zeta, double markup, bool symmetric_down, Rng& rng);

struct Books {
  Money profit;
  Money tax;
};

Books close_books(Money revenue, Money wages, double tax_firm, FirmTaxBase base);

struct WageBill {
  Money gross;  // paid out of firm cash, labor tax included
  Money tax;
  std::vector<Money> net;  // per worker, in the order of `weights`
};

// Gross bill TR * (1 - U), split by q^alpha weights, net of labor tax, scaled
// down to the available cash.
WageBill compute_wages(Money revenue, double unemployment, std::span<const double> weights,
                       double tax_labor, Money cash);

// Closes the month's books, pays taxes and wages and reviews prices.
// With `pay_wages` false the books close but no wages leave the firm.
void run_firm_payments(State& s, const SimParams& p, bool pay_wages = true);

// Creates the month's entrant firms.
void run_firm_entry(State& s, int entrants, const SimParams& p);

}  // namespace polisim
