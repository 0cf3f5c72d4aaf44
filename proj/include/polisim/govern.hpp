#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polisim/entities.hpp"
#include "polisim/money.hpp"
#include "polisim/params.hpp"

namespace polisim {

struct State;

// taxes * psi * pop_prev / pop_now; zero when pop_now is zero.
double qli_increment(Money taxes, double psi, std::int64_t pop_prev, std::int64_t pop_now);

// Indices of values strictly below the theta-quantile (sorted[floor(theta*n)]),
// ascending by value. theta >= 1 admits everyone.
std::vector<std::size_t> below_quantile(std::span<const double> values, double theta);

// Registered households of one municipality, poorest first, judged by the
// metropolitan quantile of prior-year permanent income.
std::vector<Id> build_register(const State& s, Id municipality, double theta);

struct PolicyOutcome {
  Money spent;
  int beneficiaries = 0;
};

PolicyOutcome apply_aid(State& s, Municipality& m, Money budget);
PolicyOutcome apply_voucher(State& s, Municipality& m, Money budget, const SimParams& p);
PolicyOutcome apply_acquisition(State& s, Municipality& m, Money budget);

// Pays this month's voucher instalment to the landlord; returns the amount.
Money pay_voucher(State& s, Household& tenant, Household& landlord);
// Returns the unused escrow of a household's voucher to its municipality.
void forfeit_voucher(State& s, Household& h);

// Monthly property tax on every owned dwelling, paid from household funds.
void collect_property_tax(State& s, const SimParams& p);

// Budget split, QLI investment and the scenario's policy for every municipality.
void run_municipal_budget(State& s, const SimParams& p, PolicyKind scenario);

}  // namespace polisim
