#pragma once

#include "polisim/entities.hpp"
#include "polisim/money.hpp"
#include "polisim/params.hpp"

namespace polisim {

struct State;

// min(max_loan_months, months until the oldest member reaches loan_age_limit).
int loan_term(const State& s, const Household& h, const SimParams& p);
// PI * chi * m, zero when PI is not positive.
Money loan_cap(double permanent_income, double chi, int months);
Money loan_cap(const State& s, const Household& h, const SimParams& p);

enum class Decline { none, bank_cash, existing_mortgage, book_limit, no_capacity };

struct MortgageDecision {
  bool approved = false;
  Money amount;
  Decline reason = Decline::none;
};

// `savings_used` is the part of the buyer's deposits that leaves the bank with
// the purchase; the book limit is checked against deposits net of it.
MortgageDecision evaluate_mortgage(const State& s, const Household& h, Money requested,
                                   Money savings_used, const SimParams& p);

// Fixed-payment annuity, rounded to the minor unit.
Money annuity_payment(Money principal, double rate, int term);

// Records a new loan; the caller moves the money.
Id originate_loan(State& s, Household& h, Money principal, double rate, int term);

struct ServiceResult {
  Money due;
  Money paid;
  Money interest;
};

// One month of a loan: accrue interest, amortize, collect payment plus arrears.
ServiceResult service_loan(State& s, Loan& loan);
void service_loans(State& s);

// Interest on savings is credited to the deposit claim.
Money deposit_interest(Money deposit, double rate);
void pay_deposit_interest(State& s, double rate);

// Settles a dead household's loan from its reserve and savings; the rest is
// written off.
void settle_estate_loan(State& s, Household& h);

}  // namespace polisim
