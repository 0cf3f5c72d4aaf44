#include "polisim/finance.hpp"

#include <algorithm>
#include <cmath>

#include "polisim/state.hpp"

namespace polisim {

int loan_term(const State& s, const Household& h, const SimParams& p) {
  int oldest = 0;
  for (Id m : h.members) oldest = std::max(oldest, s.persons[m].age_months);
  const int left = p.loan_age_limit * 12 - oldest;
  return std::clamp(left, 0, p.max_loan_months);
}

Money loan_cap(double permanent_income, double chi, int months) {
  if (permanent_income <= 0.0 || months <= 0) return {};
  return Money::from_units(permanent_income * chi * months);
}

Money loan_cap(const State& s, const Household& h, const SimParams& p) {
  return loan_cap(h.permanent_income, p.chi, loan_term(s, h, p));
}

MortgageDecision evaluate_mortgage(const State& s, const Household& h, Money requested,
                                   Money savings_used, const SimParams& p) {
  MortgageDecision d;
  if (!s.bank.cash.positive()) {
    d.reason = Decline::bank_cash;
    return d;
  }
  if (s.live_mortgages(h.id) > 0) {
    d.reason = Decline::existing_mortgage;
    return d;
  }
  const Money amount = min(requested, loan_cap(s, h, p));
  if (!amount.positive()) {
    d.reason = Decline::no_capacity;
    return d;
  }
  const Money deposits_after = s.deposits() - savings_used;
  if ((s.loan_book() + amount).units() > p.nu * deposits_after.units()) {
    d.reason = Decline::book_limit;
    return d;
  }
  d.approved = true;
  d.amount = amount;
  return d;
}

Money annuity_payment(Money principal, double rate, int term) {
  if (term <= 0) return principal;
  if (rate <= 0.0) return Money::from_units(principal.units() / term);
  const double f = std::pow(1.0 + rate, term);
  return Money::from_units(principal.units() * rate * f / (f - 1.0));
}

Id originate_loan(State& s, Household& h, Money principal, double rate, int term) {
  Loan l;
  l.id = static_cast<Id>(s.bank.loans.size());
  l.household = h.id;
  l.principal = principal;
  l.outstanding = principal;
  l.rate = rate;
  l.term = term;
  l.remaining = term;
  l.payment = annuity_payment(principal, rate, term);
  l.active = true;
  l.origination_month = s.clock.month_index;
  s.bank.loans.push_back(l);
  h.loan = l.id;
  return l.id;
}

ServiceResult service_loan(State& s, Loan& loan) {
  ServiceResult r;
  Money scheduled;
  if (loan.remaining > 0) {
    r.interest = loan.outstanding.scaled(loan.rate);
    Money principal = loan.payment - r.interest;
    if (loan.remaining == 1 || principal > loan.outstanding) principal = loan.outstanding;
    scheduled = principal + r.interest;
    loan.outstanding -= principal;
    --loan.remaining;
  }
  r.due = scheduled + loan.arrears;
  Household& h = s.households[loan.household];
  const Draw d = draw_funds(s, h, r.due, s.bank.cash);
  r.paid = d.total();
  loan.arrears = r.due - r.paid;
  s.bank.interest_received += min(r.interest, r.paid);
  if (loan.remaining == 0 && loan.outstanding.is_zero() && loan.arrears.is_zero()) {
    loan.active = false;
    if (h.loan == loan.id) h.loan = kNone;
  }
  return r;
}

void service_loans(State& s) {
  for (auto& l : s.bank.loans) {
    if (!l.active) continue;
    if (!s.households[l.household].active) continue;
    service_loan(s, l);
  }
}

Money deposit_interest(Money deposit, double rate) {
  if (!deposit.positive()) return {};
  return deposit.scaled(rate);
}

void pay_deposit_interest(State& s, double rate) {
  for (auto& h : s.households) {
    if (!h.active) continue;
    const Money credit = deposit_interest(h.savings, rate);
    h.savings += credit;
    s.bank.interest_paid += credit;
  }
}

void settle_estate_loan(State& s, Household& h) {
  if (h.loan == kNone) return;
  Loan& l = s.bank.loans[h.loan];
  if (l.active) {
    const Money owed = l.outstanding + l.arrears;
    const Money from_reserve = min(owed, h.reserve);
    transfer(h.reserve, s.bank.cash, from_reserve);
    const Money from_savings = min(owed - from_reserve, h.savings);
    h.savings -= from_savings;  // the claim is cancelled against the loan
    const Money left = owed - from_reserve - from_savings;
    s.bank.written_off += left;
    l.outstanding = {};
    l.arrears = {};
    l.remaining = 0;
    l.active = false;
  }
  h.loan = kNone;
}

}  // namespace polisim
