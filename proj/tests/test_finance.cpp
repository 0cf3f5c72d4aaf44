#include <gtest/gtest.h>

#include "polisim/finance.hpp"
#include "polisim/ledger.hpp"
#include "support.hpp"

using namespace polisim;

namespace {

struct Bankable {
  State s = testkit::tiny_state();
  Id h = kNone;
  Bankable(int age_months, double pi) {
    h = testkit::add_family(s, {0});
    s.persons[s.households[h].members[0]].age_months = age_months;
    s.households[h].permanent_income = pi;
    // Another depositor keeps the book limit slack.
    const Id other = testkit::add_family(s, {50});
    s.households[other].savings = Money::from_units(100000);
    s.bank.cash = Money::from_units(100000);
  }
};

}  // namespace

TEST(LoanCap, Product) {
  EXPECT_EQ(loan_cap(10.0, 0.5, 360), Money::from_units(1800));
  EXPECT_TRUE(loan_cap(-3.0, 0.5, 360).is_zero());
  EXPECT_TRUE(loan_cap(10.0, 0.5, 0).is_zero());
}

TEST(LoanCap, TermEndsAtAgeLimit) {
  Bankable b(74 * 12, 10.0);
  const SimParams p;
  EXPECT_EQ(loan_term(b.s, b.s.households[b.h], p), 12);
  EXPECT_EQ(loan_cap(b.s, b.s.households[b.h], p), Money::from_units(10.0 * 0.5 * 12));
  Bankable young(30 * 12, 10.0);
  EXPECT_EQ(loan_term(young.s, young.s.households[young.h], p), 360);
  Bankable old(80 * 12, 10.0);
  EXPECT_EQ(loan_term(old.s, old.s.households[old.h], p), 0);
}

TEST(Mortgage, ApprovedUpToCap) {
  Bankable b(30 * 12, 10.0);
  const SimParams p;
  const auto d = evaluate_mortgage(b.s, b.s.households[b.h], Money::from_units(5000), {}, p);
  EXPECT_TRUE(d.approved);
  EXPECT_EQ(d.amount, Money::from_units(1800));
}

TEST(Mortgage, ExistingMortgageDeclines) {
  Bankable b(30 * 12, 10.0);
  originate_loan(b.s, b.s.households[b.h], Money::from_units(10), 0.01, 12);
  const auto d = evaluate_mortgage(b.s, b.s.households[b.h], Money::from_units(100), {}, SimParams{});
  EXPECT_FALSE(d.approved);
  EXPECT_EQ(d.reason, Decline::existing_mortgage);
}

TEST(Mortgage, EmptyBankDeclines) {
  Bankable b(30 * 12, 10.0);
  b.s.bank.cash = {};
  const auto d = evaluate_mortgage(b.s, b.s.households[b.h], Money::from_units(100), {}, SimParams{});
  EXPECT_EQ(d.reason, Decline::bank_cash);
}

TEST(Mortgage, BookLimitCountsWithdrawnSavings) {
  Bankable b(30 * 12, 10.0);
  const SimParams p;
  // 0.7 * (100000 - 99000) = 700 < 800.
  const auto d = evaluate_mortgage(b.s, b.s.households[b.h], Money::from_units(800),
                                   Money::from_units(99000), p);
  EXPECT_EQ(d.reason, Decline::book_limit);
  const auto ok = evaluate_mortgage(b.s, b.s.households[b.h], Money::from_units(700),
                                    Money::from_units(99000), p);
  EXPECT_TRUE(ok.approved);
}

TEST(Mortgage, NoIncomeNoCapacity) {
  Bankable b(30 * 12, 0.0);
  const auto d = evaluate_mortgage(b.s, b.s.households[b.h], Money::from_units(100), {}, SimParams{});
  EXPECT_EQ(d.reason, Decline::no_capacity);
}

namespace {

Loan& flat_loan(State& s, Id h) {
  Loan l;
  l.id = static_cast<Id>(s.bank.loans.size());
  l.household = h;
  l.principal = Money::from_units(100);
  l.outstanding = l.principal;
  l.rate = 0.0;
  l.term = 10;
  l.remaining = 10;
  l.payment = Money::from_units(10);
  l.active = true;
  s.bank.loans.push_back(l);
  s.households[h].loan = l.id;
  return s.bank.loans.back();
}

}  // namespace

TEST(Servicing, FullFundsLeaveNoArrears) {
  State s = testkit::tiny_state();
  const Id h = testkit::add_family(s, {40});
  s.households[h].reserve = Money::from_units(50);
  Loan& l = flat_loan(s, h);
  const auto r = service_loan(s, l);
  EXPECT_EQ(r.paid, Money::from_units(10));
  EXPECT_TRUE(l.arrears.is_zero());
  EXPECT_EQ(s.bank.cash, Money::from_units(10));
}

TEST(Servicing, ShortfallBecomesArrearsAndIsRecovered) {
  State s = testkit::tiny_state();
  const Id h = testkit::add_family(s, {40});
  Loan& l = flat_loan(s, h);
  auto r = service_loan(s, l);
  EXPECT_TRUE(r.paid.is_zero());
  EXPECT_EQ(l.arrears, Money::from_units(10));

  s.households[h].reserve = Money::from_units(25);
  r = service_loan(s, l);
  EXPECT_EQ(r.due, Money::from_units(20));
  EXPECT_EQ(r.paid, Money::from_units(20));
  EXPECT_TRUE(l.arrears.is_zero());
  EXPECT_EQ(s.households[h].reserve, Money::from_units(5));
}

TEST(Servicing, AnnuityAmortizesExactly) {
  State s = testkit::tiny_state();
  const Id h = testkit::add_family(s, {30});
  s.households[h].reserve = Money::from_units(1e6);
  const Money principal = Money::from_units(12345.67);
  const Id id = originate_loan(s, s.households[h], principal, 0.0076, 240);
  Money paid, interest;
  int months = 0;
  while (s.bank.loans[id].active) {
    const auto r = service_loan(s, s.bank.loans[id]);
    paid += r.paid;
    interest += r.interest;
    ++months;
    ASSERT_LE(months, 240);
  }
  EXPECT_EQ(months, 240);
  EXPECT_EQ(paid, principal + interest);
  EXPECT_EQ(s.households[h].loan, kNone);
  const Money pay = s.bank.loans[id].payment;
  EXPECT_NEAR(paid.units(), pay.units() * 240, 240 * 0.01);
}

TEST(Deposits, Interest) {
  EXPECT_TRUE(deposit_interest({}, 0.01).is_zero());
  EXPECT_EQ(deposit_interest(Money::from_units(1000), 0.01), Money::from_units(10));
}

TEST(Deposits, MonthlyCompounding) {
  State s = testkit::tiny_state();
  const Id h = testkit::add_family(s, {40});
  s.households[h].savings = Money::from_units(1000);
  pay_deposit_interest(s, 0.01);
  pay_deposit_interest(s, 0.01);
  EXPECT_EQ(s.households[h].savings, Money::from_units(1020.10));
  EXPECT_EQ(s.bank.interest_paid, Money::from_units(20.10));
}

TEST(Estate, LoanSettledFromReserveThenSavingsRestWrittenOff) {
  State s = testkit::tiny_state();
  const Id h = testkit::add_family(s, {40});
  s.households[h].reserve = Money::from_units(30);
  s.households[h].savings = Money::from_units(20);
  const Id id = originate_loan(s, s.households[h], Money::from_units(100), 0.01, 12);
  s.bank.loans[id].arrears = Money::from_units(5);
  const auto before = take_snapshot(s);
  settle_estate_loan(s, s.households[h]);
  EXPECT_FALSE(s.bank.loans[id].active);
  EXPECT_TRUE(s.households[h].reserve.is_zero());
  EXPECT_TRUE(s.households[h].savings.is_zero());
  EXPECT_EQ(s.bank.written_off, Money::from_units(55));
  EXPECT_EQ(s.households[h].loan, kNone);
  EXPECT_TRUE(check_conservation(before, take_snapshot(s)).drift.is_zero());
}
