#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "polisim/error.hpp"
#include "polisim/ledger.hpp"
#include "polisim/money.hpp"
#include "polisim/rng.hpp"
#include "support.hpp"

using namespace polisim;

TEST(Money, RoundsHalfToEven) {
  EXPECT_EQ(Money::from_units(0.125).minor(), 12);
  EXPECT_EQ(Money::from_units(0.375).minor(), 38);
  EXPECT_EQ(Money::from_units(-0.125).minor(), -12);
  EXPECT_EQ(Money::from_minor(5).scaled(0.5).minor(), 2);
  EXPECT_EQ(Money::from_minor(7).scaled(0.5).minor(), 4);
  EXPECT_EQ(Money::from_units(12.34).to_string(), "12.34");
  EXPECT_EQ(Money::from_minor(-5).to_string(), "-0.05");
}

TEST(Money, TransferMovesExactly) {
  Money a = Money::from_units(10);
  Money b;
  transfer(a, b, Money::from_units(3.5));
  EXPECT_EQ(a, Money::from_units(6.5));
  EXPECT_EQ(b, Money::from_units(3.5));
  EXPECT_EQ(a + b, Money::from_units(10));
}

TEST(Money, ApportionSumsExactly) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(30);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 5.0);
    const Money total = Money::from_minor(static_cast<std::int64_t>(rng.index(1'000'000)) - 1000);
    const auto parts = apportion(total, w);
    Money sum;
    for (Money p : parts) sum += p;
    ASSERT_EQ(sum, total);
    const bool any = std::any_of(w.begin(), w.end(), [](double x) { return x > 0.0; });
    for (std::size_t i = 0; i < n; ++i) {
      if (any && w[i] == 0.0) EXPECT_TRUE(parts[i].is_zero());
    }
  }
}

TEST(Money, ApportionAllZeroWeightsSplitsEvenly) {
  const std::vector<double> w(4, 0.0);
  const auto parts = apportion(Money::from_units(1), w);
  for (Money p : parts) EXPECT_EQ(p.minor(), 25);
}

TEST(Money, ApportionLargestRemainder) {
  const std::vector<double> w{1, 1, 1};
  const auto parts = apportion(Money::from_minor(100), w);
  EXPECT_EQ(parts[0].minor() + parts[1].minor() + parts[2].minor(), 100);
  for (Money p : parts) EXPECT_TRUE(p.minor() == 33 || p.minor() == 34);
}

TEST(Rng, EngineMatchesStandardSequence) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng r(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = r.next();
  EXPECT_EQ(x, 9981545732273789042ull);
}

TEST(Rng, SameSeedSameDraws) {
  Rng a(3), b(3);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.index(17), b.index(17));
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(Rng, DistributionBounds) {
  Rng r(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const int k = r.uniform_int(2, 4);
    ASSERT_GE(k, 2);
    ASSERT_LE(k, 4);
  }
  EXPECT_FALSE(r.bernoulli(0.0));
  EXPECT_TRUE(r.bernoulli(1.0));
  const std::vector<double> w{0.0, 1.0, 0.0, 2.0};
  for (int i = 0; i < 1000; ++i) {
    const auto k = r.weighted(w);
    ASSERT_TRUE(k == 1 || k == 3);
  }
}

TEST(Rng, SampleIsDistinct) {
  Rng r(9);
  for (int t = 0; t < 200; ++t) {
    const auto s = r.sample(20, 7);
    ASSERT_EQ(s.size(), 7u);
    ASSERT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 7u);
    for (auto k : s) ASSERT_LT(k, 20u);
  }
}

TEST(Rng, StreamsAreIndependent) {
  RngStreams a(42), b(42);
  for (int i = 0; i < 1000; ++i) a[Stream::labor].next();
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a[Stream::goods].next(), b[Stream::goods].next());
  EXPECT_FALSE(RngStreams(1)[Stream::goods] == RngStreams(2)[Stream::goods]);
  EXPECT_FALSE(b[Stream::labor] == b[Stream::housing]);
}

TEST(Ledger, IdenticalSnapshotsHaveNoDrift) {
  State s = testkit::tiny_state();
  const auto snap = take_snapshot(s);
  const auto r = check_conservation(snap, snap);
  EXPECT_TRUE(r.drift.is_zero());
  EXPECT_FALSE(r.violated);
}

TEST(Ledger, InternalTransferHasNoDrift) {
  State s = testkit::tiny_state();
  const Id f = testkit::add_firm(s, 0);
  const Id h = testkit::add_family(s, {30});
  s.firms[f].cash = Money::from_units(100);
  const auto before = take_snapshot(s);
  transfer(s.firms[f].cash, s.persons[s.households[h].members[0]].cash, Money::from_units(10));
  const auto r = check_conservation(before, take_snapshot(s));
  EXPECT_TRUE(r.drift.is_zero());
}

TEST(Ledger, MigrantEndowmentBookedToExternalHasNoDrift) {
  State s = testkit::tiny_state();
  const auto before = take_snapshot(s);
  const Id h = testkit::add_family(s, {30});
  transfer(s.external, s.households[h].reserve, Money::from_units(50));
  const auto r = check_conservation(before, take_snapshot(s));
  EXPECT_TRUE(r.drift.is_zero());
  EXPECT_EQ(s.households[h].reserve, Money::from_units(50));
}

TEST(Ledger, CreatedMoneyIsFlagged) {
  State s = testkit::tiny_state();
  const auto before = take_snapshot(s);
  s.bank.cash += Money::from_units(1);
  const auto r = check_conservation(before, take_snapshot(s));
  EXPECT_TRUE(r.violated);
  EXPECT_EQ(r.drift, Money::from_units(1));
}

TEST(Ledger, DifferentRunsAreStructuralError) {
  State a = testkit::tiny_state(1, 1, 1);
  State b = testkit::tiny_state(1, 1, 2);
  EXPECT_THROW(check_conservation(take_snapshot(a), take_snapshot(b)), StructuralError);
}

TEST(State, DrawAndRefundRestoreSources) {
  State s = testkit::tiny_state();
  const Id hid = testkit::add_family(s, {30, 28});
  Household& h = s.households[hid];
  s.persons[h.members[0]].cash = Money::from_units(3);
  h.reserve = Money::from_units(4);
  h.savings = Money::from_units(5);
  s.bank.cash = Money::from_units(5);

  Money pot;
  const Draw d = draw_funds(s, h, Money::from_units(10), pot);
  EXPECT_EQ(d.cash, Money::from_units(3));
  EXPECT_EQ(d.reserve, Money::from_units(4));
  EXPECT_EQ(d.savings, Money::from_units(3));
  EXPECT_EQ(pot, Money::from_units(10));
  EXPECT_EQ(h.savings, Money::from_units(2));

  refund(s, h, d, Money::from_units(4), pot);
  EXPECT_EQ(pot, Money::from_units(6));
  EXPECT_EQ(h.savings, Money::from_units(5));
  EXPECT_EQ(h.reserve, Money::from_units(1));
}
