#include <gtest/gtest.h>

#include "polisim/demographics.hpp"
#include "polisim/labor.hpp"
#include "polisim/ledger.hpp"
#include "polisim/simulation.hpp"
#include "support.hpp"

using namespace polisim;
using testkit::add_family;
using testkit::add_home;

TEST(Birthday, ZeroMortalitySurvivesAndAges) {
  State s = testkit::tiny_state();
  const Id h = add_family(s, {40});
  const Id p = s.households[h].members[0];
  s.persons[p].gender = Gender::male;
  Rng rng(1);
  const auto ev = run_birthday(s, p, rng);
  EXPECT_FALSE(ev.died);
  EXPECT_TRUE(s.persons[p].alive);
  EXPECT_EQ(s.persons[p].age_years(), 41);
}

TEST(Birthday, OldestAgeDies) {
  State s = testkit::tiny_state();
  s.tables.mortality[0][kMortalityMaxAge] = 1.0;
  s.tables.mortality[1][kMortalityMaxAge] = 1.0;
  const Id h = add_family(s, {109, 30});
  const Id p = s.households[h].members[0];
  s.persons[p].cash = Money::from_units(5);
  Rng rng(1);
  EXPECT_TRUE(run_birthday(s, p, rng).died);
  EXPECT_FALSE(s.persons[p].alive);
  EXPECT_EQ(s.households[h].members.size(), 1u);
  EXPECT_EQ(s.households[h].reserve, Money::from_units(5));
}

TEST(Birthday, ForcedFertilityAddsNewborn) {
  State s = testkit::tiny_state();
  const Id home = add_home(s, 0, 50, 2);
  const Id h = add_family(s, {29}, home);
  const Id mother = s.households[h].members[0];
  s.tables.fertility[30] = 1.0;
  Rng rng(1);
  const auto ev = run_birthday(s, mother, rng);
  ASSERT_NE(ev.child, kNone);
  EXPECT_EQ(s.households[h].members.size(), 2u);
  EXPECT_EQ(s.persons[ev.child].age_months, 0);
  EXPECT_EQ(s.persons[ev.child].household, h);
  EXPECT_GE(s.persons[ev.child].qualification, 1);
  EXPECT_LE(s.persons[ev.child].qualification, 5);
}

TEST(Marriage, ZeroRateDrawsNobody) {
  State s = testkit::tiny_state();
  for (int i = 0; i < 20; ++i) add_family(s, {30});
  Rng rng(1);
  EXPECT_TRUE(draw_marriage_pool(s, 0.0, SimParams{}, rng).empty());
  EXPECT_EQ(draw_marriage_pool(s, 1.0, SimParams{}, rng).size(), 20u);
}

TEST(Marriage, SoleAdultOwnersMergeAndTakeTheBetterHome) {
  State s = testkit::tiny_state();
  const Id small = add_home(s, 0, 30, 1);
  const Id big = add_home(s, 0, 100, 3);
  const Id a = add_family(s, {30}, small);
  const Id b = add_family(s, {32}, big);
  s.dwellings[small].owner_household = a;
  s.households[a].owned.push_back(small);
  s.dwellings[big].owner_household = b;
  s.households[b].owned.push_back(big);
  const Id f = testkit::add_firm(s, 0);
  hire(s, s.households[a].members[0], f);
  s.households[b].savings = Money::from_units(40);
  s.bank.cash = Money::from_units(40);

  const Id pa = s.households[a].members[0];
  const Id pb = s.households[b].members[0];
  const auto before = take_snapshot(s);
  Rng rng(1);
  const auto st = process_marriage(s, {pa, pb}, SimParams{}, rng);
  EXPECT_EQ(st.marriages, 1);

  const Household& merged = s.households[s.persons[pa].household];
  EXPECT_EQ(s.persons[pb].household, merged.id);
  EXPECT_EQ(merged.members.size(), 2u);
  EXPECT_EQ(merged.owned.size(), 2u);
  EXPECT_EQ(merged.dwelling, big);
  EXPECT_EQ(merged.savings, Money::from_units(40));
  EXPECT_EQ(s.persons[pa].spouse, pb);
  EXPECT_EQ(s.active_households(), 1u);
  EXPECT_TRUE(check_conservation(before, take_snapshot(s)).drift.is_zero());
}

TEST(Marriage, CoupleWithoutHousingIsRolledBack) {
  State s = testkit::tiny_state();
  const Id h1 = add_family(s, {30, 55}, add_home(s, 0, 50, 2));
  const Id h2 = add_family(s, {31, 60}, add_home(s, 0, 50, 2));
  const Id pa = s.households[h1].members[0];
  const Id pb = s.households[h2].members[0];
  const std::size_t households = s.households.size();
  Rng rng(1);
  const auto st = process_marriage(s, {pa, pb}, SimParams{}, rng);
  EXPECT_EQ(st.marriages, 0);
  EXPECT_EQ(st.rolled_back, 1);
  EXPECT_EQ(s.households.size(), households);
  EXPECT_EQ(s.persons[pa].household, h1);
  EXPECT_EQ(s.persons[pb].household, h2);
  EXPECT_EQ(s.persons[pa].spouse, kNone);
}

TEST(Marriage, OddPoolSkipsLastCandidate) {
  State s = testkit::tiny_state();
  const Id h1 = add_family(s, {30}, add_home(s, 0, 50, 2));
  const Id h2 = add_family(s, {30, 8}, add_home(s, 0, 50, 2));
  const Id h3 = add_family(s, {30}, add_home(s, 0, 50, 2));
  Rng rng(1);
  const std::vector<Id> pool{s.households[h1].members[0], s.households[h2].members[0],
                             s.households[h3].members[0]};
  process_marriage(s, pool, SimParams{}, rng);
  EXPECT_EQ(s.persons[pool[2]].spouse, kNone);
}

class Migration : public ::testing::Test {
 protected:
  void SetUp() override {
    s = testkit::tiny_state();
    landlord = add_family(s, {45}, add_home(s, 0, 80, 3));
    s.households[landlord].income_mean = 50.0;
    s.dwellings[s.households[landlord].dwelling].owner_household = landlord;
    s.households[landlord].owned.push_back(s.households[landlord].dwelling);
  }
  Id listed_rental(double value) {
    const Id d = add_home(s, 0, 20, 1, landlord);
    s.dwellings[d].value = value;
    s.dwellings[d].listing = Listing::rental;
    return d;
  }
  State s;
  Id landlord = kNone;
};

TEST_F(Migration, TargetMetMeansNoEntrants) {
  listed_rental(100.0);
  Rng rng(1);
  const auto st = process_migration(s, s.population_by_municipality(), SimParams{}, rng);
  EXPECT_EQ(st.households, 0);
  EXPECT_EQ(s.population(), 1);
}

TEST_F(Migration, EntrantWithAffordableRentalStays) {
  const Id d = listed_rental(100.0);  // rent well below any migrant's income
  const auto before = take_snapshot(s);
  const std::int64_t pop = s.population();
  Rng rng(3);
  const auto st = process_migration(s, {pop + 1}, SimParams{}, rng);
  ASSERT_EQ(st.households, 1);
  EXPECT_EQ(s.population(), pop + st.persons);
  EXPECT_NE(s.dwellings[d].occupant, kNone);
  EXPECT_TRUE(s.households[s.dwellings[d].occupant].renting);
  EXPECT_TRUE(check_conservation(before, take_snapshot(s)).drift.is_zero());
}

TEST_F(Migration, EntrantWithoutVacancyLeaves) {
  const std::int64_t pop = s.population();
  Rng rng(3);
  const auto st = process_migration(s, {pop + 1}, SimParams{}, rng);
  EXPECT_EQ(st.households, 0);
  EXPECT_EQ(st.rejected, 1);
  EXPECT_EQ(s.population(), pop);
}

TEST(Inheritance, EstateGoesToParentHousehold) {
  State s = testkit::tiny_state();
  const Id parent = add_family(s, {70}, add_home(s, 0, 60, 2));
  const Id home = add_home(s, 0, 40, 2);
  const Id child = add_family(s, {40}, home);
  s.households[child].parent = parent;
  s.dwellings[home].owner_household = child;
  s.households[child].owned.push_back(home);
  s.households[child].savings = Money::from_units(100);
  s.households[child].reserve = Money::from_units(7);
  s.households[parent].savings = Money::from_units(10);
  s.bank.cash = Money::from_units(110);

  kill_person(s, s.households[child].members[0]);
  Rng rng(1);
  process_inheritance(s, s.households[child], rng);
  EXPECT_EQ(s.households[parent].savings, Money::from_units(110));
  EXPECT_EQ(s.households[parent].reserve, Money::from_units(7));
  EXPECT_EQ(s.dwellings[home].owner_household, parent);
  EXPECT_FALSE(s.households[child].active);
  EXPECT_EQ(s.dwellings[home].occupant, kNone);
}

TEST(Inheritance, WithoutRelativesTheOnlyOtherHouseholdInherits) {
  State s = testkit::tiny_state();
  const Id other = add_family(s, {50}, add_home(s, 0, 60, 2));
  const Id home = add_home(s, 0, 40, 2);
  const Id dead = add_family(s, {80}, home);
  s.dwellings[home].owner_household = dead;
  s.households[dead].owned.push_back(home);
  kill_person(s, s.households[dead].members[0]);
  Rng rng(1);
  process_inheritance(s, s.households[dead], rng);
  EXPECT_EQ(s.dwellings[home].owner_household, other);
}

TEST(Inheritance, EmptyEstateMovesNoMoney) {
  State s = testkit::tiny_state();
  add_family(s, {50}, add_home(s, 0, 60, 2));
  const Id dead = add_family(s, {80});
  kill_person(s, s.households[dead].members[0]);
  const auto before = take_snapshot(s);
  Rng rng(1);
  process_inheritance(s, s.households[dead], rng);
  const auto after = take_snapshot(s);
  for (std::size_t k = 0; k < kAccountKinds; ++k) {
    if (k == static_cast<std::size_t>(AccountKind::households)) continue;
    EXPECT_EQ(before.balances[k], after.balances[k]);
  }
  EXPECT_EQ(before.total(), after.total());
}

TEST(Demographics, PopulationAccountingAndNoOrphanDwellings) {
  RunConfig c = testkit::small_config(42, 24);
  c.params.marriage_rate = 0.01;
  Simulation sim(c);
  std::int64_t pop = sim.state().population();
  for (std::size_t t = 0; t < c.horizon_months; ++t) {
    sim.step();
    const State& s = sim.state();
    EXPECT_EQ(s.population() - pop, s.flows.births - s.flows.deaths + s.flows.migrants_in) << "month " << t;
    pop = s.population();
    for (const auto& d : s.dwellings) {
      const bool owned = d.owner_firm != kNone ||
                         (d.owner_household != kNone && s.households[d.owner_household].active);
      ASSERT_TRUE(owned) << "dwelling " << d.id << " month " << t;
    }
  }
}
