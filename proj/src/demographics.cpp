#include "polisim/demographics.hpp"

#include <algorithm>
#include <cmath>

#include "polisim/finance.hpp"
#include "polisim/goods.hpp"
#include "polisim/housing.hpp"
#include "polisim/labor.hpp"
#include "polisim/state.hpp"

namespace polisim {

int draw_qualification(const Region& r, Rng& rng) {
  const double u = rng.uniform();
  for (int l = 0; l < kQualificationLevels; ++l) {
    if (u < r.qualification_cdf[l]) return l + 1;
  }
  return kQualificationLevels;
}

void kill_person(State& s, Id id) {
  Person& p = s.persons[id];
  if (!p.alive) return;
  fire(s, id);
  if (p.household != kNone) {
    Household& h = s.households[p.household];
    transfer(p.cash, h.reserve, p.cash);
    s.remove_member(h, id);
  }
  if (p.spouse != kNone) {
    s.persons[p.spouse].spouse = kNone;
    p.spouse = kNone;
  }
  p.alive = false;
}

BirthdayEvents run_birthday(State& s, Id id, Rng& rng) {
  BirthdayEvents ev;
  Person& p = s.persons[id];
  p.age_months += 12;
  const int age = std::min(p.age_years(), kMortalityMaxAge);
  const auto g = static_cast<std::size_t>(p.gender);
  if (rng.bernoulli(s.tables.mortality[g][age])) {
    kill_person(s, id);
    ev.died = true;
    return ev;
  }
  if (p.gender == Gender::female && age >= kFertilityMinAge && age <= kFertilityMaxAge &&
      rng.bernoulli(s.tables.fertility[age])) {
    const Id hid = p.household;
    Household& h = s.households[hid];
    const Id region = s.household_region(h);
    Person child;
    child.gender = rng.bernoulli(0.5) ? Gender::male : Gender::female;
    child.birthday_month = s.clock.calendar_month();
    child.qualification = region == kNone ? 1 : draw_qualification(s.regions[region], rng);
    child.household = hid;
    child.origin_household = hid;
    ev.child = s.add_person(child);
    s.households[hid].members.push_back(ev.child);
  }
  return ev;
}

namespace {

Household* pick_heir(State& s, const Household& dead, Rng& rng) {
  if (dead.parent != kNone && dead.parent != dead.id) {
    Household& parent = s.households[dead.parent];
    if (parent.active && !parent.members.empty()) return &parent;
  }
  std::vector<Id> alive;
  for (const auto& h : s.households) {
    if (h.active && !h.members.empty() && h.id != dead.id) alive.push_back(h.id);
  }
  if (alive.empty()) return nullptr;
  return &s.households[alive[rng.index(alive.size())]];
}

}  // namespace

void process_inheritance(State& s, Household& dead, Rng& rng) {
  if (!dead.members.empty() || !dead.active) return;
  settle_estate_loan(s, dead);
  vacate(s, dead);
  Household* heir = pick_heir(s, dead, rng);
  if (heir != nullptr) {
    transfer(dead.reserve, heir->reserve, dead.reserve);
    heir->savings += dead.savings;
    dead.savings = {};
    for (Id d : dead.owned) {
      s.dwellings[d].owner_household = heir->id;
      heir->owned.push_back(d);
    }
    dead.owned.clear();
  } else {
    transfer(dead.reserve, s.external, dead.reserve);
  }
  dead.active = false;
}

namespace {

int adults(const State& s, const Household& h, int adult_age) {
  int n = 0;
  for (Id m : h.members) n += s.persons[m].age_years() >= adult_age ? 1 : 0;
  return n;
}

// Moves a member's share of the running income mean along with them.
void move_member(State& s, Id person, Household& from, Household& to) {
  const double share = std::min(from.income_mean, s.persons[person].wage.units());
  from.income_mean -= share;
  to.income_mean += share;
  s.remove_member(from, person);
  to.members.push_back(person);
  s.persons[person].household = to.id;
}

// Folds `src` into `dst`: members, property, deposits and any loan.
void merge_households(State& s, Household& dst, Household& src) {
  for (Id m : std::vector<Id>(src.members)) {
    s.persons[m].household = dst.id;
    s.persons[m].origin_household = src.id;
    dst.members.push_back(m);
  }
  src.members.clear();
  dst.income_mean += src.income_mean;
  vacate(s, src);
  for (Id d : src.owned) {
    s.dwellings[d].owner_household = dst.id;
    dst.owned.push_back(d);
  }
  src.owned.clear();
  transfer(src.reserve, dst.reserve, src.reserve);
  dst.savings += src.savings;
  src.savings = {};
  if (src.loan != kNone) {
    dst.loan = src.loan;
    s.bank.loans[src.loan].household = dst.id;
    src.loan = kNone;
  }
  src.active = false;
}

bool has_live_loan(const State& s, const Household& h) {
  return h.loan != kNone && s.bank.loans[h.loan].active;
}

// A new household for `people` that only persists if it finds a rental.
bool form_household(State& s, const std::vector<Id>& people, const SimParams& p, Rng& rng) {
  Household probe;
  double income = 0.0;
  Money cash;
  for (Id m : people) {
    income += s.persons[m].wage.units();
    cash += s.persons[m].cash;
  }
  probe.income_mean = income;
  probe.income_months = 1;
  probe.permanent_income = permanent_income(income, cash.units(), s.baseline_rate);
  const auto choice = seek_rental(s, probe, p, rng);
  if (!choice) return false;

  const Id first_home = s.persons[people.front()].household;
  Household h;
  h.parent = first_home;
  h.income_months = 1;
  h.permanent_income = probe.permanent_income;
  const Id hid = s.add_household(std::move(h));
  for (Id m : people) {
    Household& from = s.households[s.persons[m].household];
    s.persons[m].origin_household = from.id;
    move_member(s, m, from, s.households[hid]);
  }
  occupy(s, s.households[hid], s.dwellings[choice->dwelling], true, choice->rent);
  return true;
}

}  // namespace

std::vector<Id> draw_marriage_pool(State& s, double rate, const SimParams& p, Rng& rng) {
  std::vector<Id> pool;
  if (rate <= 0.0) return pool;
  for (const auto& per : s.persons) {
    if (!per.alive || per.spouse != kNone || per.age_years() < p.adult_age) continue;
    if (rng.bernoulli(rate)) pool.push_back(per.id);
  }
  rng.shuffle(pool);
  return pool;
}

MarriageStats process_marriage(State& s, const std::vector<Id>& pool, const SimParams& p, Rng& rng) {
  MarriageStats st;
  for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
    const Id a = pool[i];
    const Id b = pool[i + 1];
    Person& pa = s.persons[a];
    Person& pb = s.persons[b];
    if (!pa.alive || !pb.alive || pa.spouse != kNone || pb.spouse != kNone) continue;
    if (pa.household == pb.household) continue;
    Household& ha = s.households[pa.household];
    Household& hb = s.households[pb.household];
    const bool sole_a = adults(s, ha, p.adult_age) == 1;
    const bool sole_b = adults(s, hb, p.adult_age) == 1;

    bool ok = true;
    if (sole_a && sole_b) {
      if (has_live_loan(s, ha) && has_live_loan(s, hb)) {
        ok = false;
      } else {
        merge_households(s, ha, hb);
        decide_move(s, ha, p);
      }
    } else if (sole_a) {
      pb.origin_household = hb.id;
      move_member(s, b, hb, ha);
    } else if (sole_b) {
      pa.origin_household = ha.id;
      move_member(s, a, ha, hb);
    } else {
      ok = form_household(s, {a, b}, p, rng);
    }
    if (!ok) {
      ++st.rolled_back;
      continue;
    }
    s.persons[a].spouse = b;
    s.persons[b].spouse = a;
    ++st.marriages;
  }
  return st;
}

void process_divorce(State& s, const SimParams& p, Rng& rng) {
  if (p.divorce_rate <= 0.0) return;
  const std::size_t n = s.persons.size();
  for (std::size_t i = 0; i < n; ++i) {
    Person& per = s.persons[i];
    if (!per.alive || per.spouse == kNone || per.spouse < per.id) continue;
    if (!rng.bernoulli(p.divorce_rate)) continue;
    const Id partner = per.spouse;
    if (s.persons[partner].household != per.household) continue;
    if (form_household(s, {per.id}, p, rng)) {
      s.persons[partner].spouse = kNone;
      s.persons[i].spouse = kNone;
    }
  }
}

MigrationStats process_migration(State& s, const std::vector<std::int64_t>& target,
                                 const SimParams& p, Rng& rng) {
  MigrationStats st;
  const auto current = s.population_by_municipality();

  double income_sum = 0.0;
  int income_n = 0;
  for (const auto& h : s.households) {
    if (h.active && !h.members.empty()) {
      income_sum += h.income_mean;
      ++income_n;
    }
  }
  const double mean_income = income_n > 0 ? income_sum / income_n : 0.0;

  for (std::size_t m = 0; m < s.municipalities.size() && m < target.size(); ++m) {
    std::int64_t deficit = target[m] - current[m];
    const Municipality& muni = s.municipalities[m];
    if (deficit <= 0 || muni.regions.empty()) continue;

    std::vector<double> weights;
    double avg_size = 0.0;
    for (Id r : muni.regions) {
      weights.push_back(s.regions[r].population_weight);
      avg_size += s.regions[r].population_weight * s.regions[r].avg_household_size;
    }
    avg_size = std::max(avg_size, 1.0);
    int attempts = static_cast<int>(std::ceil(static_cast<double>(deficit) / avg_size));
    attempts = std::min(attempts, 1000);

    for (int k = 0; k < attempts && deficit > 0; ++k) {
      const Region& region = s.regions[muni.regions[rng.weighted(weights)]];
      int size = 1;
      for (int j = 0; j < 6; ++j) size += rng.bernoulli((region.avg_household_size - 1.0) / 6.0) ? 1 : 0;

      std::vector<Person> people;
      for (int j = 0; j < size; ++j) {
        Person per;
        const int age = j == 0   ? rng.uniform_int(p.adult_age, 60)
                        : j == 1 ? rng.uniform_int(p.adult_age, 60)
                                 : rng.uniform_int(0, p.adult_age - 1);
        per.age_months = age * 12;
        per.gender = rng.bernoulli(0.5) ? Gender::male : Gender::female;
        per.birthday_month = rng.uniform_int(0, 11);
        per.qualification = draw_qualification(region, rng);
        people.push_back(per);
      }
      const double income = mean_income * rng.lognormal(0.0, 0.3);
      const Money endowment = Money::from_units(income * rng.uniform(1.0, 6.0));

      Household probe;
      probe.income_mean = income;
      probe.income_months = 1;
      probe.reserve = endowment;
      probe.permanent_income = permanent_income(income, endowment.units(), s.baseline_rate);
      const auto choice = seek_rental(s, probe, p, rng, muni.id);
      if (!choice) {
        ++st.rejected;
        continue;
      }

      probe.reserve = {};
      const Id hid = s.add_household(probe);
      for (auto& per : people) {
        per.household = hid;
        per.origin_household = hid;
        s.households[hid].members.push_back(s.add_person(per));
      }
      Household& h = s.households[hid];
      transfer(s.external, h.reserve, endowment);
      occupy(s, h, s.dwellings[choice->dwelling], true, choice->rent);
      ++st.households;
      st.persons += size;
      deficit -= size;
    }
  }
  return st;
}

void run_demographics(State& s, const SimParams& p) {
  (void)p;
  Rng& rng = s.rng[Stream::demographics];
  const int month = s.clock.calendar_month();
  const std::size_t n = s.persons.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!s.persons[i].alive || s.persons[i].birthday_month != month) continue;
    const BirthdayEvents ev = run_birthday(s, static_cast<Id>(i), rng);
    if (ev.died) ++s.flows.deaths;
    if (ev.child != kNone) ++s.flows.births;
  }
  for (std::size_t i = 0; i < s.households.size(); ++i) {
    Household& h = s.households[i];
    if (h.active && h.members.empty()) process_inheritance(s, h, rng);
  }
}

}  // namespace polisim
