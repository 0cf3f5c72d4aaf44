#include "polisim/state.hpp"

#include <algorithm>

namespace polisim {

double Household::prior_year_pi() const {
  if (pi_count == 0) return permanent_income;
  const int n = std::min(pi_count, 12);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += pi_history[i];
  return sum / n;
}

Point State::household_location(const Household& h) const {
  if (h.dwelling == kNone) return {};
  return regions[dwellings[h.dwelling].region].location;
}

Id State::household_region(const Household& h) const {
  if (h.dwelling == kNone) return kNone;
  return dwellings[h.dwelling].region;
}

Id State::household_municipality(const Household& h) const {
  const Id r = household_region(h);
  return r == kNone ? kNone : regions[r].municipality;
}

std::int64_t State::population() const {
  std::int64_t n = 0;
  for (const auto& h : households) {
    if (h.active) n += static_cast<std::int64_t>(h.members.size());
  }
  return n;
}

std::vector<std::int64_t> State::population_by_municipality() const {
  std::vector<std::int64_t> out(municipalities.size(), 0);
  for (const auto& h : households) {
    if (!h.active) continue;
    const Id m = household_municipality(h);
    if (m != kNone) out[m] += static_cast<std::int64_t>(h.members.size());
  }
  return out;
}

std::size_t State::active_households() const {
  return static_cast<std::size_t>(
      std::count_if(households.begin(), households.end(), [](const Household& h) { return h.active; }));
}

Money State::deposits() const {
  Money d;
  for (const auto& h : households) {
    if (h.active) d += h.savings;
  }
  return d;
}

Money State::loan_book() const {
  Money b;
  for (const auto& l : bank.loans) {
    if (l.active) b += l.outstanding + l.arrears;
  }
  return b;
}

int State::live_mortgages(Id household) const {
  int n = 0;
  for (const auto& l : bank.loans) {
    if (l.active && l.household == household) ++n;
  }
  return n;
}

std::size_t State::listed_count() const {
  return static_cast<std::size_t>(std::count_if(dwellings.begin(), dwellings.end(), [](const Dwelling& d) {
    return d.listing != Listing::none;
  }));
}

Id State::add_person(Person p) {
  p.id = static_cast<Id>(persons.size());
  persons.push_back(std::move(p));
  return persons.back().id;
}

Id State::add_household(Household h) {
  h.id = static_cast<Id>(households.size());
  households.push_back(std::move(h));
  return households.back().id;
}

Id State::add_firm(Firm f) {
  f.id = static_cast<Id>(firms.size());
  firms.push_back(std::move(f));
  last_prices.push_back(firms.back().price);
  return firms.back().id;
}

Id State::add_dwelling(Dwelling d) {
  d.id = static_cast<Id>(dwellings.size());
  dwellings.push_back(d);
  return d.id;
}

void State::remove_member(Household& h, Id person) {
  h.members.erase(std::remove(h.members.begin(), h.members.end(), person), h.members.end());
}

Money household_cash(const State& s, const Household& h) {
  Money c;
  for (Id m : h.members) c += s.persons[m].cash;
  return c;
}

Money household_funds(const State& s, const Household& h) {
  return household_cash(s, h) + h.reserve + h.savings;
}

Draw draw_funds(State& s, Household& h, Money amount, Money& out) {
  Draw d;
  Money need = amount;
  for (Id m : h.members) {
    if (!need.positive()) break;
    Money& c = s.persons[m].cash;
    const Money take = min(need, max(c, Money{}));
    if (take.positive()) {
      transfer(c, out, take);
      d.cash += take;
      need -= take;
    }
  }
  if (need.positive() && h.reserve.positive()) {
    const Money take = min(need, h.reserve);
    transfer(h.reserve, out, take);
    d.reserve += take;
    need -= take;
  }
  if (need.positive() && h.savings.positive()) {
    const Money take = min(need, h.savings);
    h.savings -= take;
    transfer(s.bank.cash, out, take);
    d.savings += take;
  }
  return d;
}

void refund(State& s, Household& h, const Draw& d, Money amount, Money& from) {
  Money left = amount;
  const Money to_savings = min(left, d.savings);
  if (to_savings.positive()) {
    transfer(from, s.bank.cash, to_savings);
    h.savings += to_savings;
    left -= to_savings;
  }
  const Money to_reserve = min(left, d.reserve);
  if (to_reserve.positive()) {
    transfer(from, h.reserve, to_reserve);
    left -= to_reserve;
  }
  if (left.positive()) {
    if (h.members.empty()) {
      transfer(from, h.reserve, left);
    } else {
      transfer(from, s.persons[h.members.front()].cash, left);
    }
  }
}

void credit_income(Household& h, Money& from, Money amount) {
  transfer(from, h.reserve, amount);
  h.income_month += amount;
}

void deposit(State& s, Household& h, Money& from, Money amount) {
  transfer(from, s.bank.cash, amount);
  h.savings += amount;
}

}  // namespace polisim
