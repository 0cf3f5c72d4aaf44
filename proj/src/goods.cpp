#include "polisim/goods.hpp"

#include <algorithm>
#include <cmath>

#include "polisim/state.hpp"

namespace polisim {

double permanent_income(double mean_income, double wealth, double r) {
  const double i = r / (1.0 + r);
  return i * mean_income + i * mean_income / r + wealth * r;
}

double household_wealth(const State& s, const Household& h) {
  double w = h.reserve.units() + h.savings.units();
  for (Id d : h.owned) w += s.dwellings[d].value;
  if (h.loan != kNone) {
    const Loan& l = s.bank.loans[h.loan];
    if (l.active) w -= (l.outstanding + l.arrears).units();
  }
  return w;
}

void refresh_permanent_income(State& s, Household& h) {
  h.permanent_income = permanent_income(h.income_mean, household_wealth(s, h), s.baseline_rate);
}

std::size_t choose_offer(std::span<const FirmOffer> sample, ChoiceRule rule) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sample.size(); ++i) {
    const bool better = rule == ChoiceRule::nearest ? sample[i].distance < sample[best].distance
                                                    : sample[i].price < sample[best].price;
    if (better) best = i;
  }
  return sample[best].firm;
}

std::optional<std::size_t> choose_firm(std::span<const FirmOffer> sample, Rng& rng) {
  if (sample.empty()) return std::nullopt;
  const ChoiceRule rule = rng.bernoulli(0.5) ? ChoiceRule::nearest : ChoiceRule::cheapest;
  return choose_offer(sample, rule);
}

Purchase settle_purchase(Money spend, double price, double inventory, double tax_consumption) {
  Purchase out;
  if (!spend.positive() || price <= 0.0 || inventory <= 0.0) {
    out.returned = spend;
    return out;
  }
  out.spent = min(spend, Money::from_units(inventory * price));
  out.quantity = std::min(inventory, out.spent.units() / price);
  out.tax = out.spent.scaled(tax_consumption);
  out.revenue = out.spent - out.tax;
  out.returned = spend - out.spent;
  return out;
}

void rebalance_household(State& s, Household& h, const SimParams& p) {
  const Money pi = max(Money::from_units(h.permanent_income), Money{});
  const Money target = pi.scaled(p.reserve_multiple);

  Money cash = household_cash(s, h);
  Money excess = cash - pi;
  if (excess.positive()) {
    Money pot;
    for (Id m : h.members) {
      if (!excess.positive()) break;
      Money& c = s.persons[m].cash;
      const Money take = min(excess, max(c, Money{}));
      transfer(c, pot, take);
      excess -= take;
    }
    const Money to_reserve = max(min(pot, target - h.reserve), Money{});
    transfer(pot, h.reserve, to_reserve);
    if (pot.positive()) deposit(s, h, pot, pot);
  }
  if (h.reserve > target) {
    Money extra = h.reserve - target;
    Money pot;
    transfer(h.reserve, pot, extra);
    deposit(s, h, pot, extra);
  }
}

void run_goods_market(State& s, const SimParams& p) {
  std::vector<std::size_t> consumer;
  for (const auto& f : s.firms) {
    if (f.kind == FirmKind::consumer) consumer.push_back(f.id);
  }
  Rng& rng = s.rng[Stream::goods];
  const int month = s.clock.month_index;

  std::vector<Id> order;
  for (const auto& h : s.households) {
    if (h.active && !h.members.empty()) order.push_back(h.id);
  }
  rng.shuffle(order);

  std::vector<FirmOffer> offers;
  for (Id hid : order) {
    Household& h = s.households[hid];
    if (h.last_goods_month == month) continue;
    h.last_goods_month = month;
    refresh_permanent_income(s, h);
    h.null_consumption = false;

    if (household_funds(s, h).is_zero() || consumer.empty()) {
      h.null_consumption = true;
      ++s.flows.null_consumption;
      continue;
    }
    const Money budget = Money::from_units(std::max(h.permanent_income, 0.0));
    if (!budget.positive()) continue;

    const Point home = s.household_location(h);
    offers.clear();
    const auto picks = rng.sample(consumer.size(), std::min<std::size_t>(p.varsigma, consumer.size()));
    for (std::size_t k : picks) {
      const Firm& f = s.firms[consumer[k]];
      offers.push_back({f.id, distance(home, s.firm_location(f)), f.price});
    }
    Firm& firm = s.firms[*choose_firm(offers, rng)];

    Money pot;
    const Draw d = draw_funds(s, h, budget, pot);
    const Purchase buy = settle_purchase(d.total(), firm.price, firm.inventory, p.tax_consumption);
    if (buy.spent.positive()) {
      firm.inventory = std::max(0.0, firm.inventory - buy.quantity);
      firm.sold += buy.quantity;
      transfer(pot, firm.cash, buy.revenue);
      firm.revenue += buy.revenue;
      Municipality& m = s.municipalities[s.regions[firm.region].municipality];
      transfer(pot, m.treasury, buy.tax);
      m.receipts.consumption += buy.tax;
      s.flows.goods_quantity += buy.quantity;
      s.flows.goods_spend += buy.spent;
    }
    if (buy.returned.positive()) refund(s, h, d, buy.returned, pot);
  }
}

}  // namespace polisim
