#include "polisim/housing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "polisim/finance.hpp"
#include "polisim/firms.hpp"
#include "polisim/govern.hpp"
#include "polisim/state.hpp"

namespace polisim {

double ask_price(double size_quality, double qli, double income_index, int months_listed,
                 const SimParams& p) {
  const double decay = (1.0 - p.gamma) * std::exp(p.kappa * months_listed) + p.gamma;
  return size_quality * qli * (1.0 + p.tau * income_index) * decay;
}

double ask_price(const State& s, const Dwelling& d, const SimParams& p, int months_listed) {
  const Region& r = s.regions[d.region];
  return ask_price(d.size * d.quality, r.qli, r.income_index, months_listed, p);
}

double dwelling_score(const State& s, const Dwelling& d) {
  return d.size * d.quality * s.regions[d.region].qli;
}

void refresh_income_index(State& s) {
  std::vector<double> sum(s.regions.size(), 0.0);
  std::vector<int> count(s.regions.size(), 0);
  for (const auto& h : s.households) {
    if (!h.active || h.dwelling == kNone) continue;
    const Id r = s.dwellings[h.dwelling].region;
    sum[r] += h.income_mean;
    ++count[r];
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t r = 0; r < s.regions.size(); ++r) {
    if (count[r] == 0) continue;
    sum[r] /= count[r];
    lo = std::min(lo, sum[r]);
    hi = std::max(hi, sum[r]);
  }
  for (std::size_t r = 0; r < s.regions.size(); ++r) {
    double v = 0.0;
    if (count[r] > 0 && hi > lo) v = (sum[r] - lo) / (hi - lo);
    s.regions[r].income_index = v;
  }
}

void refresh_dwelling_values(State& s, const SimParams& p) {
  for (auto& d : s.dwellings) {
    d.value = ask_price(s, d, p, 0);
    d.ask = d.listing == Listing::none ? d.value : ask_price(s, d, p, d.months_listed);
  }
}

Money rent_for(const Dwelling& d, const SimParams& p) {
  return Money::from_units(d.value * p.rental_price_fraction);
}

std::size_t rental_count(std::size_t vacant, double rental_share) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(vacant) * rental_share + 1e-12));
}

void delist(Dwelling& d) {
  d.listing = Listing::none;
  d.months_listed = 0;
  d.force_sale = false;
}

void list_vacant(State& s, const SimParams& p) {
  std::vector<Id> fresh;
  for (auto& d : s.dwellings) {
    if (d.occupant != kNone || d.listing != Listing::none) continue;
    if (d.owner_firm != kNone || d.force_sale) {
      d.listing = Listing::sale;
      d.months_listed = 0;
    } else if (d.owner_household != kNone) {
      fresh.push_back(d.id);
    }
  }
  s.rng[Stream::housing].shuffle(fresh);
  const std::size_t n_rental = rental_count(fresh.size(), p.rental_share);
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    Dwelling& d = s.dwellings[fresh[i]];
    d.listing = i < n_rental ? Listing::rental : Listing::sale;
    d.months_listed = 0;
    d.ask = d.value;
  }
}

void vacate(State& s, Household& h) {
  if (h.dwelling != kNone) {
    Dwelling& d = s.dwellings[h.dwelling];
    if (d.occupant == h.id) d.occupant = kNone;
  }
  forfeit_voucher(s, h);
  h.dwelling = kNone;
  h.renting = false;
  h.rent = {};
}

void occupy(State& s, Household& h, Dwelling& d, bool renting, Money rent) {
  if (h.dwelling == d.id) {
    h.renting = renting;
    h.rent = rent;
    return;
  }
  vacate(s, h);
  d.occupant = h.id;
  delist(d);
  h.dwelling = d.id;
  h.renting = renting;
  h.rent = rent;
  h.moved = true;
}

namespace {

double listing_supply_probability(const State& s) {
  const std::size_t hh = s.active_households();
  if (hh == 0) return 0.0;
  return std::clamp(static_cast<double>(s.listed_count()) / static_cast<double>(hh), 0.0, 1.0);
}

double current_score(const State& s, const Household& h) {
  if (h.dwelling == kNone) return -std::numeric_limits<double>::infinity();
  return dwelling_score(s, s.dwellings[h.dwelling]);
}

}  // namespace

std::optional<RentalChoice> seek_rental(State& s, const Household& h, const SimParams& p, Rng& rng,
                                        Id municipality) {
  std::vector<Id> listed;
  for (const auto& d : s.dwellings) {
    if (d.listing != Listing::rental || d.occupant != kNone) continue;
    if (d.owner_household == h.id) continue;
    if (municipality != kNone && s.regions[d.region].municipality != municipality) continue;
    listed.push_back(d.id);
  }
  if (listed.empty()) return std::nullopt;

  const auto picks = rng.sample(listed.size(), std::min<std::size_t>(p.sigma, listed.size()));
  const Money budget = Money::from_units(std::max(h.permanent_income, 0.0));
  const double here = current_score(s, h);

  Id best = kNone;
  double best_score = -std::numeric_limits<double>::infinity();
  Id cheapest = kNone;
  for (std::size_t k : picks) {
    const Dwelling& d = s.dwellings[listed[k]];
    const Money rent = rent_for(d, p);
    if (rent <= budget) {
      const double sc = dwelling_score(s, d);
      if (sc > best_score) {
        best_score = sc;
        best = d.id;
      }
    }
    if (cheapest == kNone || rent < rent_for(s.dwellings[cheapest], p)) cheapest = d.id;
  }

  if (best != kNone) {
    if (best_score < here) return std::nullopt;
    return RentalChoice{best, rent_for(s.dwellings[best], p)};
  }
  // Nothing affordable: offer what the household can pay on the cheapest.
  if (!budget.positive()) return std::nullopt;
  if (dwelling_score(s, s.dwellings[cheapest]) < here) return std::nullopt;
  if (!rng.bernoulli(listing_supply_probability(s))) return std::nullopt;
  return RentalChoice{cheapest, budget};
}

void run_rental_market(State& s, std::vector<Id> participants, const SimParams& p) {
  const int month = s.clock.month_index;
  std::stable_sort(participants.begin(), participants.end(), [&](Id a, Id b) {
    return s.households[a].permanent_income > s.households[b].permanent_income;
  });
  Rng& rng = s.rng[Stream::housing];
  for (Id hid : participants) {
    Household& h = s.households[hid];
    if (!h.active || h.moved || h.last_rental_month == month) continue;
    h.last_rental_month = month;
    const auto choice = seek_rental(s, h, p, rng);
    if (!choice) continue;
    occupy(s, h, s.dwellings[choice->dwelling], true, choice->rent);
    ++s.flows.rentals;
  }
}

void collect_rent(State& s) {
  for (auto& h : s.households) {
    if (!h.active || !h.renting || h.dwelling == kNone) continue;
    ++s.flows.renters;
    const Id owner = s.dwellings[h.dwelling].owner_household;
    Household* landlord = nullptr;
    if (owner != kNone && owner != h.id && s.households[owner].active) landlord = &s.households[owner];

    Money due = h.rent;
    if (landlord != nullptr) due -= pay_voucher(s, h, *landlord);
    if (!due.positive()) continue;
    Money pot;
    const Draw d = draw_funds(s, h, due, pot);
    if (landlord != nullptr) {
      credit_income(*landlord, pot, d.total());
    } else {
      refund(s, h, d, d.total(), pot);
    }
    if (d.total() < due) {
      h.rent_default = true;
      ++s.flows.rent_defaults;
    }
  }
}

double negotiated_price(double ask, double offer, double rho_plus) {
  if (offer > 0.0 && ask / offer > rho_plus) return offer * rho_plus / 2.0;
  return (ask + offer) / 2.0;
}

namespace {

void complete_sale(State& s, Household& buyer, Dwelling& d, Money price, Money loan,
                   const SimParams& p) {
  Money pot;
  const Money own = price - loan;
  buyer.savings -= own;
  transfer(s.bank.cash, pot, own);
  if (loan.positive()) {
    originate_loan(s, buyer, loan, s.mortgage_rate, loan_term(s, buyer, p));
    transfer(s.bank.cash, pot, loan);
  }

  Municipality& m = s.municipalities[s.regions[d.region].municipality];
  const Money tax = price.scaled(p.tax_transaction);
  transfer(pot, m.treasury, tax);
  m.receipts.transaction += tax;

  const Money net = price - tax;
  if (d.owner_firm != kNone) {
    Firm& f = s.firms[d.owner_firm];
    transfer(pot, f.cash, net);
    f.revenue += net;
    d.owner_firm = kNone;
  } else {
    Household& seller = s.households[d.owner_household];
    std::erase(seller.owned, d.id);
    deposit(s, seller, pot, net);
  }
  d.owner_household = buyer.id;
  buyer.owned.push_back(d.id);
  delist(d);
  buyer.moved = true;

  ++s.flows.sales;
  s.flows.sales_value += price;
  if (loan.positive()) {
    ++s.flows.mortgage_sales;
    MortgageAudit a;
    a.month = s.clock.month_index;
    a.household = buyer.id;
    a.loan = loan;
    a.price = price;
    a.book_after = s.loan_book();
    a.deposits_after = s.deposits();
    a.nu = p.nu;
    a.ltv = p.ltv;
    a.live_mortgages_of_household = s.live_mortgages(buyer.id);
    s.mortgage_audit.push_back(a);
  }
}

}  // namespace

std::vector<Id> sample_market_entrants(State& s, const SimParams& p) {
  std::vector<Id> out;
  Rng& rng = s.rng[Stream::housing];
  for (const auto& h : s.households) {
    if (!h.active || h.members.empty()) continue;
    if (rng.bernoulli(p.phi)) out.push_back(h.id);
  }
  return out;
}

void run_sales_market(State& s, std::vector<Id> buyers, const SimParams& p) {
  const int month = s.clock.month_index;
  Rng& rng = s.rng[Stream::housing];

  std::vector<double> power(s.households.size(), 0.0);
  for (Id b : buyers) {
    const Household& h = s.households[b];
    power[b] = (h.savings + loan_cap(s, h, p)).units();
  }
  std::stable_sort(buyers.begin(), buyers.end(), [&](Id a, Id b) { return power[a] > power[b]; });

  const double accept = listing_supply_probability(s);
  std::vector<Id> candidates;
  for (Id bid : buyers) {
    Household& h = s.households[bid];
    if (!h.active || h.moved || h.last_sales_month == month) continue;
    h.last_sales_month = month;

    std::vector<Id> listed;
    for (const auto& d : s.dwellings) {
      if (d.listing == Listing::sale && d.occupant == kNone && d.owner_household != h.id) {
        listed.push_back(d.id);
      }
    }
    if (listed.empty()) break;
    candidates.clear();
    for (std::size_t k : rng.sample(listed.size(), std::min<std::size_t>(p.sigma, listed.size()))) {
      candidates.push_back(listed[k]);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](Id a, Id b) { return s.dwellings[a].ask > s.dwellings[b].ask; });

    const double savings = h.savings.units();
    const Money estimate = loan_cap(s, h, p);
    for (Id did : candidates) {
      Dwelling& d = s.dwellings[did];
      const double ask = d.ask;
      if (ask <= 0.0) continue;

      if (savings >= ask) {
        const Money price = min(Money::from_units(negotiated_price(ask, savings, p.rho_plus)), h.savings);
        complete_sale(s, h, d, price, {}, p);
        break;
      }
      if (savings + estimate.units() >= ask) {
        const Money gap = Money::from_units(ask) - h.savings;
        const MortgageDecision md = evaluate_mortgage(s, h, gap, h.savings, p);
        if (md.approved) {
          const double offer = savings + md.amount.units();
          const Money price = Money::from_units(negotiated_price(ask, offer, p.rho_plus));
          const Money loan = max(price - h.savings, Money{});
          const bool funded = loan <= md.amount && price <= h.savings + loan;
          if (funded && price.positive() && loan.units() <= p.ltv * price.units()) {
            complete_sale(s, h, d, price, loan, p);
            break;
          }
          continue;
        }
        // Declined: a last cash offer on this house, then out of the market.
        if (savings / ask > p.rho_minus && rng.bernoulli(accept)) {
          complete_sale(s, h, d, h.savings, {}, p);
        }
        break;
      }
      if (savings / ask > p.rho_minus && rng.bernoulli(accept)) {
        complete_sale(s, h, d, h.savings, {}, p);
        break;
      }
    }
  }
}

void decide_move(State& s, Household& h, const SimParams& p) {
  (void)p;
  if (h.owned.empty() || h.members.empty()) return;
  std::vector<Id> usable;
  for (Id d : h.owned) {
    const Dwelling& dw = s.dwellings[d];
    if (dw.occupant == kNone || dw.occupant == h.id) usable.push_back(d);
  }
  if (usable.empty()) return;
  auto by_score = [&](Id a, Id b) {
    return dwelling_score(s, s.dwellings[a]) < dwelling_score(s, s.dwellings[b]);
  };
  const Id best = *std::max_element(usable.begin(), usable.end(), by_score);
  const Id worst = *std::min_element(usable.begin(), usable.end(), by_score);
  const bool employed = std::any_of(h.members.begin(), h.members.end(),
                                    [&](Id m) { return s.persons[m].employed(); });
  const Id target = employed ? best : worst;
  if (h.dwelling != target) occupy(s, h, s.dwellings[target], false, {});
  if (!employed && best != worst) {
    Dwelling& b = s.dwellings[best];
    if (b.listing != Listing::sale) {
      b.listing = Listing::sale;
      b.months_listed = 0;
      b.ask = b.value;
    }
    b.force_sale = true;
  }
}

void run_moving(State& s, const SimParams& p) {
  for (auto& h : s.households) {
    if (h.active && !h.owned.empty()) decide_move(s, h, p);
  }
}

double mean_consumer_price(const State& s) {
  double sum = 0.0;
  int n = 0;
  for (const auto& f : s.firms) {
    if (f.kind != FirmKind::consumer) continue;
    sum += f.price;
    ++n;
  }
  return n == 0 ? 1.0 : sum / n;
}

double vacancy_share(const State& s) {
  if (s.dwellings.empty()) return 0.0;
  std::size_t vacant = 0;
  for (const auto& d : s.dwellings) vacant += d.occupant == kNone ? 1 : 0;
  return static_cast<double>(vacant) / static_cast<double>(s.dwellings.size());
}

void advance_construction(State& s, Firm& f, double work_value, const SimParams& p) {
  double work = work_value;
  std::vector<ConstructionProject> open;
  for (auto& pr : f.projects) {
    const double pay = std::min(pr.remaining, std::max(work, 0.0));
    pr.remaining -= pay;
    work -= pay;
    if (pr.remaining > 1e-9) {
      open.push_back(pr);
      continue;
    }
    Dwelling d;
    d.region = pr.region;
    d.size = pr.size;
    d.quality = pr.quality;
    d.owner_firm = f.id;
    d.listing = Listing::sale;
    const Id id = s.add_dwelling(d);
    Dwelling& nd = s.dwellings[id];
    nd.value = ask_price(s, nd, p, 0);
    nd.ask = nd.value;
    ++s.flows.constructions_finished;
  }
  f.projects = std::move(open);
}

double construction_profit(double mean_ask, double size, int quality, double cost_factor,
                           double license_price, double upsilon) {
  return mean_ask - size * quality * cost_factor * license_price * (1.0 + upsilon);
}

std::optional<ConstructionProject> plan_construction(State& s, Firm& f, const SimParams& p) {
  double backlog = 0.0;
  for (const auto& pr : f.projects) backlog += pr.remaining;
  const double capacity = p.n_months * firm_output(s, f, p) * mean_consumer_price(s);
  if (!(backlog < capacity)) return std::nullopt;

  Rng& rng = s.rng[Stream::construction];
  if (rng.bernoulli(vacancy_share(s))) return std::nullopt;

  const double size = rng.uniform(20.0, 120.0);
  const int quality = rng.uniform_int(1, 4);
  const double factor = rng.uniform(1.0, 1.0 + p.markup);

  Id best = kNone;
  double best_profit = 0.0;
  for (const auto& r : s.regions) {
    if (r.licenses <= 0 || f.cash < Money::from_units(r.license_price)) continue;
    double sum = 0.0;
    int n = 0;
    for (const auto& d : s.dwellings) {
      if (d.region != r.id || d.listing == Listing::none) continue;
      if (std::abs(d.size - size) > 10.0 || std::abs(d.quality - quality) > 1) continue;
      sum += d.ask;
      ++n;
    }
    if (n == 0) continue;
    const double profit = construction_profit(sum / n, size, quality, factor, r.license_price, p.upsilon);
    if (profit > best_profit) {
      best_profit = profit;
      best = r.id;
    }
  }
  if (best == kNone) return std::nullopt;

  Region& r = s.regions[best];
  ConstructionProject pr;
  pr.region = best;
  pr.size = size;
  pr.quality = quality;
  pr.total_cost = size * quality * factor * r.license_price * (1.0 + p.upsilon);
  if (backlog + pr.total_cost > capacity) return std::nullopt;
  pr.remaining = pr.total_cost;
  pr.license_paid = Money::from_units(r.license_price);

  Municipality& m = s.municipalities[r.municipality];
  transfer(f.cash, m.treasury, pr.license_paid);
  m.receipts.license += pr.license_paid;
  --r.licenses;
  f.projects.push_back(pr);
  ++s.flows.constructions_started;
  return pr;
}

void run_construction_planning(State& s, const SimParams& p) {
  for (auto& f : s.firms) {
    if (f.kind == FirmKind::construction) plan_construction(s, f, p);
  }
}

}  // namespace polisim
