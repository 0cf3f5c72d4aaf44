#include "polisim/firms.hpp"

#include <algorithm>
#include <cmath>

#include "polisim/housing.hpp"
#include "polisim/state.hpp"

namespace polisim {

double production(std::span<const int> qualifications, double alpha, double beta) {
  double q = 0.0;
  for (int l : qualifications) q += std::pow(static_cast<double>(l), alpha);
  return q / beta;
}

double firm_output(const State& s, const Firm& f, const SimParams& p) {
  double q = 0.0;
  for (Id e : f.employees) q += std::pow(static_cast<double>(s.persons[e].qualification), p.alpha);
  return q / p.beta;
}

double produce(State& s, Firm& f, const SimParams& p) {
  const double q = firm_output(s, f, p);
  if (f.kind == FirmKind::consumer) {
    f.inventory += q;
    f.produced += q;
  } else {
    advance_construction(s, f, q * mean_consumer_price(s), p);
  }
  return q;
}

double maybe_update_price(Firm& f, double zeta, double markup, bool symmetric_down, Rng& rng) {
  if (rng.bernoulli(zeta)) return f.price;
  if (f.sold > f.produced) {
    f.price *= 1.0 + markup;
  } else if (symmetric_down && f.sold < f.produced) {
    f.price /= 1.0 + markup;
  }
  return f.price;
}

Books close_books(Money revenue, Money wages, double tax_firm, FirmTaxBase base) {
  Books b;
  if (base == FirmTaxBase::revenue) {
    b.tax = max(revenue, Money{}).scaled(tax_firm);
  } else {
    const Money before = revenue - wages;
    if (before.positive()) b.tax = before.scaled(tax_firm);
  }
  b.profit = revenue - wages - b.tax;
  return b;
}

WageBill compute_wages(Money revenue, double unemployment, std::span<const double> weights,
                       double tax_labor, Money cash) {
  WageBill w;
  if (weights.empty()) return w;
  w.gross = max(revenue, Money{}).scaled(1.0 - unemployment);
  w.gross = max(min(w.gross, cash), Money{});
  w.tax = w.gross.scaled(tax_labor);
  w.net = apportion(w.gross - w.tax, weights);
  return w;
}

void run_firm_payments(State& s, const SimParams& p, bool pay_wages) {
  const double unemployment = p.wage_unemployment ? s.unemployment : 0.0;
  Rng& rng = s.rng[Stream::firms];
  std::vector<double> weights;
  for (auto& f : s.firms) {
    const Id muni = s.regions[f.region].municipality;
    Municipality& m = s.municipalities[muni];

    const Books b = close_books(f.revenue, f.wage_pool, p.tax_firm, p.firm_tax_base);
    const Money tax = max(min(b.tax, f.cash), Money{});
    transfer(f.cash, m.treasury, tax);
    m.receipts.firm += tax;
    f.profit = b.profit;
    f.last_revenue = f.revenue;
    f.revenue = {};
    s.flows.gdp += f.last_revenue;
    s.flows.gdp_by_municipality[muni] += f.last_revenue;

    weights.clear();
    for (Id e : pay_wages ? f.employees : std::vector<Id>{}) {
      weights.push_back(std::pow(static_cast<double>(s.persons[e].qualification), p.alpha));
    }
    const WageBill bill = compute_wages(f.last_revenue, unemployment, weights, p.tax_labor, f.cash);
    for (std::size_t i = 0; i < bill.net.size(); ++i) {
      Person& w = s.persons[f.employees[i]];
      transfer(f.cash, w.cash, bill.net[i]);
      w.wage = bill.net[i];
      s.households[w.household].income_month += bill.net[i];
    }
    transfer(f.cash, m.treasury, bill.tax);
    m.receipts.labor += bill.tax;
    f.wage_pool = bill.gross;

    if (f.kind == FirmKind::consumer) {
      maybe_update_price(f, p.zeta, p.markup, p.symmetric_price_down, rng);
      f.produced = 0.0;
      f.sold = 0.0;
    }
  }
}

void run_firm_entry(State& s, int entrants, const SimParams& p) {
  (void)p;
  if (entrants <= 0 || s.regions.empty()) return;
  Rng& rng = s.rng[Stream::firms];
  // Entrants settle where people live.
  std::vector<double> weights(s.regions.size(), 0.0);
  for (const auto& h : s.households) {
    if (h.active && h.dwelling != kNone) weights[s.dwellings[h.dwelling].region] += 1.0;
  }
  const double price = mean_consumer_price(s);
  for (int i = 0; i < entrants; ++i) {
    Firm f;
    f.region = static_cast<Id>(rng.weighted(weights));
    f.kind = rng.bernoulli(s.construction_share) ? FirmKind::construction : FirmKind::consumer;
    f.price = price;
    s.add_firm(std::move(f));
  }
}

}  // namespace polisim
