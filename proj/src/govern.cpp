#include "polisim/govern.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "polisim/housing.hpp"
#include "polisim/state.hpp"

namespace polisim {

double qli_increment(Money taxes, double psi, std::int64_t pop_prev, std::int64_t pop_now) {
  if (pop_now <= 0) return 0.0;
  return taxes.units() * psi * static_cast<double>(pop_prev) / static_cast<double>(pop_now);
}

namespace {

double quantile_threshold(std::vector<double> values, double theta) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto k = static_cast<std::size_t>(std::floor(theta * static_cast<double>(values.size())));
  if (k >= values.size()) return std::numeric_limits<double>::infinity();
  return values[k];
}

}  // namespace

std::vector<std::size_t> below_quantile(std::span<const double> values, double theta) {
  const double cut = quantile_threshold({values.begin(), values.end()}, theta);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < cut) out.push_back(i);
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return out;
}

std::vector<Id> build_register(const State& s, Id municipality, double theta) {
  std::vector<double> metro;
  for (const auto& h : s.households) {
    if (h.active && !h.members.empty()) metro.push_back(h.prior_year_pi());
  }
  const double cut = quantile_threshold(std::move(metro), theta);
  std::vector<Id> out;
  for (const auto& h : s.households) {
    if (!h.active || h.members.empty()) continue;
    if (s.household_municipality(h) != municipality) continue;
    if (h.prior_year_pi() < cut) out.push_back(h.id);
  }
  std::stable_sort(out.begin(), out.end(), [&](Id a, Id b) {
    return s.households[a].prior_year_pi() < s.households[b].prior_year_pi();
  });
  return out;
}

PolicyOutcome apply_aid(State& s, Municipality& m, Money budget) {
  PolicyOutcome out;
  if (m.policy_register.empty() || !budget.positive()) return out;
  const std::vector<double> equal(m.policy_register.size(), 1.0);
  const auto parts = apportion(budget, equal);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    credit_income(s.households[m.policy_register[i]], m.treasury, parts[i]);
  }
  out.spent = budget;
  out.beneficiaries = static_cast<int>(parts.size());
  return out;
}

PolicyOutcome apply_voucher(State& s, Municipality& m, Money budget, const SimParams& p) {
  PolicyOutcome out;
  for (Id hid : m.policy_register) {
    Household& h = s.households[hid];
    if (!h.owned.empty() || !h.renting || h.voucher != kNone || !h.rent.positive()) continue;
    const Money cost = h.rent.scaled(p.voucher_months);
    if (cost > budget - out.spent) break;
    Voucher v;
    v.id = static_cast<Id>(s.vouchers.size());
    v.household = hid;
    v.dwelling = h.dwelling;
    v.municipality = m.id;
    v.monthly = h.rent;
    v.months_remaining = static_cast<int>(p.voucher_months);
    v.active = true;
    transfer(m.treasury, m.voucher_escrow, cost);
    v.escrow = cost;
    s.vouchers.push_back(v);
    h.voucher = v.id;
    out.spent += cost;
    ++out.beneficiaries;
  }
  return out;
}

PolicyOutcome apply_acquisition(State& s, Municipality& m, Money budget) {
  PolicyOutcome out;
  std::vector<Id> supply;
  for (const auto& d : s.dwellings) {
    if (d.owner_firm == kNone || d.listing != Listing::sale || d.occupant != kNone) continue;
    if (s.regions[d.region].municipality != m.id) continue;
    supply.push_back(d.id);
  }
  std::stable_sort(supply.begin(), supply.end(),
                   [&](Id a, Id b) { return s.dwellings[a].ask < s.dwellings[b].ask; });

  std::size_t next = 0;
  for (Id hid : m.policy_register) {
    if (next == supply.size()) break;
    Household& h = s.households[hid];
    if (!h.owned.empty()) continue;
    Dwelling& d = s.dwellings[supply[next]];
    const Money price = Money::from_units(d.ask);
    if (price > budget - out.spent) break;
    Firm& f = s.firms[d.owner_firm];
    transfer(m.treasury, f.cash, price);
    f.revenue += price;
    d.owner_firm = kNone;
    d.owner_household = hid;
    h.owned.push_back(d.id);
    occupy(s, h, d, false, {});
    out.spent += price;
    ++out.beneficiaries;
    ++next;
  }
  return out;
}

Money pay_voucher(State& s, Household& tenant, Household& landlord) {
  if (tenant.voucher == kNone) return {};
  Voucher& v = s.vouchers[tenant.voucher];
  if (!v.active) {
    tenant.voucher = kNone;
    return {};
  }
  Municipality& m = s.municipalities[v.municipality];
  const Money amount = min(min(v.monthly, v.escrow), tenant.rent);
  credit_income(landlord, m.voucher_escrow, amount);
  v.escrow -= amount;
  if (--v.months_remaining <= 0 || !v.escrow.positive()) forfeit_voucher(s, tenant);
  return amount;
}

void forfeit_voucher(State& s, Household& h) {
  if (h.voucher == kNone) return;
  Voucher& v = s.vouchers[h.voucher];
  if (v.active) {
    Municipality& m = s.municipalities[v.municipality];
    transfer(m.voucher_escrow, m.treasury, v.escrow);
    m.policy_carry += v.escrow;
    v.escrow = {};
    v.active = false;
  }
  h.voucher = kNone;
}

void collect_property_tax(State& s, const SimParams& p) {
  if (p.tax_property <= 0.0) return;
  for (auto& h : s.households) {
    if (!h.active || h.owned.empty()) continue;
    for (Id did : h.owned) {
      const Dwelling& d = s.dwellings[did];
      const Money tax = Money::from_units(d.value * p.tax_property);
      if (!tax.positive()) continue;
      Municipality& m = s.municipalities[s.regions[d.region].municipality];
      const Draw paid = draw_funds(s, h, tax, m.treasury);
      m.receipts.property += paid.total();
    }
  }
}

namespace {

// Spends the QLI investment on goods from the municipality's consumer firms.
void procure(State& s, Municipality& m, Money amount) {
  if (!amount.positive()) return;
  std::vector<Id> local;
  std::vector<Id> all;
  for (const auto& f : s.firms) {
    if (f.kind != FirmKind::consumer) continue;
    all.push_back(f.id);
    if (s.regions[f.region].municipality == m.id) local.push_back(f.id);
  }
  const std::vector<Id>& sellers = local.empty() ? all : local;
  if (sellers.empty()) return;
  const std::vector<double> equal(sellers.size(), 1.0);
  const auto parts = apportion(amount, equal);
  for (std::size_t i = 0; i < sellers.size(); ++i) {
    Firm& f = s.firms[sellers[i]];
    transfer(m.treasury, f.cash, parts[i]);
    f.revenue += parts[i];
  }
}

}  // namespace

void run_municipal_budget(State& s, const SimParams& p, PolicyKind scenario) {
  const std::size_t n = s.municipalities.size();
  std::vector<Money> taxes(n);
  for (std::size_t i = 0; i < n; ++i) taxes[i] = s.municipalities[i].receipts.total();

  if (p.tax_pool_equal && n > 1) {
    Money pool;
    for (std::size_t i = 0; i < n; ++i) transfer(s.municipalities[i].treasury, pool, taxes[i]);
    const std::vector<double> equal(n, 1.0);
    const Money total = pool;
    taxes = apportion(total, equal);
    for (std::size_t i = 0; i < n; ++i) transfer(pool, s.municipalities[i].treasury, taxes[i]);
  }

  const double delta = scenario == PolicyKind::baseline ? 0.0 : p.delta;
  const auto pop = s.population_by_municipality();
  for (std::size_t i = 0; i < n; ++i) {
    Municipality& m = s.municipalities[i];
    const Money carry_in = m.policy_carry;
    const Money policy_share = taxes[i].scaled(delta);
    const Money qli_amount = taxes[i] - policy_share;

    if (p.qli_procurement) procure(s, m, qli_amount);
    else transfer(m.treasury, s.external, qli_amount);
    const double dq = qli_increment(qli_amount, p.psi, m.pop_prev, pop[i]);
    for (Id r : m.regions) s.regions[r].qli += dq;
    m.pop_prev = pop[i];

    const Money budget = carry_in + policy_share;
    PolicyOutcome outcome;
    if (scenario != PolicyKind::baseline) {
      m.policy_register = build_register(s, m.id, p.theta);
      switch (scenario) {
        case PolicyKind::aid: outcome = apply_aid(s, m, budget); break;
        case PolicyKind::voucher: outcome = apply_voucher(s, m, budget, p); break;
        case PolicyKind::acquisition: outcome = apply_acquisition(s, m, budget); break;
        case PolicyKind::baseline: break;
      }
    }
    m.policy_carry = budget - outcome.spent;

    m.last_taxes = taxes[i];
    m.last_qli_investment = qli_amount;
    m.last_policy_outlay = outcome.spent;
    m.last_carry_in = carry_in;
    m.last_carry_out = m.policy_carry;
    m.last_beneficiaries = outcome.beneficiaries;
    m.receipts = {};
  }
}

}  // namespace polisim
