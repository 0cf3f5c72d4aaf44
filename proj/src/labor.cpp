#include "polisim/labor.hpp"

#include <algorithm>

#include "polisim/state.hpp"

namespace polisim {

double score(int qualification, double base_wage, double distance, double transport_cost,
             Criterion criterion) {
  const double s = base_wage - distance * transport_cost;
  return criterion == Criterion::full_score ? s + qualification : s;
}

double score(const Candidate& c, const Vacancy& v) {
  return score(c.qualification, v.base_wage, distance(c.home, v.location), c.transport_cost,
               v.criterion);
}

Posting post_vacancies(State& s, const SimParams& p, Rng& rng) {
  Posting out;
  for (auto& f : s.firms) {
    if (!rng.bernoulli(p.iota)) continue;
    if (f.profit < Money{}) {
      if (f.employees.empty()) continue;
      const Id victim = f.employees[rng.index(f.employees.size())];
      fire(s, victim);
      out.fired.push_back(victim);
    } else if (f.profit.positive()) {
      // A firm that earned nothing cannot pay a new hire.
      Vacancy v;
      v.firm = f.id;
      v.location = s.firm_location(f);
      v.base_wage = f.wage_pool.units();
      v.criterion = rng.bernoulli(p.eta) ? Criterion::distance_only : Criterion::full_score;
      out.vacancies.push_back(v);
    }
  }
  return out;
}

std::vector<Match> clear_market(std::span<const Candidate> candidates,
                                std::span<const Vacancy> vacancies, int sigma, Rng& rng) {
  std::vector<Match> matches;
  if (candidates.empty() || vacancies.empty()) return matches;

  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(sigma), candidates.size());
  std::vector<std::vector<std::size_t>> pools(vacancies.size());
  for (auto& pool : pools) pool = rng.sample(candidates.size(), k);

  std::vector<std::size_t> order(vacancies.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return vacancies[a].base_wage > vacancies[b].base_wage;
  });

  std::vector<bool> taken(candidates.size(), false);
  std::size_t left = candidates.size();
  for (std::size_t vi : order) {
    if (left == 0) break;
    std::size_t best = candidates.size();
    double best_score = 0.0;
    for (std::size_t ci : pools[vi]) {
      if (taken[ci]) continue;
      const double sc = score(candidates[ci], vacancies[vi]);
      if (best == candidates.size() || sc > best_score) {
        best = ci;
        best_score = sc;
      }
    }
    if (best == candidates.size()) continue;
    taken[best] = true;
    --left;
    matches.push_back({vi, best});
  }
  return matches;
}

void hire(State& s, Id person, Id firm) {
  Person& p = s.persons[person];
  p.employer = firm;
  s.firms[firm].employees.push_back(person);
}

void fire(State& s, Id person) {
  Person& p = s.persons[person];
  if (p.employer == kNone) return;
  std::erase(s.firms[p.employer].employees, person);
  p.employer = kNone;
}

void run_labor_market(State& s, const SimParams& p) {
  Rng& rng = s.rng[Stream::labor];
  const int month = s.clock.month_index;
  Posting posting = post_vacancies(s, p, rng);
  s.flows.fires += static_cast<int>(posting.fired.size());

  std::vector<Candidate> candidates;
  for (const auto& h : s.households) {
    if (!h.active) continue;
    const Point home = s.household_location(h);
    for (Id m : h.members) {
      Person& per = s.persons[m];
      if (!per.alive || per.employed() || per.last_labor_month == month) continue;
      const int age = per.age_years();
      if (age < p.labor_age_min || age > p.labor_age_max) continue;
      per.last_labor_month = month;
      candidates.push_back({per.id, per.qualification, home,
                            per.has_car ? p.transport_cost_car : p.transport_cost_public});
    }
  }
  rng.shuffle(candidates);
  rng.shuffle(posting.vacancies);

  for (const Match& mt : clear_market(candidates, posting.vacancies, p.sigma, rng)) {
    hire(s, candidates[mt.candidate].person, posting.vacancies[mt.vacancy].firm);
    ++s.flows.hires;
  }
}

void assign_cars(State& s, Rng& rng) {
  std::vector<double> wages;
  for (const auto& per : s.persons) {
    if (per.alive && per.wage.positive()) wages.push_back(per.wage.units());
  }
  std::sort(wages.begin(), wages.end());
  for (auto& per : s.persons) {
    if (!per.alive) continue;
    std::size_t decile = 0;
    if (!wages.empty()) {
      const auto rank = std::lower_bound(wages.begin(), wages.end(), per.wage.units()) - wages.begin();
      decile = std::min<std::size_t>(9, static_cast<std::size_t>(rank) * 10 / wages.size());
    }
    per.has_car = rng.bernoulli(s.tables.car_by_decile[decile]);
  }
}

}  // namespace polisim
