#pragma once

#include <span>
#include <utility>
#include <vector>

#include "polisim/entities.hpp"
#include "polisim/params.hpp"
#include "polisim/rng.hpp"

namespace polisim {

struct State;

enum class Criterion { full_score, distance_only };

struct Candidate {
  Id person = kNone;
  int qualification = 1;
  Point home;
  double transport_cost = 0.0;  // per km
};

struct Vacancy {
  Id firm = kNone;
  Point location;
  double base_wage = 0.0;  // firm's last total payout
  Criterion criterion = Criterion::full_score;
};

// full_score: q + omega - d*c; distance_only: omega - d*c.
double score(int qualification, double base_wage, double distance, double transport_cost,
             Criterion criterion);
double score(const Candidate& c, const Vacancy& v);

struct Posting {
  std::vector<Vacancy> vacancies;
  std::vector<Id> fired;
};

// Each firm enters with probability iota: firms with negative profit fire one
// random employee, the others open one position.
Posting post_vacancies(State& s, const SimParams& p, Rng& rng);

struct Match {
  std::size_t vacancy = 0;
  std::size_t candidate = 0;
};

// Every vacancy samples sigma candidates; vacancies are served by descending
// base wage and take their best still-unmatched sampled candidate.
std::vector<Match> clear_market(std::span<const Candidate> candidates,
                                std::span<const Vacancy> vacancies, int sigma, Rng& rng);

void hire(State& s, Id person, Id firm);
void fire(State& s, Id person);

void run_labor_market(State& s, const SimParams& p);

// Draws car ownership from the income-decile table for every person of working age.
void assign_cars(State& s, Rng& rng);

}  // namespace polisim
