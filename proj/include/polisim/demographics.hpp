#pragma once

#include <cstdint>
#include <vector>

#include "polisim/entities.hpp"
#include "polisim/params.hpp"
#include "polisim/rng.hpp"

namespace polisim {

struct State;

struct BirthdayEvents {
  bool died = false;
  Id child = kNone;
};

// Ages one year, then draws death and, for women aged 15-49, a birth.
BirthdayEvents run_birthday(State& s, Id person, Rng& rng);

// Removes a person from the living: cash goes to the household reserve, the job
// and the marriage end.
void kill_person(State& s, Id person);

// Hands the estate of a household without members to its parent household, or
// to a random household when there is none.
void process_inheritance(State& s, Household& dead, Rng& rng);

struct MarriageStats {
  int marriages = 0;
  int rolled_back = 0;
};

// `pool` holds unmarried adults already drawn into the market, in pairing order.
MarriageStats process_marriage(State& s, const std::vector<Id>& pool, const SimParams& p, Rng& rng);
std::vector<Id> draw_marriage_pool(State& s, double rate, const SimParams& p, Rng& rng);

void process_divorce(State& s, const SimParams& p, Rng& rng);

struct MigrationStats {
  int households = 0;
  int persons = 0;
  int rejected = 0;
};

// Brings candidate households into municipalities below their target. A
// candidate stays only if it finds a rental.
MigrationStats process_migration(State& s, const std::vector<std::int64_t>& target,
                                 const SimParams& p, Rng& rng);

// Birthdays of everyone born in the current calendar month, then estates.
void run_demographics(State& s, const SimParams& p);

// Qualification level 1..5 drawn from a region's CDF.
int draw_qualification(const Region& r, Rng& rng);

}  // namespace polisim
