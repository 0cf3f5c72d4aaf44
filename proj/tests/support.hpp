#pragma once

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <string>
#include <vector>

#include "polisim/housing.hpp"
#include "polisim/params.hpp"
#include "polisim/state.hpp"

namespace testkit {

using namespace polisim;

// Regions laid out on a line, `per_muni` of them in each municipality.
inline State tiny_state(std::size_t municipalities = 1, std::size_t per_muni = 1,
                        std::uint64_t seed = 7) {
  State s;
  s.rng = RngStreams(seed);
  s.universe = seed;
  for (std::size_t m = 0; m < municipalities; ++m) {
    Municipality mm;
    mm.id = static_cast<Id>(m);
    s.municipalities.push_back(mm);
    for (std::size_t k = 0; k < per_muni; ++k) {
      Region r;
      r.id = static_cast<Id>(s.regions.size());
      r.municipality = mm.id;
      r.location = {static_cast<double>(r.id), 0.0};
      r.qualification_cdf = {0.2, 0.4, 0.6, 0.8, 1.0};
      r.population_weight = 1.0 / static_cast<double>(per_muni);
      s.municipalities[m].regions.push_back(r.id);
      s.regions.push_back(r);
    }
  }
  s.tables.hdi.assign(municipalities, 0.7);
  s.flows.gdp_by_municipality.assign(municipalities, Money{});
  return s;
}

inline Id add_home(State& s, Id region, double size, int quality, Id owner = kNone) {
  Dwelling d;
  d.region = region;
  d.size = size;
  d.quality = quality;
  d.owner_household = owner;
  const Id id = s.add_dwelling(d);
  Dwelling& nd = s.dwellings[id];
  nd.value = ask_price(s, nd, SimParams{}, 0);
  nd.ask = nd.value;
  if (owner != kNone) s.households[owner].owned.push_back(id);
  return id;
}

// A household of persons with the given ages (years), living in `home` if set.
inline Id add_family(State& s, std::initializer_list<int> ages, Id home = kNone, bool renting = false) {
  const Id hid = s.add_household(Household{});
  for (int age : ages) {
    Person p;
    p.age_months = age * 12;
    p.household = hid;
    p.origin_household = hid;
    s.households[hid].members.push_back(s.add_person(p));
  }
  if (home != kNone) {
    Household& h = s.households[hid];
    h.dwelling = home;
    h.renting = renting;
    s.dwellings[home].occupant = hid;
  }
  return hid;
}

inline Id add_firm(State& s, Id region, FirmKind kind = FirmKind::consumer) {
  Firm f;
  f.region = region;
  f.kind = kind;
  return s.add_firm(f);
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// A small synthetic city that runs quickly.
inline RunConfig small_config(std::uint64_t seed = 42, std::size_t months = 12) {
  RunConfig c;
  c.seed = seed;
  c.horizon_months = months;
  c.city.scale = 100.0;
  c.city.n_regions = 6;
  c.city.n_municipalities = 2;
  return c;
}

}  // namespace testkit
