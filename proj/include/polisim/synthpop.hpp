#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "polisim/params.hpp"
#include "polisim/state.hpp"
#include "polisim/tables.hpp"

namespace polisim {

struct CityInputs {
  std::vector<RegionSpec> regions;
  InputTables tables;
};

// Builds schema-valid input tables standing in for census data. Municipality 0
// is the core: richer, more qualified, higher initial quality of life.
// `scale` is the real population in thousands.
CityInputs generate_synthetic_inputs(std::uint64_t seed, std::size_t n_regions,
                                     std::size_t n_municipalities, double scale);

// Throws ConfigError when weights, CDFs or probabilities are malformed.
void validate_inputs(const CityInputs& in);

void write_inputs(const CityInputs& in, const std::filesystem::path& dir);
CityInputs read_inputs(const std::filesystem::path& dir);

// Persons, households, dwellings, firms, bank and municipalities for month 0.
// Throws GenerationError if a municipality ends up without households.
State instantiate_city(const CityInputs& in, const SimParams& params, const CityConfig& city,
                       std::uint64_t seed, double baseline_rate);

// Number of persons instantiated from a pyramid total.
std::int64_t scaled_count(double real_count, double pop);
// Dwellings needed so that `vacancy_share` of them are empty.
std::int64_t dwellings_for(std::int64_t households, double vacancy_share);

}  // namespace polisim
