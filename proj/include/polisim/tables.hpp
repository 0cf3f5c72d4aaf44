#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace polisim {

inline constexpr int kQualificationLevels = 5;
inline constexpr int kPyramidMaxAge = 100;
inline constexpr int kMortalityMaxAge = 110;
inline constexpr int kFertilityMinAge = 15;
inline constexpr int kFertilityMaxAge = 49;

// One intraurban region of the metropolitan input schema.
struct RegionSpec {
  std::uint32_t region_id = 0;
  std::uint32_t municipality_id = 0;
  double x_km = 0.0;
  double y_km = 0.0;
  double population_weight = 0.0;  // share of its municipality's population
  std::array<double, kQualificationLevels> qualification_cdf{};
  double avg_household_size = 3.0;
  double firm_count = 0.0;  // real-world count, scaled by pop at instantiation
  int license_stock = 0;    // real-world count, scaled by pop at instantiation
  double license_price = 1.0;
  double initial_qli = 0.7;
};

struct InputTables {
  // [municipality][age 0..100][gender: 0 female, 1 male] -> real headcount
  std::vector<std::vector<std::array<double, 2>>> pyramid;
  // Annual birth probability by mother's age, ages 15..49 (index = age).
  std::array<double, kMortalityMaxAge + 1> fertility{};
  // [gender][age 0..110] annual death probability; age 110 is certain.
  std::array<std::array<double, kMortalityMaxAge + 1>, 2> mortality{};
  double marriage_rate = 0.002;
  std::array<double, 10> car_by_decile{};  // non-decreasing in income decile
  // [municipality][year offset] real population estimates.
  std::vector<std::vector<double>> population_estimates;
  int estimates_start_year = 2010;
  std::vector<double> hdi;  // per municipality

  std::size_t n_municipalities() const { return hdi.size(); }
};

}  // namespace polisim
