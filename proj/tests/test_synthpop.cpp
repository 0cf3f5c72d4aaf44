#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <numeric>

#include "polisim/error.hpp"
#include "polisim/snapshot.hpp"
#include "polisim/synthpop.hpp"

using namespace polisim;

TEST(SyntheticInputs, SingleRegionCity) {
  const CityInputs in = generate_synthetic_inputs(1, 1, 1, 100.0);
  ASSERT_EQ(in.regions.size(), 1u);
  EXPECT_DOUBLE_EQ(in.regions[0].population_weight, 1.0);
  EXPECT_NO_THROW(validate_inputs(in));
}

TEST(SyntheticInputs, OldestAgeDiesWithCertainty) {
  const CityInputs in = generate_synthetic_inputs(3, 4, 2, 100.0);
  EXPECT_DOUBLE_EQ(in.tables.mortality[0][kMortalityMaxAge], 1.0);
  EXPECT_DOUBLE_EQ(in.tables.mortality[1][kMortalityMaxAge], 1.0);
}

TEST(SyntheticInputs, MunicipalityWeightsSumToOne) {
  const CityInputs in = generate_synthetic_inputs(7, 10, 3, 500.0);
  std::map<std::uint32_t, double> sums;
  for (const auto& r : in.regions) sums[r.municipality_id] += r.population_weight;
  ASSERT_EQ(sums.size(), 3u);
  for (const auto& [m, w] : sums) EXPECT_NEAR(w, 1.0, 1e-12) << "municipality " << m;
}

TEST(SyntheticInputs, SchemaProperties) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CityInputs in = generate_synthetic_inputs(seed, 8, 3, 300.0);
    for (const auto& r : in.regions) {
      for (int l = 1; l < kQualificationLevels; ++l) {
        ASSERT_LE(r.qualification_cdf[l - 1], r.qualification_cdf[l]);
      }
      EXPECT_DOUBLE_EQ(r.qualification_cdf.back(), 1.0);
    }
    for (std::size_t k = 1; k < in.tables.car_by_decile.size(); ++k) {
      ASSERT_LE(in.tables.car_by_decile[k - 1], in.tables.car_by_decile[k]);
    }
    for (const auto& g : in.tables.mortality) {
      for (double p : g) ASSERT_TRUE(p >= 0.0 && p <= 1.0);
    }
  }
}

TEST(SyntheticInputs, BadArgumentsAreConfigErrors) {
  EXPECT_THROW(generate_synthetic_inputs(1, 3, 2, 0.0), ConfigError);
  EXPECT_THROW(generate_synthetic_inputs(1, 1, 2, 10.0), ConfigError);
  CityInputs in = generate_synthetic_inputs(1, 2, 1, 10.0);
  in.regions[0].qualification_cdf = {0.5, 0.4, 0.6, 0.8, 1.0};
  EXPECT_THROW(validate_inputs(in), ConfigError);
}

TEST(Instantiate, ScaledCounts) {
  EXPECT_EQ(scaled_count(1000.0, 0.01), 10);
  EXPECT_EQ(dwellings_for(90, 0.1), 100);
  EXPECT_EQ(dwellings_for(90, 0.0), 90);
}

TEST(Instantiate, PyramidOfAThousandGivesTenPersons) {
  CityInputs in = generate_synthetic_inputs(1, 1, 1, 100.0);
  for (auto& age : in.tables.pyramid[0]) age = {0.0, 0.0};
  in.tables.pyramid[0][40] = {500.0, 500.0};
  const State s = instantiate_city(in, SimParams{}, CityConfig{}, 1, 0.005);
  EXPECT_EQ(s.persons.size(), 10u);
  EXPECT_EQ(s.population(), 10);
}

class InstantiatedCity : public ::testing::Test {
 protected:
  void SetUp() override {
    const CityInputs in = generate_synthetic_inputs(42, 12, 3, 300.0);
    s = instantiate_city(in, SimParams{}, CityConfig{}, 42, 0.005);
  }
  State s;
};

TEST_F(InstantiatedCity, EveryPersonInExactlyOneHousehold) {
  std::vector<int> seen(s.persons.size(), 0);
  for (const auto& h : s.households) {
    ASSERT_FALSE(h.members.empty());
    for (Id m : h.members) {
      ++seen[m];
      EXPECT_EQ(s.persons[m].household, h.id);
    }
  }
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST_F(InstantiatedCity, HousingIsConsistent) {
  std::vector<int> occupants(s.dwellings.size(), 0);
  std::size_t links = 0;
  for (const auto& h : s.households) {
    ASSERT_NE(h.dwelling, kNone);
    ++occupants[h.dwelling];
    EXPECT_EQ(s.dwellings[h.dwelling].occupant, h.id);
    links += h.owned.size();
    for (Id d : h.owned) EXPECT_EQ(s.dwellings[d].owner_household, h.id);
    if (h.renting) {
      EXPECT_TRUE(h.owned.empty());
      EXPECT_TRUE(h.rent.positive());
    }
  }
  for (int c : occupants) EXPECT_LE(c, 1);
  EXPECT_EQ(links, s.dwellings.size());
  for (const auto& d : s.dwellings) {
    EXPECT_NE(d.owner_household, kNone);
    EXPECT_GE(d.size, 20.0);
    EXPECT_LE(d.size, 120.0);
    EXPECT_GE(d.quality, 1);
    EXPECT_LE(d.quality, 4);
  }
}

TEST_F(InstantiatedCity, VacantShareMatchesParameter) {
  const double vacant = static_cast<double>(s.dwellings.size() - s.households.size());
  EXPECT_NEAR(vacant / static_cast<double>(s.dwellings.size()), SimParams{}.vacancy_share, 0.01);
}

TEST_F(InstantiatedCity, InitialQualityOfLifeIsHdi) {
  const CityInputs in = generate_synthetic_inputs(42, 12, 3, 300.0);
  for (const auto& r : s.regions) {
    EXPECT_DOUBLE_EQ(r.qli, in.regions[r.id].initial_qli);
  }
  for (std::size_t m = 0; m < s.municipalities.size(); ++m) {
    EXPECT_DOUBLE_EQ(s.municipalities[m].hdi, in.tables.hdi[m]);
  }
}

TEST(Instantiate, CsvRoundTripGivesSameCity) {
  const CityInputs in = generate_synthetic_inputs(5, 6, 2, 100.0);
  const auto dir = std::filesystem::temp_directory_path() / "polisim_inputs_roundtrip";
  std::filesystem::remove_all(dir);
  write_inputs(in, dir);
  const CityInputs back = read_inputs(dir);
  const State a = instantiate_city(in, SimParams{}, CityConfig{}, 5, 0.005);
  const State b = instantiate_city(back, SimParams{}, CityConfig{}, 5, 0.005);
  EXPECT_EQ(state_digest(a), state_digest(b));
  std::filesystem::remove_all(dir);
}

TEST(Instantiate, MissingInputsAreReported) {
  EXPECT_ANY_THROW(read_inputs("/nonexistent/polisim_inputs"));
}
