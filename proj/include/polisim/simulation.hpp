#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "polisim/params.hpp"
#include "polisim/state.hpp"
#include "polisim/stats.hpp"
#include "polisim/synthpop.hpp"

namespace polisim {

inline constexpr int kPhases = 16;
std::string_view phase_name(int phase);  // 1-based

struct StepOptions {
  bool skip_wage_payout = false;  // test hook for the phase-ordering property
  bool check_conservation = true;
};

// Runs the sixteen monthly phases and advances the clock. Throws HorizonError
// when the series do not cover the month and IntegrityError naming the phase
// when money appears or vanishes.
IndicatorFrame step_month(State& s, const SimParams& p, const ExogenousSeries& series,
                          PolicyKind scenario, const StepOptions& options = {});

class Simulation {
 public:
  explicit Simulation(const RunConfig& config);
  Simulation(const RunConfig& config, State state, ExogenousSeries series);

  IndicatorFrame step(const StepOptions& options = {});
  const std::vector<IndicatorFrame>& run();

  const RunConfig& config() const { return config_; }
  const State& state() const { return state_; }
  State& state() { return state_; }
  const ExogenousSeries& series() const { return series_; }
  const std::vector<IndicatorFrame>& frames() const { return frames_; }

 private:
  RunConfig config_;
  State state_;
  ExogenousSeries series_;
  std::vector<IndicatorFrame> frames_;
};

// Inputs for a config: loaded from city.data_dir or generated.
CityInputs city_inputs(const RunConfig& config);
State build_state(const RunConfig& config);
ExogenousSeries build_series(const RunConfig& config, const State& s);

}  // namespace polisim
