#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polisim/params.hpp"

namespace polisim {

struct State;

// Mean absolute difference over twice the mean; negatives count as zero.
// Empty input is undefined; an all-zero vector gives 0.
std::optional<double> gini(std::span<const double> values);

// Jobless share of persons aged labor_age_min..labor_age_max.
std::optional<double> unemployment_rate(const State& s, const SimParams& p);

// Sales-weighted price relative between two months; 1 when nothing sold.
double chain_ratio(std::span<const double> previous, std::span<const double> current,
                   std::span<const double> weights);

// Linear-interpolated quantile of an unsorted sample.
double quantile(std::vector<double> values, double q);

struct IndicatorFrame {
  int month = 0;
  std::vector<std::string> names;
  std::vector<double> values;  // NaN marks an undefined value

  double get(const std::string& name) const;
};

// Reads the state at the end of a month and advances the running indicators
// (unemployment used by wages, chained price index).
IndicatorFrame compute_indicators(State& s, const SimParams& p, std::span<const double> sold);

struct RunRecord {
  std::string run_id;
  std::string scenario;
  std::string group;  // plot series label: scenario or swept value
  std::uint64_t seed = 0;
  std::string status = "ok";
  std::string error;
  nlohmann::json overrides = nlohmann::json::object();
  std::vector<IndicatorFrame> frames;
};

// One CSV per indicator with columns month,value,run_id,scenario,seed.
void write_indicator_csvs(const std::filesystem::path& dir, std::span<const RunRecord> runs);
void write_manifest(const std::filesystem::path& dir, std::span<const RunRecord> runs,
                    const nlohmann::json& meta);
// One SVG per indicator, one line per group (mean over its runs).
void write_svg_plots(const std::filesystem::path& dir, std::span<const RunRecord> runs);

std::string format_value(double v);

}  // namespace polisim
