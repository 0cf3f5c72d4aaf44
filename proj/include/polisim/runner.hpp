#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polisim/params.hpp"
#include "polisim/stats.hpp"

namespace polisim {

// "PARAM:start:end:points" or the token "POLICIES".
struct SweepSpec {
  bool policies = false;
  std::string param;  // registry name, upper case
  double start = 0.0;
  double end = 0.0;
  int points = 0;
  std::vector<double> values() const;
};

SweepSpec parse_sweep(std::string_view text);  // throws ConfigError
std::vector<double> linspace(double start, double end, int points);

std::uint64_t run_seed(std::uint64_t master, std::size_t index);
std::uint64_t sweep_seed(std::uint64_t base, double value);

struct Job {
  RunConfig config;
  std::string run_id;
  std::string group;
  nlohmann::json overrides = nlohmann::json::object();
};

// n runs of the base config, one per derived seed.
std::vector<Job> plan_runs(const RunConfig& base, std::size_t runs);
// n runs per sweep point. A run index shares its city across points.
std::vector<Job> plan_sweep(const RunConfig& base, const SweepSpec& sweep, std::size_t runs);

// Never throws for a failing run; the error lands in the record status.
RunRecord execute(const Job& job);
// Results come back in job order whatever the worker count.
std::vector<RunRecord> run_jobs(const std::vector<Job>& jobs, std::size_t workers);

void export_results(const std::filesystem::path& dir, const std::vector<RunRecord>& records,
                    const nlohmann::json& meta, bool plot);

// Explicit flag, then POLISIM_OUT, then "output".
std::filesystem::path output_dir(const std::optional<std::string>& flag);

}  // namespace polisim
