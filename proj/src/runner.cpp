#include "polisim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "polisim/error.hpp"
#include "polisim/rng.hpp"
#include "polisim/simulation.hpp"

namespace polisim {

namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string run_label(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r%03zu", index);
  return buf;
}

}  // namespace

std::vector<double> linspace(double start, double end, int points) {
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    v[i] = i + 1 == points ? end : start + (end - start) * i / (points - 1);
  }
  return v;
}

std::vector<double> SweepSpec::values() const { return linspace(start, end, points); }

SweepSpec parse_sweep(std::string_view text) {
  SweepSpec s;
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "POLICIES") {
    s.policies = true;
    return s;
  }
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw ConfigError("sweep must look like PARAM:start:end:points or POLICIES");
  const ParamInfo* info = find_param(parts[0]);
  if (!info) {
    std::string names;
    for (const auto& n : param_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown parameter '" + std::string(parts[0]) + "'; valid names: " + names);
  }
  s.param = info->name;
  s.start = parse_number(parts[1]);
  s.end = parse_number(parts[2]);
  const double n = parse_number(parts[3]);
  if (n < 2 || n != static_cast<int>(n)) throw ConfigError("sweep needs an integer number of points >= 2");
  s.points = static_cast<int>(n);
  return s;
}

std::uint64_t run_seed(std::uint64_t master, std::size_t index) { return mix_seed(master, index); }

std::uint64_t sweep_seed(std::uint64_t base, double value) {
  return mix_seed(base, std::bit_cast<std::uint64_t>(value + 0.0));
}

std::vector<Job> plan_runs(const RunConfig& base, std::size_t runs) {
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < runs; ++i) {
    Job j;
    j.config = base;
    j.config.seed = run_seed(base.seed, i);
    j.run_id = std::string(to_string(base.scenario)) + "-" + run_label(i);
    j.group = std::string(to_string(base.scenario));
    jobs.push_back(std::move(j));
  }
  return jobs;
}

std::vector<Job> plan_sweep(const RunConfig& base, const SweepSpec& sweep, std::size_t runs) {
  std::vector<Job> jobs;
  if (sweep.policies) {
    // Scenarios share seeds so each city is compared with itself.
    for (PolicyKind k : {PolicyKind::baseline, PolicyKind::acquisition, PolicyKind::voucher,
                         PolicyKind::aid}) {
      for (std::size_t i = 0; i < runs; ++i) {
        Job j;
        j.config = base;
        j.config.scenario = k;
        j.config.seed = run_seed(base.seed, i);
        j.run_id = std::string(to_string(k)) + "-" + run_label(i);
        j.group = std::string(to_string(k));
        j.overrides["scenario"] = std::string(to_string(k));
        jobs.push_back(std::move(j));
      }
    }
    return jobs;
  }
  const ParamInfo* info = find_param(sweep.param);
  if (!info) throw ConfigError("unknown parameter '" + sweep.param + "'");
  const auto values = sweep.values();
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t i = 0; i < runs; ++i) {
      Job j;
      j.config = base;
      set_param(j.config.params, *info, values[v]);
      j.config.params.validate();
      const std::uint64_t city = run_seed(base.seed, i);
      if (!j.config.city.seed) j.config.city.seed = city;
      j.config.seed = sweep_seed(city, values[v]);
      const std::string value = format_value(get_param(j.config.params, *info));
      j.run_id = sweep.param + "=" + value + "-" + run_label(i);
      j.group = sweep.param + "=" + value;
      j.overrides[info->key] = get_param(j.config.params, *info);
      jobs.push_back(std::move(j));
    }
  }
  return jobs;
}

RunRecord execute(const Job& job) {
  RunRecord r;
  r.run_id = job.run_id;
  r.scenario = std::string(to_string(job.config.scenario));
  r.group = job.group;
  r.seed = job.config.seed;
  r.overrides = job.overrides;
  try {
    Simulation sim(job.config);
    sim.run();
    r.frames = sim.frames();
  } catch (const IntegrityError& e) {
    r.status = "integrity_error";
    r.error = e.what();
  } catch (const ConfigError& e) {
    r.status = "config_error";
    r.error = e.what();
  } catch (const std::exception& e) {
    r.status = "error";
    r.error = e.what();
  }
  return r;
}

std::vector<RunRecord> run_jobs(const std::vector<Job>& jobs, std::size_t workers) {
  std::vector<RunRecord> out(jobs.size());
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, jobs.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) out[i] = execute(jobs[i]);
  };
  if (workers == 1) {
    work();
    return out;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

void export_results(const std::filesystem::path& dir, const std::vector<RunRecord>& records,
                    const nlohmann::json& meta, bool plot) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_indicator_csvs(dir, records);
  write_manifest(dir, records, meta);
  if (plot) write_svg_plots(dir, records);
}

std::filesystem::path output_dir(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("POLISIM_OUT"); env && *env) return env;
  return "output";
}

}  // namespace polisim
