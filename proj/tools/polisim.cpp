#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "polisim/error.hpp"
#include "polisim/params.hpp"
#include "polisim/runner.hpp"
#include "polisim/synthpop.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kIntegrityError = 3;

struct Common {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scenario;
  std::optional<std::string> out;
  std::optional<std::size_t> months;
  std::size_t cpus = 1;
  std::size_t runs = 1;
  bool plot = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--cpus", c.cpus, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("-n,--runs", c.runs, "runs per batch")->check(CLI::PositiveNumber);
  cmd->add_option("--config", c.config, "JSON config file");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--scenario", c.scenario, "baseline | acquisition | voucher | aid");
  cmd->add_option("--out", c.out, "output directory (default $POLISIM_OUT or ./output)");
  cmd->add_option("--months", c.months, "horizon in months");
  cmd->add_flag("--plot", c.plot, "write SVG plots");
}

polisim::RunConfig resolve(const Common& c) {
  polisim::RunConfig cfg = c.config ? polisim::load_config(*c.config) : polisim::RunConfig{};
  if (c.seed) cfg.seed = *c.seed;
  if (c.scenario) cfg.scenario = polisim::policy_from_string(*c.scenario);
  if (c.months) cfg.horizon_months = *c.months;
  cfg.validate();
  return cfg;
}

int finish(const std::vector<polisim::Job>& jobs, const Common& c, const std::string& command,
           const nlohmann::json& extra) {
  const auto records = polisim::run_jobs(jobs, c.cpus);
  nlohmann::json meta = extra;
  meta["command"] = command;
  meta["runs_per_point"] = c.runs;
  const auto dir = polisim::output_dir(c.out);
  polisim::export_results(dir, records, meta, c.plot);

  int code = kOk;
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.status == "ok") continue;
    ++failed;
    std::cerr << r.run_id << ": " << r.status << ": " << r.error << '\n';
    if (r.status == "integrity_error") code = kIntegrityError;
    else if (code == kOk && r.status == "config_error") code = kConfigError;
    else if (code == kOk) code = 1;
  }
  std::cout << records.size() - failed << "/" << records.size() << " runs ok, output in "
            << dir.string() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based metropolitan economy simulator"};
  app.require_subcommand(1);

  Common run_opts, sens_opts;
  auto* run = app.add_subcommand("run", "run n seeds of one configuration");
  add_common(run, run_opts);

  std::string sweep_text;
  auto* sens = app.add_subcommand("sensitivity", "sweep PARAM:start:end:points or POLICIES");
  add_common(sens, sens_opts);
  sens->add_option("sweep", sweep_text, "PARAM:start:end:points | POLICIES")->required();

  std::string gen_dir;
  std::optional<std::string> gen_config;
  std::optional<std::uint64_t> gen_seed;
  auto* gen = app.add_subcommand("gen-data", "write synthetic input tables");
  gen->add_option("dir,--out", gen_dir, "target directory")->required();
  gen->add_option("--config", gen_config, "JSON config file");
  gen->add_option("--seed", gen_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      const auto cfg = resolve(run_opts);
      return finish(polisim::plan_runs(cfg, run_opts.runs), run_opts, "run",
                    {{"config", polisim::config_to_json(cfg)}});
    }
    if (*sens) {
      const auto cfg = resolve(sens_opts);
      const auto sweep = polisim::parse_sweep(sweep_text);
      nlohmann::json meta = {{"config", polisim::config_to_json(cfg)}, {"sweep", sweep_text}};
      if (!sweep.policies) meta["values"] = sweep.values();
      return finish(polisim::plan_sweep(cfg, sweep, sens_opts.runs), sens_opts, "sensitivity", meta);
    }
    if (*gen) {
      polisim::RunConfig cfg = gen_config ? polisim::load_config(*gen_config) : polisim::RunConfig{};
      if (gen_seed) cfg.seed = *gen_seed;
      const auto in = polisim::generate_synthetic_inputs(cfg.city.seed.value_or(cfg.seed),
                                                         cfg.city.n_regions,
                                                         cfg.city.n_municipalities, cfg.city.scale);
      polisim::write_inputs(in, gen_dir);
      std::cout << "wrote inputs to " << gen_dir << '\n';
      return kOk;
    }
  } catch (const polisim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const polisim::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kConfigError;
  } catch (const polisim::IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kIntegrityError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
