// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "polisim/error.hpp"
#include "polisim/firms.hpp"
#include "polisim/goods.hpp"
#include "polisim/housing.hpp"
#include "polisim/labor.hpp"
#include "polisim/ledger.hpp"
#include "polisim/rng.hpp"
#include "polisim/runner.hpp"
#include "polisim/simulation.hpp"
#include "polisim/stats.hpp"

using namespace polisim;
namespace fs = std::filesystem;

namespace {

constexpr double kEquationTol = 1e-9;
constexpr double kEquationSeconds = 1.0;
constexpr double kDriftTol = 1e-9;
constexpr double kRunSeconds = 60.0;
constexpr double kGiniTol = 1e-12;
constexpr double kPolicySeconds = 30.0 * 60.0;
constexpr int kPolicySeeds = 5;
constexpr int kPolicyMajority = 4;
constexpr int kSwitchSeeds = 3;
constexpr double kUnemploymentBand[2] = {0.02, 0.30};
constexpr double kGiniBand[2] = {0.25, 0.65};
constexpr double kNullConsumptionMax = 10.0;  // percent

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double series_mean(const std::vector<IndicatorFrame>& frames, const std::string& name) {
  double sum = 0.0;
  int n = 0;
  for (const auto& f : frames) {
    const double v = f.get(name);
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  return n ? sum / n : std::nan("");
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

bool near(double a, double b) { return std::abs(a - b) <= kEquationTol; }

// 1: production, permanent income, wages, score and ask price.
void equations() {
  const auto t0 = Clock::now();
  bool ok = true;
  SimParams p;
  const std::vector<int> one{1};
  ok &= near(production(one, p.alpha, p.beta), 0.1);
  const std::vector<int> mixed{1, 4};
  ok &= near(production(mixed, p.alpha, p.beta), (1.0 + std::pow(4.0, p.alpha)) / p.beta);

  ok &= near(permanent_income(0.0, 0.0, 0.01), 0.0);
  ok &= near(permanent_income(100.0, 0.0, 0.005), 100.0);
  ok &= near(permanent_income(100.0, 1000.0, 0.01), 110.0);

  const std::vector<double> equal{1.0, 1.0};
  const WageBill bill = compute_wages(Money::from_units(200), 0.1, equal, 0.0, Money::from_units(1000));
  ok &= bill.net.size() == 2 && near(bill.net[0].units(), 90.0) && near(bill.net[1].units(), 90.0);

  ok &= near(score(5, 10.0, 2.0, 1.0, Criterion::full_score), 13.0);
  ok &= near(score(5, 10.0, 2.0, 1.0, Criterion::distance_only), 8.0);

  ok &= near(ask_price(100.0, 0.7, 0.5, 0, p), 175.0);
  ok &= near(ask_price(100.0, 0.7, 0.5, 100000, p), 105.0);

  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double y = rng.uniform(0.0, 1000.0);
    const double w = rng.uniform(-10000.0, 100000.0);
    const double r = rng.uniform(0.001, 0.05);
    worst = std::max(worst, std::abs(permanent_income(y, w, r) - (y + r * w)));
  }
  ok &= worst <= kEquationTol;
  const double secs = seconds_since(t0);
  ok &= secs < kEquationSeconds;
  report(1, ok, fmt("identity max err %.3g", worst) + fmt(", %.3f s", secs));
}

// 4: Gini against the pairwise definition.
void gini_oracle() {
  Rng rng(77);
  double worst = 0.0;
  bool bounded = true;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(1 + rng.index(1000));
    for (auto& x : v) x = rng.bernoulli(0.05) ? 0.0 : rng.lognormal(2.0, 1.2);
    const double g = *gini(v);
    double sum = 0.0, diff = 0.0;
    for (double a : v) sum += a;
    for (double a : v) {
      for (double b : v) diff += std::abs(a - b);
    }
    const double oracle = sum > 0.0 ? diff / (2.0 * v.size() * sum) : 0.0;
    worst = std::max(worst, std::abs(g - oracle));
    bounded &= g >= 0.0 && g <= 1.0;
  }
  report(4, worst <= kGiniTol && bounded, fmt("max err %.3g", worst));
}

// 6: ask price monotonicity.
void ask_monotonicity() {
  SimParams p;
  p.tau = 3.0;
  Rng rng(6);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const double hs = rng.uniform(20.0, 120.0);
    const double hq = static_cast<double>(rng.uniform_int(1, 4));
    const double qli = rng.uniform(0.1, 1.0);
    const double nq = rng.uniform(0.0, 1.0);
    const int t = rng.uniform_int(0, 60);
    const double base = ask_price(hs * hq, qli, nq, t, p);
    bad += !(ask_price(hs * hq, qli, nq, t + 1, p) < base);
    bad += !(ask_price((hs + 1.0) * hq, qli, nq, t, p) > base);
    bad += !(ask_price(hs * (hq + 1.0), qli, nq, t, p) > base);
    bad += !(ask_price(hs * hq, qli + 0.01, nq, t, p) > base);
    bad += !(ask_price(hs * hq, qli, nq + 0.01, t, p) > base);
  }
  report(6, bad == 0, std::to_string(bad) + " violations");
}

// 2, 5 and 9 share one default run.
void default_run() {
  RunConfig c;
  Simulation sim(c);
  const std::size_t persons = sim.state().population();
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool conserved = true;
  int double_mortgages = 0;
  std::string error;
  try {
    for (std::size_t t = 0; t < c.horizon_months; ++t) {
      const auto before = take_snapshot(sim.state());
      StepOptions opts;
      opts.check_conservation = false;  // measured here instead
      sim.step(opts);
      const auto r = check_conservation(before, take_snapshot(sim.state()));
      worst = std::max(worst, r.relative);
      conserved &= r.relative <= kDriftTol;
      std::map<Id, int> live;
      for (const auto& l : sim.state().bank.loans) {
        if (l.active && ++live[l.household] > 1) ++double_mortgages;
      }
    }
  } catch (const std::exception& e) {
    error = e.what();
    conserved = false;
  }
  const double secs = seconds_since(t0);
  report(2, conserved && secs < kRunSeconds,
         std::to_string(persons) + " persons" + fmt(", max drift %.3g", worst) + fmt(", %.1f s", secs) +
             (error.empty() ? "" : ", error: " + error));

  int ltv = 0, twice = 0, book = 0;
  const auto& audit = sim.state().mortgage_audit;
  for (const auto& a : audit) {
    if (a.loan.units() > a.ltv * a.price.units() + 1e-9) ++ltv;
    if (a.live_mortgages_of_household > 1) ++twice;
    if (a.book_after.units() > a.nu * a.deposits_after.units() + 1e-9) ++book;
  }
  report(5, error.empty() && !audit.empty() && ltv == 0 && twice == 0 && book == 0 && double_mortgages == 0,
         std::to_string(audit.size()) + " originations, L/P>LTV " + std::to_string(ltv) + ", two live " +
             std::to_string(twice + double_mortgages) + ", book>nu*deposits " + std::to_string(book));

  const auto& frames = sim.frames();
  const double u = series_mean(frames, "unemployment");
  const double g = series_mean(frames, "gini");
  double null_max = 0.0;
  bool bands = error.empty() && frames.size() == c.horizon_months;
  for (const auto& f : frames) {
    const double fu = f.get("unemployment"), fg = f.get("gini"), fn = f.get("null_consumption_pct");
    bands &= fu >= kUnemploymentBand[0] && fu <= kUnemploymentBand[1];
    bands &= fg >= kGiniBand[0] && fg <= kGiniBand[1];
    bands &= fn < kNullConsumptionMax;
    null_max = std::max(null_max, fn);
  }
  report(9, bands, fmt("mean unemployment %.4f", u) + fmt(", mean gini %.4f", g) +
                       fmt(", max null consumption %.3f%%", null_max));
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || read_all(e.path()) != read_all(other)) return false;
    ++n;
  }
  for (const auto& e : fs::directory_iterator(b)) {
    if (!fs::exists(a / e.path().filename())) return false;
  }
  return n > 0;
}

// 3: repeated runs and worker counts give the same bytes.
void determinism() {
  RunConfig c;
  c.horizon_months = 24;
  const auto jobs = plan_runs(c, 4);
  const fs::path root = fs::temp_directory_path() / "polisim_acceptance_det";
  fs::remove_all(root);
  const nlohmann::json meta{{"command", "acceptance"}};
  export_results(root / "a", run_jobs(jobs, 1), meta, false);
  export_results(root / "b", run_jobs(jobs, 1), meta, false);
  export_results(root / "c4", run_jobs(jobs, 4), meta, false);
  const bool repeat = same_tree(root / "a", root / "b");
  const bool workers_ok = same_tree(root / "a", root / "c4");
  fs::remove_all(root);
  report(3, repeat && workers_ok,
         std::string("repeat ") + (repeat ? "identical" : "differs") + ", c=1 vs c=4 " +
             (workers_ok ? "identical" : "differs"));
}

// 7: scenario rank order on the default city.
void policy_direction() {
  const auto t0 = Clock::now();
  RunConfig c;
  const auto jobs = plan_sweep(c, parse_sweep("POLICIES"), kPolicySeeds);
  const auto records = run_jobs(jobs, workers());
  std::map<std::string, std::vector<const RunRecord*>> by;
  bool all_ok = true;
  for (const auto& r : records) {
    all_ok &= r.status == "ok";
    by[r.group].push_back(&r);
  }
  int aid_lt_base = 0, acq_gt_aid = 0, gdp_aid_gt_base = 0;
  std::string detail;
  for (int i = 0; i < kPolicySeeds && all_ok; ++i) {
    const auto& base = by["baseline"][i]->frames;
    const auto& aid = by["aid"][i]->frames;
    const auto& acq = by["acquisition"][i]->frames;
    const double gb = series_mean(base, "gini"), ga = series_mean(aid, "gini"), gq = series_mean(acq, "gini");
    const double yb = series_mean(base, "gdp"), ya = series_mean(aid, "gdp");
    aid_lt_base += ga < gb;
    acq_gt_aid += gq > ga;
    gdp_aid_gt_base += ya > yb;
    char buf[160];
    std::snprintf(buf, sizeof buf, " [seed %d gini b/a/q %.4f/%.4f/%.4f gdp b/a %.1f/%.1f]", i, gb, ga, gq, yb, ya);
    detail += buf;
  }
  const double secs = seconds_since(t0);
  const bool ok = all_ok && aid_lt_base >= kPolicyMajority && acq_gt_aid >= kPolicyMajority &&
                  gdp_aid_gt_base >= kPolicyMajority && secs < kPolicySeconds;
  report(7, ok,
         "gini(aid)<gini(base) " + std::to_string(aid_lt_base) + "/5, gini(acq)>gini(aid) " +
             std::to_string(acq_gt_aid) + "/5, gdp(aid)>gdp(base) " + std::to_string(gdp_aid_gt_base) + "/5" +
             fmt(", %.0f s", secs) + (all_ok ? "" : ", a run failed") + detail);
}

// 8: hiring criterion endpoints and the unemployment term in wages.
void structural_switches() {
  RunConfig c;
  std::vector<Job> jobs;
  auto add = [&](RunConfig v, const std::string& tag) {
    for (auto j : plan_runs(v, kSwitchSeeds)) {
      j.group = tag;
      jobs.push_back(std::move(j));
    }
  };
  for (double eta : {0.0, 0.3, 1.0}) {
    RunConfig v = c;
    v.params.eta = eta;
    add(v, "eta" + fmt("%.1f", eta));
  }
  RunConfig off = c;
  off.params.wage_unemployment = false;
  add(off, "wage_u_off");
  const auto records = run_jobs(jobs, workers());

  std::map<std::string, double> u, profit;
  bool all_ok = true;
  for (const auto& r : records) {
    all_ok &= r.status == "ok";
    u[r.group] += series_mean(r.frames, "unemployment") / kSwitchSeeds;
    profit[r.group] += series_mean(r.frames, "firm_profit_mean") / kSwitchSeeds;
  }
  const double u0 = u["eta0.0"], um = u["eta0.3"], u1 = u["eta1.0"];
  const double p_on = profit["eta0.3"], p_off = profit["wage_u_off"];
  const bool ok = all_ok && u0 >= um && u1 >= um && p_off < p_on;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "unemployment eta 0/0.3/1 = %.6f/%.6f/%.6f, firm profit U-in-wages on/off = %.3f/%.3f", u0, um,
                u1, p_on, p_off);
  report(8, ok, std::string(buf) + (all_ok ? "" : ", a run failed"));
}

}  // namespace

int main() {
  equations();
  default_run();
  determinism();
  gini_oracle();
  ask_monotonicity();
  policy_direction();
  structural_switches();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures ? 1 : 0;
}
