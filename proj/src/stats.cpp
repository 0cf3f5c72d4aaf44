#include "polisim/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "polisim/error.hpp"
#include "polisim/state.hpp"

namespace polisim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::optional<double> gini(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  std::vector<double> x(values.begin(), values.end());
  for (auto& v : x) v = std::max(v, 0.0);
  std::sort(x.begin(), x.end());
  const long double n = static_cast<long double>(x.size());
  long double total = 0.0L;
  long double weighted = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += x[i];
    weighted += (2.0L * static_cast<long double>(i + 1) - n - 1.0L) * x[i];
  }
  if (total <= 0.0L) return 0.0;
  const double g = static_cast<double>(weighted / (n * total));
  return std::clamp(g, 0.0, 1.0);
}

std::optional<double> unemployment_rate(const State& s, const SimParams& p) {
  std::size_t force = 0;
  std::size_t jobless = 0;
  for (const auto& per : s.persons) {
    if (!per.alive) continue;
    const int age = per.age_years();
    if (age < p.labor_age_min || age > p.labor_age_max) continue;
    ++force;
    jobless += per.employed() ? 0 : 1;
  }
  if (force == 0) return std::nullopt;
  return static_cast<double>(jobless) / static_cast<double>(force);
}

double chain_ratio(std::span<const double> previous, std::span<const double> current,
                   std::span<const double> weights) {
  double num = 0.0;
  double den = 0.0;
  const std::size_t n = std::min({previous.size(), current.size(), weights.size()});
  for (std::size_t i = 0; i < n; ++i) {
    num += weights[i] * current[i];
    den += weights[i] * previous[i];
  }
  return den > 0.0 ? num / den : 1.0;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double IndicatorFrame::get(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  return kNaN;
}

IndicatorFrame compute_indicators(State& s, const SimParams& p, std::span<const double> sold) {
  IndicatorFrame f;
  f.month = s.clock.month_index;
  auto put = [&](std::string name, double v) {
    f.names.push_back(std::move(name));
    f.values.push_back(v);
  };
  auto opt = [](std::optional<double> v) { return v ? *v : kNaN; };

  const std::size_t nm = s.municipalities.size();
  std::vector<double> pis;
  std::vector<std::vector<double>> pis_m(nm);
  std::size_t households = 0;
  std::size_t renters = 0;
  for (const auto& h : s.households) {
    if (!h.active || h.members.empty()) continue;
    ++households;
    renters += h.renting ? 1 : 0;
    pis.push_back(h.permanent_income);
    const Id m = s.household_municipality(h);
    if (m != kNone) pis_m[m].push_back(h.permanent_income);
  }

  const auto u = unemployment_rate(s, p);
  if (u) s.unemployment = *u;

  std::vector<double> prices;
  for (const auto& firm : s.firms) prices.push_back(firm.price);
  std::vector<double> prev = s.last_prices;
  prev.resize(prices.size(), 0.0);
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (prev[i] <= 0.0) prev[i] = prices[i];
  }
  const double before = s.price_index;
  s.price_index *= chain_ratio(prev, prices, sold);
  s.last_prices = prices;

  double stock = 0.0;
  for (const auto& d : s.dwellings) stock += d.value;
  std::size_t vacant = 0;
  for (const auto& d : s.dwellings) vacant += d.occupant == kNone ? 1 : 0;

  std::vector<double> profits;
  for (const auto& firm : s.firms) profits.push_back(firm.profit.units());
  double profit_mean = kNaN;
  if (!profits.empty()) {
    profit_mean = 0.0;
    for (double v : profits) profit_mean += v;
    profit_mean /= static_cast<double>(profits.size());
  }

  double qli = 0.0;
  for (const auto& r : s.regions) qli += r.qli;

  put("gdp", s.flows.gdp.units());
  put("gini", opt(gini(pis)));
  put("unemployment", opt(u));
  put("price_index", s.price_index);
  put("inflation", before > 0.0 ? s.price_index / before - 1.0 : kNaN);
  put("house_price_stock", s.dwellings.empty() ? kNaN : stock / static_cast<double>(s.dwellings.size()));
  put("house_price_sales", s.flows.sales == 0 ? kNaN : s.flows.sales_value.units() / s.flows.sales);
  put("rent_default_pct", renters == 0 ? kNaN : 100.0 * s.flows.rent_defaults / static_cast<double>(renters));
  put("null_consumption_pct",
      households == 0 ? kNaN : 100.0 * s.flows.null_consumption / static_cast<double>(households));
  put("firm_profit_mean", profit_mean);
  put("firm_profit_q25", quantile(profits, 0.25));
  put("firm_profit_q75", quantile(profits, 0.75));
  put("population", static_cast<double>(s.population()));
  put("households", static_cast<double>(households));
  put("firms", static_cast<double>(s.firms.size()));
  put("vacancy", s.dwellings.empty() ? kNaN : static_cast<double>(vacant) / static_cast<double>(s.dwellings.size()));
  put("sales", s.flows.sales);
  put("mortgage_sales", s.flows.mortgage_sales);
  put("rentals", s.flows.rentals);
  put("births", s.flows.births);
  put("deaths", s.flows.deaths);
  put("migrants", s.flows.migrants_in);
  put("deposits", s.deposits().units());
  put("loan_book", s.loan_book().units());
  put("mean_qli", s.regions.empty() ? kNaN : qli / static_cast<double>(s.regions.size()));
  for (std::size_t m = 0; m < nm; ++m) {
    const Municipality& muni = s.municipalities[m];
    double q = 0.0;
    for (Id r : muni.regions) q += s.regions[r].qli;
    const std::string tag = "_m" + std::to_string(m);
    put("qli" + tag, muni.regions.empty() ? kNaN : q / static_cast<double>(muni.regions.size()));
    put("gini" + tag, opt(gini(pis_m[m])));
    put("gdp" + tag, s.flows.gdp_by_municipality[m].units());
    put("treasury" + tag, muni.treasury.units());
  }
  return f;
}

std::string format_value(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::vector<std::string> indicator_names(std::span<const RunRecord> runs) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& r : runs) {
    for (const auto& f : r.frames) {
      for (const auto& n : f.names) {
        if (seen.insert(n).second) names.push_back(n);
      }
    }
  }
  return names;
}

}  // namespace

void write_indicator_csvs(const std::filesystem::path& dir, std::span<const RunRecord> runs) {
  for (const auto& name : indicator_names(runs)) {
    auto out = open_out(dir / (name + ".csv"));
    out << "month,value,run_id,scenario,seed\n";
    for (const auto& r : runs) {
      for (const auto& f : r.frames) {
        out << f.month << ',' << format_value(f.get(name)) << ',' << r.run_id << ',' << r.scenario
            << ',' << r.seed << '\n';
      }
    }
    if (!out) throw IoError("cannot write " + (dir / (name + ".csv")).string());
  }
}

void write_manifest(const std::filesystem::path& dir, std::span<const RunRecord> runs,
                    const nlohmann::json& meta) {
  nlohmann::json j = meta;
  j["indicators"] = indicator_names(runs);
  j["runs"] = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json e;
    e["run_id"] = r.run_id;
    e["scenario"] = r.scenario;
    e["group"] = r.group;
    e["seed"] = r.seed;
    e["status"] = r.status;
    if (!r.error.empty()) e["error"] = r.error;
    e["months"] = r.frames.size();
    e["overrides"] = r.overrides;
    j["runs"].push_back(e);
  }
  auto out = open_out(dir / "manifest.json");
  out << j.dump(2) << '\n';
}

void write_svg_plots(const std::filesystem::path& dir, std::span<const RunRecord> runs) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  constexpr double kW = 640, kH = 360, kPad = 48;

  for (const auto& name : indicator_names(runs)) {
    // group -> month -> (sum, count)
    std::map<std::string, std::map<int, std::pair<double, int>>> series;
    std::vector<std::string> order;
    for (const auto& r : runs) {
      const std::string g = r.group.empty() ? r.scenario : r.group;
      if (!series.contains(g)) order.push_back(g);
      auto& s = series[g];
      for (const auto& f : r.frames) {
        const double v = f.get(name);
        if (std::isnan(v)) continue;
        auto& cell = s[f.month];
        cell.first += v;
        ++cell.second;
      }
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    int m0 = std::numeric_limits<int>::max(), m1 = std::numeric_limits<int>::min();
    for (const auto& [g, s] : series) {
      for (const auto& [m, c] : s) {
        const double v = c.first / c.second;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        m0 = std::min(m0, m);
        m1 = std::max(m1, m);
      }
    }
    auto out = open_out(dir / (name + ".svg"));
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kPad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << name
        << "</text>\n";
    if (lo <= hi) {
      if (hi == lo) {
        hi += 0.5;
        lo -= 0.5;
      }
      const double span_m = m1 > m0 ? m1 - m0 : 1;
      out << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad / 2 << "\" y2=\""
          << kH - kPad << "\" stroke=\"black\"/>\n"
          << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad << "\" y2=\"" << kH - kPad
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"4\" y=\"" << kPad << "\" font-family=\"sans-serif\" font-size=\"10\">"
          << format_value(hi) << "</text>\n"
          << "<text x=\"4\" y=\"" << kH - kPad << "\" font-family=\"sans-serif\" font-size=\"10\">"
          << format_value(lo) << "</text>\n";
      for (std::size_t gi = 0; gi < order.size(); ++gi) {
        const auto& s = series[order[gi]];
        out << "<polyline fill=\"none\" stroke=\"" << kColors[gi % 10] << "\" points=\"";
        for (const auto& [m, c] : s) {
          const double x = kPad + (m - m0) / span_m * (kW - 1.5 * kPad);
          const double y = kH - kPad - (c.first / c.second - lo) / (hi - lo) * (kH - 2 * kPad);
          out << format_value(x) << ',' << format_value(y) << ' ';
        }
        out << "\"/>\n"
            << "<text x=\"" << kW - 150 << "\" y=\"" << 24 + 14 * gi << "\" font-family=\"sans-serif\" "
            << "font-size=\"11\" fill=\"" << kColors[gi % 10] << "\">" << order[gi] << "</text>\n";
      }
    }
    out << "</svg>\n";
  }
}

}  // namespace polisim
