#include "polisim/synthpop.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "polisim/demographics.hpp"
#include "polisim/error.hpp"
#include "polisim/firms.hpp"
#include "polisim/goods.hpp"
#include "polisim/housing.hpp"
#include "polisim/labor.hpp"

namespace polisim {

std::int64_t scaled_count(double real_count, double pop) {
  return static_cast<std::int64_t>(std::llround(real_count * pop));
}

std::int64_t dwellings_for(std::int64_t households, double vacancy_share) {
  return static_cast<std::int64_t>(std::llround(static_cast<double>(households) / (1.0 - vacancy_share)));
}

namespace {

void normalize(std::vector<double>& w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
}

}  // namespace

CityInputs generate_synthetic_inputs(std::uint64_t seed, std::size_t n_regions,
                                     std::size_t n_municipalities, double scale) {
  if (scale <= 0.0) throw ConfigError("scale must be > 0");
  if (n_municipalities == 0 || n_regions < n_municipalities) {
    throw ConfigError("need n_regions >= n_municipalities >= 1");
  }
  Rng rng(mix_seed(seed, hash_name("synthetic-inputs")));
  CityInputs in;
  const std::size_t nm = n_municipalities;

  // Municipality 0 is the core and holds about half of the people.
  std::vector<double> muni_share(nm, 1.0);
  if (nm > 1) {
    muni_share[0] = 0.5;
    std::vector<double> rest(nm - 1);
    for (auto& v : rest) v = rng.uniform(0.5, 1.5);
    normalize(rest);
    for (std::size_t m = 1; m < nm; ++m) muni_share[m] = 0.5 * rest[m - 1];
  }

  std::vector<std::size_t> region_muni(n_regions);
  for (std::size_t r = 0; r < n_regions; ++r) {
    if (r < nm) {
      region_muni[r] = r;
    } else {
      region_muni[r] = rng.bernoulli(0.4) ? 0 : rng.index(nm);
    }
  }

  in.tables.hdi.resize(nm);
  std::vector<std::array<double, 2>> centers(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    in.tables.hdi[m] = m == 0 ? 0.82 : rng.uniform(0.64, 0.72);
    if (m > 0) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(m - 1) / static_cast<double>(nm - 1);
      const double radius = rng.uniform(15.0, 35.0);
      centers[m] = {radius * std::cos(angle), radius * std::sin(angle)};
    }
  }

  for (std::size_t r = 0; r < n_regions; ++r) {
    const std::size_t m = region_muni[r];
    const bool core = m == 0;
    RegionSpec spec;
    spec.region_id = static_cast<std::uint32_t>(r);
    spec.municipality_id = static_cast<std::uint32_t>(m);
    const double spread = core ? 8.0 : 5.0;
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double d = spread * std::sqrt(rng.uniform());
    spec.x_km = centers[m][0] + d * std::cos(a);
    spec.y_km = centers[m][1] + d * std::sin(a);
    spec.population_weight = rng.uniform(0.5, 1.5);

    std::array<double, kQualificationLevels> pmf =
        core ? std::array<double, kQualificationLevels>{0.12, 0.23, 0.30, 0.22, 0.13}
             : std::array<double, kQualificationLevels>{0.30, 0.32, 0.23, 0.10, 0.05};
    double acc = 0.0;
    double total = 0.0;
    for (auto& v : pmf) {
      v *= rng.uniform(0.8, 1.2);
      total += v;
    }
    for (int l = 0; l < kQualificationLevels; ++l) {
      acc += pmf[l] / total;
      spec.qualification_cdf[l] = acc;
    }
    spec.qualification_cdf[kQualificationLevels - 1] = 1.0;

    spec.avg_household_size = core ? rng.uniform(2.6, 3.0) : rng.uniform(3.0, 3.6);
    spec.initial_qli = std::clamp(in.tables.hdi[m] + rng.uniform(-0.02, 0.02), 0.05, 1.0);
    spec.license_price = spec.initial_qli * (core ? rng.uniform(0.6, 0.9) : rng.uniform(0.4, 0.7));
    in.regions.push_back(spec);
  }

  // Weights inside each municipality sum to one.
  for (std::size_t m = 0; m < nm; ++m) {
    double sum = 0.0;
    for (const auto& r : in.regions) sum += r.municipality_id == m ? r.population_weight : 0.0;
    for (auto& r : in.regions) {
      if (r.municipality_id == m) r.population_weight /= sum;
    }
  }

  const double real_pop = scale * 1000.0;
  for (auto& r : in.regions) {
    const double people = real_pop * muni_share[r.municipality_id] * r.population_weight;
    const double density = r.municipality_id == 0 ? 0.03 : 0.012;  // firms per person
    r.firm_count = people * density;
    r.license_stock = static_cast<int>(std::llround(people / r.avg_household_size * 0.05));
  }

  // Age pyramid: flat through young adulthood, thinning with age.
  in.tables.pyramid.resize(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    std::vector<double> w(kPyramidMaxAge + 1);
    for (int a = 0; a <= kPyramidMaxAge; ++a) {
      w[a] = a < 25 ? 1.0 : std::exp(-(a - 25) / 28.0);
      if (a > 80) w[a] *= std::exp(-(a - 80) / 6.0);
    }
    normalize(w);
    in.tables.pyramid[m].resize(kPyramidMaxAge + 1);
    for (int a = 0; a <= kPyramidMaxAge; ++a) {
      const double people = real_pop * muni_share[m] * w[a];
      const double female = 0.49 + 0.04 * std::min(1.0, a / 90.0);
      in.tables.pyramid[m][a] = {people * female, people * (1.0 - female)};
    }
  }

  for (int a = kFertilityMinAge; a <= kFertilityMaxAge; ++a) {
    const double z = (a - 27.0) / 7.0;
    in.tables.fertility[a] = 0.12 * std::exp(-z * z);
  }
  for (int g = 0; g < 2; ++g) {
    const double male = g == 1 ? 1.4 : 1.0;
    for (int a = 0; a <= kMortalityMaxAge; ++a) {
      double q = a == 0 ? 0.014 : 0.0002 * std::exp(0.088 * a);
      q = std::min(1.0, q * male);
      in.tables.mortality[g][a] = q;
    }
    in.tables.mortality[g][kMortalityMaxAge] = 1.0;
  }
  in.tables.marriage_rate = 0.003;
  for (int d = 0; d < 10; ++d) in.tables.car_by_decile[d] = 0.05 + 0.75 * d / 9.0;

  in.tables.estimates_start_year = 2010;
  in.tables.population_estimates.resize(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    const double growth = m == 0 ? 0.011 : 0.018;
    for (int y = 0; y <= 10; ++y) {
      in.tables.population_estimates[m].push_back(real_pop * muni_share[m] * std::pow(1.0 + growth, y));
    }
  }
  validate_inputs(in);
  return in;
}

void validate_inputs(const CityInputs& in) {
  const std::size_t nm = in.tables.n_municipalities();
  if (nm == 0) throw ConfigError("inputs: no municipalities");
  if (in.tables.pyramid.size() != nm) throw ConfigError("inputs: pyramid count differs from municipalities");
  std::vector<double> weight(nm, 0.0);
  std::vector<int> regions(nm, 0);
  for (const auto& r : in.regions) {
    if (r.municipality_id >= nm) throw ConfigError("inputs: region with unknown municipality");
    weight[r.municipality_id] += r.population_weight;
    ++regions[r.municipality_id];
    double prev = 0.0;
    for (double c : r.qualification_cdf) {
      if (c < prev || c > 1.0 + 1e-12) throw ConfigError("inputs: qualification CDF not monotone");
      prev = c;
    }
    if (std::abs(prev - 1.0) > 1e-9) throw ConfigError("inputs: qualification CDF must end at 1");
    if (r.avg_household_size < 1.0) throw ConfigError("inputs: household size below 1");
    if (r.initial_qli <= 0.0 || r.initial_qli > 1.0) throw ConfigError("inputs: initial QLI outside (0, 1]");
    if (r.license_price <= 0.0 || r.license_stock < 0 || r.firm_count < 0.0) {
      throw ConfigError("inputs: negative firm, license or price figure");
    }
  }
  for (std::size_t m = 0; m < nm; ++m) {
    if (regions[m] == 0) throw ConfigError("inputs: municipality without regions");
    if (std::abs(weight[m] - 1.0) > 1e-9) throw ConfigError("inputs: region weights must sum to 1");
  }
  auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (double v : in.tables.fertility) {
    if (!prob(v)) throw ConfigError("inputs: fertility outside [0, 1]");
  }
  for (const auto& g : in.tables.mortality) {
    for (double v : g) {
      if (!prob(v)) throw ConfigError("inputs: mortality outside [0, 1]");
    }
    if (g[kMortalityMaxAge] != 1.0) throw ConfigError("inputs: mortality at the maximum age must be 1");
  }
  double prev = 0.0;
  for (double v : in.tables.car_by_decile) {
    if (!prob(v) || v < prev) throw ConfigError("inputs: car ownership must be non-decreasing probabilities");
    prev = v;
  }
  if (!prob(in.tables.marriage_rate)) throw ConfigError("inputs: marriage rate outside [0, 1]");
}

// ---------------------------------------------------------------------------
// CSV round trip

namespace {

std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double num(const std::vector<std::string>& row, std::size_t i, const std::filesystem::path& path) {
  if (i >= row.size()) throw ConfigError(path.filename().string() + ": missing column");
  try {
    return std::stod(row[i]);
  } catch (const std::exception&) {
    throw ConfigError(path.filename().string() + ": bad number '" + row[i] + "'");
  }
}

}  // namespace

void write_inputs(const CityInputs& in, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  {
    auto out = create(dir / "regions.csv");
    out << "region_id,municipality_id,x_km,y_km,population_weight,q1,q2,q3,q4,q5,"
           "avg_household_size,firm_count,license_stock,license_price,initial_qli\n";
    for (const auto& r : in.regions) {
      out << r.region_id << ',' << r.municipality_id << ',' << r.x_km << ',' << r.y_km << ','
          << r.population_weight;
      for (double c : r.qualification_cdf) out << ',' << c;
      out << ',' << r.avg_household_size << ',' << r.firm_count << ',' << r.license_stock << ','
          << r.license_price << ',' << r.initial_qli << '\n';
    }
  }
  {
    auto out = create(dir / "pyramid.csv");
    out << "municipality_id,age,female,male\n";
    for (std::size_t m = 0; m < in.tables.pyramid.size(); ++m) {
      for (std::size_t a = 0; a < in.tables.pyramid[m].size(); ++a) {
        out << m << ',' << a << ',' << in.tables.pyramid[m][a][0] << ',' << in.tables.pyramid[m][a][1] << '\n';
      }
    }
  }
  {
    auto out = create(dir / "fertility.csv");
    out << "age,probability\n";
    for (int a = kFertilityMinAge; a <= kFertilityMaxAge; ++a) out << a << ',' << in.tables.fertility[a] << '\n';
  }
  {
    auto out = create(dir / "mortality.csv");
    out << "age,female,male\n";
    for (int a = 0; a <= kMortalityMaxAge; ++a) {
      out << a << ',' << in.tables.mortality[0][a] << ',' << in.tables.mortality[1][a] << '\n';
    }
  }
  {
    auto out = create(dir / "car_ownership.csv");
    out << "decile,probability\n";
    for (int d = 0; d < 10; ++d) out << d + 1 << ',' << in.tables.car_by_decile[d] << '\n';
  }
  {
    auto out = create(dir / "municipalities.csv");
    out << "municipality_id,hdi\n";
    for (std::size_t m = 0; m < in.tables.hdi.size(); ++m) out << m << ',' << in.tables.hdi[m] << '\n';
  }
  {
    auto out = create(dir / "population_estimates.csv");
    out << "municipality_id,year,population\n";
    for (std::size_t m = 0; m < in.tables.population_estimates.size(); ++m) {
      for (std::size_t y = 0; y < in.tables.population_estimates[m].size(); ++y) {
        out << m << ',' << in.tables.estimates_start_year + static_cast<int>(y) << ','
            << in.tables.population_estimates[m][y] << '\n';
      }
    }
  }
  {
    auto out = create(dir / "general.csv");
    out << "key,value\n";
    out << "marriage_rate," << in.tables.marriage_rate << '\n';
  }
}

CityInputs read_inputs(const std::filesystem::path& dir) {
  CityInputs in;
  {
    const auto path = dir / "municipalities.csv";
    for (const auto& row : read_csv(path)) {
      const auto m = static_cast<std::size_t>(num(row, 0, path));
      if (in.tables.hdi.size() <= m) in.tables.hdi.resize(m + 1);
      in.tables.hdi[m] = num(row, 1, path);
    }
  }
  const std::size_t nm = in.tables.hdi.size();
  {
    const auto path = dir / "regions.csv";
    for (const auto& row : read_csv(path)) {
      RegionSpec r;
      r.region_id = static_cast<std::uint32_t>(num(row, 0, path));
      r.municipality_id = static_cast<std::uint32_t>(num(row, 1, path));
      r.x_km = num(row, 2, path);
      r.y_km = num(row, 3, path);
      r.population_weight = num(row, 4, path);
      for (int l = 0; l < kQualificationLevels; ++l) r.qualification_cdf[l] = num(row, 5 + l, path);
      r.avg_household_size = num(row, 10, path);
      r.firm_count = num(row, 11, path);
      r.license_stock = static_cast<int>(num(row, 12, path));
      r.license_price = num(row, 13, path);
      r.initial_qli = num(row, 14, path);
      in.regions.push_back(r);
    }
    std::sort(in.regions.begin(), in.regions.end(),
              [](const RegionSpec& a, const RegionSpec& b) { return a.region_id < b.region_id; });
    for (std::size_t i = 0; i < in.regions.size(); ++i) {
      if (in.regions[i].region_id != i) throw ConfigError("regions.csv: region ids must be 0..n-1");
    }
  }
  {
    const auto path = dir / "pyramid.csv";
    in.tables.pyramid.assign(nm, std::vector<std::array<double, 2>>(kPyramidMaxAge + 1, {0.0, 0.0}));
    for (const auto& row : read_csv(path)) {
      const auto m = static_cast<std::size_t>(num(row, 0, path));
      const auto a = static_cast<std::size_t>(num(row, 1, path));
      if (m >= nm || a > static_cast<std::size_t>(kPyramidMaxAge)) throw ConfigError("pyramid.csv: index out of range");
      in.tables.pyramid[m][a] = {num(row, 2, path), num(row, 3, path)};
    }
  }
  {
    const auto path = dir / "fertility.csv";
    for (const auto& row : read_csv(path)) {
      const int a = static_cast<int>(num(row, 0, path));
      if (a < kFertilityMinAge || a > kFertilityMaxAge) throw ConfigError("fertility.csv: age outside 15-49");
      in.tables.fertility[a] = num(row, 1, path);
    }
  }
  {
    const auto path = dir / "mortality.csv";
    for (const auto& row : read_csv(path)) {
      const int a = static_cast<int>(num(row, 0, path));
      if (a < 0 || a > kMortalityMaxAge) throw ConfigError("mortality.csv: age outside 0-110");
      in.tables.mortality[0][a] = num(row, 1, path);
      in.tables.mortality[1][a] = num(row, 2, path);
    }
  }
  {
    const auto path = dir / "car_ownership.csv";
    for (const auto& row : read_csv(path)) {
      const int d = static_cast<int>(num(row, 0, path));
      if (d < 1 || d > 10) throw ConfigError("car_ownership.csv: decile outside 1-10");
      in.tables.car_by_decile[d - 1] = num(row, 1, path);
    }
  }
  {
    const auto path = dir / "population_estimates.csv";
    in.tables.population_estimates.assign(nm, {});
    int first = 0;
    bool seen = false;
    for (const auto& row : read_csv(path)) {
      const auto m = static_cast<std::size_t>(num(row, 0, path));
      const int year = static_cast<int>(num(row, 1, path));
      if (m >= nm) throw ConfigError("population_estimates.csv: unknown municipality");
      if (!seen || year < first) first = year;
      seen = true;
      in.tables.population_estimates[m].push_back(num(row, 2, path));
    }
    in.tables.estimates_start_year = seen ? first : 2010;
  }
  {
    const auto path = dir / "general.csv";
    for (const auto& row : read_csv(path)) {
      if (!row.empty() && row[0] == "marriage_rate") in.tables.marriage_rate = num(row, 1, path);
    }
  }
  validate_inputs(in);
  return in;
}

// ---------------------------------------------------------------------------
// Instantiation

State instantiate_city(const CityInputs& in, const SimParams& params, const CityConfig& city,
                       std::uint64_t seed, double baseline_rate) {
  validate_inputs(in);
  if (params.pop <= 0.0 || params.pop > 0.05) throw ConfigError("pop must be in (0, 0.05]");
  if (params.vacancy_share < 0.0 || params.vacancy_share >= 0.5) {
    throw ConfigError("vacancy_share must be in [0, 0.5)");
  }

  State s;
  s.universe = mix_seed(seed, hash_name("universe"));
  s.rng = RngStreams(seed);
  s.tables = in.tables;
  s.baseline_rate = baseline_rate;
  s.construction_share = city.construction_share;
  Rng rng(mix_seed(seed, hash_name("instantiate")));
  const std::size_t nm = in.tables.n_municipalities();

  for (const auto& spec : in.regions) {
    Region r;
    r.id = spec.region_id;
    r.municipality = spec.municipality_id;
    r.location = {spec.x_km, spec.y_km};
    r.qli = spec.initial_qli;
    r.license_price = spec.license_price;
    r.licenses = static_cast<int>(scaled_count(spec.license_stock, params.pop));
    r.license_rate = static_cast<double>(r.licenses) / 120.0;
    r.avg_household_size = spec.avg_household_size;
    r.qualification_cdf = spec.qualification_cdf;
    r.population_weight = spec.population_weight;
    s.regions.push_back(r);
  }
  s.municipalities.resize(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    s.municipalities[m].id = static_cast<Id>(m);
    s.municipalities[m].hdi = in.tables.hdi[m];
  }
  for (const auto& r : s.regions) s.municipalities[r.municipality].regions.push_back(r.id);
  s.flows.gdp_by_municipality.assign(nm, Money{});

  // Persons and households, municipality by municipality.
  for (std::size_t m = 0; m < nm; ++m) {
    const auto& pyr = in.tables.pyramid[m];
    std::vector<double> cells;
    double real = 0.0;
    for (const auto& a : pyr) {
      cells.push_back(a[0]);
      cells.push_back(a[1]);
      real += a[0] + a[1];
    }
    const std::int64_t n = scaled_count(real, params.pop);
    const auto& regions = s.municipalities[m].regions;
    std::vector<double> rweights;
    double avg_size = 0.0;
    for (Id r : regions) {
      rweights.push_back(s.regions[r].population_weight);
      avg_size += s.regions[r].population_weight * s.regions[r].avg_household_size;
    }

    std::vector<Id> adults;
    std::vector<Id> minors;
    std::vector<Id> region_of;  // by person id - base
    const auto base = static_cast<Id>(s.persons.size());
    for (std::int64_t i = 0; i < n; ++i) {
      const std::size_t cell = rng.weighted(cells);
      Person p;
      p.age_months = static_cast<int>(cell / 2) * 12;
      p.gender = cell % 2 == 0 ? Gender::female : Gender::male;
      p.birthday_month = rng.uniform_int(0, 11);
      const Id region = regions[rng.weighted(rweights)];
      p.qualification = draw_qualification(s.regions[region], rng);
      const Id id = s.add_person(p);
      region_of.push_back(region);
      (p.age_years() >= params.adult_age ? adults : minors).push_back(id);
    }
    if (adults.empty()) {
      throw GenerationError("municipality " + std::to_string(m) + " has no households");
    }

    std::int64_t nh = std::llround(static_cast<double>(n) / std::max(avg_size, 1.0));
    nh = std::clamp<std::int64_t>(nh, 1, static_cast<std::int64_t>(adults.size()));
    rng.shuffle(adults);
    std::vector<Id> hids;
    for (std::int64_t k = 0; k < nh; ++k) {
      Household h;
      const Id head = adults[static_cast<std::size_t>(k)];
      h.members.push_back(head);
      const Id hid = s.add_household(h);
      s.persons[head].household = hid;
      s.persons[head].origin_household = hid;
      hids.push_back(hid);
    }
    std::vector<Id> rest(adults.begin() + nh, adults.end());
    rest.insert(rest.end(), minors.begin(), minors.end());
    for (Id pid : rest) {
      const Id hid = hids[rng.index(hids.size())];
      s.households[hid].members.push_back(pid);
      s.persons[pid].household = hid;
      s.persons[pid].origin_household = hid;
    }

    // Each household lives in the region of its head; spare dwellings follow
    // the household distribution.
    const std::int64_t nd = dwellings_for(nh, params.vacancy_share);
    std::vector<double> dweights(s.regions.size(), 0.0);
    for (Id hid : hids) {
      const Id head = s.households[hid].members.front();
      const Id region = region_of[head - base];
      Dwelling d;
      d.region = region;
      d.size = rng.uniform(20.0, 120.0);
      d.quality = rng.uniform_int(1, 4);
      d.occupant = hid;
      const Id did = s.add_dwelling(d);
      s.households[hid].dwelling = did;
      dweights[region] += 1.0;
    }
    for (std::int64_t k = nh; k < nd; ++k) {
      Dwelling d;
      d.region = static_cast<Id>(rng.weighted(dweights));
      d.size = rng.uniform(20.0, 120.0);
      d.quality = rng.uniform_int(1, 4);
      s.add_dwelling(d);
    }
  }
  for (std::size_t m = 0; m < nm; ++m) {
    bool any = false;
    for (const auto& h : s.households) {
      if (s.household_municipality(h) == m) any = true;
    }
    if (!any) throw GenerationError("municipality " + std::to_string(m) + " has no households");
  }

  // Firms.
  std::size_t consumer = 0, builders = 0;
  for (const auto& spec : in.regions) {
    const std::int64_t nf = scaled_count(spec.firm_count, params.pop);
    for (std::int64_t k = 0; k < nf; ++k) {
      Firm f;
      f.region = spec.region_id;
      f.kind = rng.bernoulli(city.construction_share) ? FirmKind::construction : FirmKind::consumer;
      (f.kind == FirmKind::consumer ? consumer : builders) += 1;
      s.add_firm(f);
    }
  }
  if (consumer == 0) {
    Firm f;
    f.region = 0;
    s.add_firm(f);
  }
  if (builders == 0) {
    Firm f;
    f.region = 0;
    f.kind = FirmKind::construction;
    s.add_firm(f);
  }

  // Initial employment with wages following the q^alpha share rule.
  std::vector<Id> workers;
  for (const auto& p : s.persons) {
    const int age = p.age_years();
    if (age >= params.labor_age_min && age <= params.labor_age_max && rng.bernoulli(city.initial_employment)) {
      workers.push_back(p.id);
    }
  }
  double mean_qa = 0.0;
  for (Id w : workers) mean_qa += std::pow(static_cast<double>(s.persons[w].qualification), params.alpha);
  if (!workers.empty()) mean_qa /= static_cast<double>(workers.size());
  for (Id w : workers) {
    Person& p = s.persons[w];
    const Id firm = static_cast<Id>(rng.index(s.firms.size()));
    p.employer = firm;
    s.firms[firm].employees.push_back(w);
    const double wage = city.initial_wage * std::pow(static_cast<double>(p.qualification), params.alpha) / mean_qa;
    p.wage = Money::from_units(wage);
  }
  assign_cars(s, rng);

  // Household income, wealth and ownership.
  for (auto& h : s.households) {
    double income = 0.0;
    for (Id m : h.members) income += s.persons[m].wage.units();
    h.income_mean = income;
    h.income_months = 1;
  }
  refresh_income_index(s);
  refresh_dwelling_values(s, params);

  std::vector<Id> order;
  for (const auto& h : s.households) order.push_back(h.id);
  rng.shuffle(order);
  const auto renters = static_cast<std::size_t>(std::llround(city.renter_share * static_cast<double>(order.size())));
  std::vector<Id> owners(order.begin() + static_cast<std::ptrdiff_t>(renters), order.end());
  if (owners.empty()) owners = order;
  std::vector<bool> owner_flag(s.households.size(), false);
  for (Id hid : owners) owner_flag[hid] = true;
  for (Id hid : owners) {
    Household& h = s.households[hid];
    s.dwellings[h.dwelling].owner_household = hid;
    h.owned.push_back(h.dwelling);
  }
  std::vector<double> lottery;
  for (Id hid : owners) {
    const double y = std::max(s.households[hid].income_mean, 0.1);
    lottery.push_back(y * y);
  }
  for (auto& d : s.dwellings) {
    if (d.owner_household != kNone) continue;
    const Id hid = owners[rng.weighted(lottery)];
    d.owner_household = hid;
    s.households[hid].owned.push_back(d.id);
  }
  for (auto& h : s.households) {
    if (owner_flag[h.id]) continue;
    h.renting = true;
    h.rent = rent_for(s.dwellings[h.dwelling], params);
  }

  // Money: deposits, reserves, member cash, bank capital and firm cash, all
  // injected from the external sector.
  for (auto& h : s.households) {
    const double income = std::max(h.income_mean, 0.2);
    const Money savings = Money::from_units(income * city.savings_months * rng.lognormal(-0.5, 1.0));
    const Money reserve = Money::from_units(income * rng.uniform(1.0, 3.0));
    transfer(s.external, s.bank.cash, savings);
    h.savings = savings;
    transfer(s.external, h.reserve, reserve);
    for (Id m : h.members) {
      Person& p = s.persons[m];
      transfer(s.external, p.cash, p.wage);
    }
  }
  transfer(s.external, s.bank.cash, s.deposits().scaled(city.bank_capital_share));

  for (auto& h : s.households) refresh_permanent_income(s, h);
  double demand = 0.0;
  for (const auto& h : s.households) demand += std::max(h.permanent_income, 0.0);
  double supply = 0.0;
  for (const auto& f : s.firms) {
    if (f.kind == FirmKind::consumer) supply += firm_output(s, f, params);
  }
  const double price = supply > 0.0 ? demand / supply : 1.0;
  const double unemployment0 = 1.0 - city.initial_employment;
  for (auto& f : s.firms) {
    Money bill;
    for (Id e : f.employees) bill += s.persons[e].wage;
    const Money gross = Money::from_units(bill.units() / (1.0 - params.tax_labor));
    f.wage_pool = gross;
    f.last_revenue = Money::from_units(gross.units() / (1.0 - unemployment0));
    f.price = price;
    if (f.kind == FirmKind::consumer) {
      f.inventory = firm_output(s, f, params);
      transfer(s.external, f.cash, gross.scaled(city.firm_cash_months));
    } else {
      transfer(s.external, f.cash, Money::from_units(city.construction_cash));
    }
  }
  s.last_prices.clear();
  for (const auto& f : s.firms) s.last_prices.push_back(f.price);
  s.unemployment = unemployment0;

  for (auto& h : s.households) {
    h.pi_history[0] = h.permanent_income;
    h.pi_count = 1;
  }
  const auto pop = s.population_by_municipality();
  for (std::size_t m = 0; m < nm; ++m) s.municipalities[m].pop_prev = pop[m];
  return s;
}

}  // namespace polisim
