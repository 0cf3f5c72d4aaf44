#include "polisim/money.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace polisim {

Money Money::from_units(double units) {
  // nearbyint honours the default FE_TONEAREST mode: ties go to even.
  return Money(static_cast<std::int64_t>(std::nearbyint(units * kMinorPerUnit)));
}

Money Money::scaled(double rate) const {
  return Money(static_cast<std::int64_t>(std::nearbyint(static_cast<double>(minor_) * rate)));
}

std::string Money::to_string() const {
  char buf[48];
  const std::int64_t a = minor_ < 0 ? -minor_ : minor_;
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", minor_ < 0 ? "-" : "",
                static_cast<long long>(a / kMinorPerUnit),
                static_cast<long long>(a % kMinorPerUnit));
  return buf;
}

std::vector<Money> apportion(Money total, std::span<const double> weights) {
  const std::size_t n = weights.size();
  std::vector<Money> out(n);
  if (n == 0) return out;
  if (total < Money{}) {
    out = apportion(-total, weights);
    for (auto& m : out) m = -m;
    return out;
  }

  double sum = 0.0;
  for (double w : weights) sum += std::max(0.0, w);

  std::vector<double> share(n);
  for (std::size_t i = 0; i < n; ++i) {
    share[i] = sum > 0.0 ? std::max(0.0, weights[i]) / sum : 1.0 / static_cast<double>(n);
  }

  const std::int64_t t = total.minor();
  std::int64_t assigned = 0;
  std::vector<double> rem(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = static_cast<double>(t) * share[i];
    const auto base = std::min<std::int64_t>(t - assigned, static_cast<std::int64_t>(std::floor(exact)));
    out[i] = Money::from_minor(base);
    rem[i] = exact - static_cast<double>(base);
    assigned += base;
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (share[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  std::int64_t left = t - assigned;
  for (std::size_t k = 0; left > 0; k = (k + 1) % order.size()) {
    out[order[k]] += Money::from_minor(1);
    --left;
  }
  return out;
}

}  // namespace polisim
