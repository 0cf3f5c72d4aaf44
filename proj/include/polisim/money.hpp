#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polisim {

// Integer minor units (cents). Every conversion from a real amount rounds
// half-to-even so repeated transfers never create or destroy money.
class Money {
 public:
  static constexpr std::int64_t kMinorPerUnit = 100;

  constexpr Money() = default;

  static constexpr Money from_minor(std::int64_t minor) { return Money(minor); }
  static Money from_units(double units);

  constexpr std::int64_t minor() const { return minor_; }
  double units() const { return static_cast<double>(minor_) / kMinorPerUnit; }

  // this * rate, rounded half-to-even in minor units.
  Money scaled(double rate) const;

  constexpr bool is_zero() const { return minor_ == 0; }
  constexpr bool positive() const { return minor_ > 0; }

  constexpr Money& operator+=(Money o) { minor_ += o.minor_; return *this; }
  constexpr Money& operator-=(Money o) { minor_ -= o.minor_; return *this; }
  friend constexpr Money operator+(Money a, Money b) { return Money(a.minor_ + b.minor_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.minor_ - b.minor_); }
  friend constexpr Money operator-(Money a) { return Money(-a.minor_); }
  friend constexpr auto operator<=>(Money, Money) = default;

  std::string to_string() const;

 private:
  constexpr explicit Money(std::int64_t minor) : minor_(minor) {}
  std::int64_t minor_ = 0;
};

inline constexpr Money min(Money a, Money b) { return a < b ? a : b; }
inline constexpr Money max(Money a, Money b) { return a < b ? b : a; }

// Moves `amount` between two balances. The only primitive that touches
// two accounts at once.
inline void transfer(Money& from, Money& to, Money amount) {
  from -= amount;
  to += amount;
}

// Splits `total` proportionally to `weights` with the largest-remainder rule,
// so the parts always sum to `total` exactly. Zero weights receive nothing;
// all-zero weights split evenly.
std::vector<Money> apportion(Money total, std::span<const double> weights);

}  // namespace polisim
