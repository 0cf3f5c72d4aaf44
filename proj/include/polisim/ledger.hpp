#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "polisim/money.hpp"

namespace polisim {

struct State;

enum class AccountKind : std::uint8_t {
  persons,
  households,  // reserve money
  firms,
  bank,
  municipalities,  // treasury plus voucher escrow
  external,
  count_
};

inline constexpr std::size_t kAccountKinds = static_cast<std::size_t>(AccountKind::count_);

// Money held by each class of actor. Bank deposits and loans are claims, not
// money, so they do not appear here.
struct LedgerSnapshot {
  std::uint64_t universe = 0;
  std::array<Money, kAccountKinds> balances{};
  std::array<std::size_t, kAccountKinds> actors{};

  Money total() const;
  double gross_units() const;  // sum of absolute balances
  Money& operator[](AccountKind k) { return balances[static_cast<std::size_t>(k)]; }
  Money operator[](AccountKind k) const { return balances[static_cast<std::size_t>(k)]; }
};

LedgerSnapshot take_snapshot(const State& s);

struct ConservationReport {
  Money drift;
  double relative = 0.0;
  bool violated = false;
};

inline constexpr double kConservationTolerance = 1e-9;

// Throws StructuralError if the snapshots come from different runs.
ConservationReport check_conservation(const LedgerSnapshot& before, const LedgerSnapshot& after);

}  // namespace polisim
