#include "polisim/ledger.hpp"

#include <algorithm>
#include <cmath>

#include "polisim/error.hpp"
#include "polisim/state.hpp"

namespace polisim {

Money LedgerSnapshot::total() const {
  Money t;
  for (Money b : balances) t += b;
  return t;
}

double LedgerSnapshot::gross_units() const {
  double g = 0.0;
  for (Money b : balances) g += std::abs(b.units());
  return g;
}

LedgerSnapshot take_snapshot(const State& s) {
  LedgerSnapshot snap;
  snap.universe = s.universe;
  for (const auto& p : s.persons) {
    if (!p.alive) continue;
    snap[AccountKind::persons] += p.cash;
    ++snap.actors[static_cast<std::size_t>(AccountKind::persons)];
  }
  for (const auto& h : s.households) {
    if (!h.active) continue;
    snap[AccountKind::households] += h.reserve;
    ++snap.actors[static_cast<std::size_t>(AccountKind::households)];
  }
  for (const auto& f : s.firms) {
    snap[AccountKind::firms] += f.cash;
  }
  snap.actors[static_cast<std::size_t>(AccountKind::firms)] = s.firms.size();
  snap[AccountKind::bank] = s.bank.cash;
  snap.actors[static_cast<std::size_t>(AccountKind::bank)] = 1;
  for (const auto& m : s.municipalities) {
    snap[AccountKind::municipalities] += m.treasury + m.voucher_escrow;
  }
  snap.actors[static_cast<std::size_t>(AccountKind::municipalities)] = s.municipalities.size();
  snap[AccountKind::external] = s.external;
  snap.actors[static_cast<std::size_t>(AccountKind::external)] = 1;
  return snap;
}

ConservationReport check_conservation(const LedgerSnapshot& before, const LedgerSnapshot& after) {
  if (before.universe != after.universe) {
    throw StructuralError("ledger snapshots belong to different runs");
  }
  for (std::size_t k : {static_cast<std::size_t>(AccountKind::bank),
                        static_cast<std::size_t>(AccountKind::external),
                        static_cast<std::size_t>(AccountKind::municipalities)}) {
    if (before.actors[k] != after.actors[k]) {
      throw StructuralError("ledger snapshots cover different fixed actor sets");
    }
  }
  ConservationReport r;
  r.drift = after.total() - before.total();
  const double scale = std::max({1.0, before.gross_units(), after.gross_units()});
  r.relative = std::abs(r.drift.units()) / scale;
  r.violated = r.relative > kConservationTolerance;
  return r;
}

}  // namespace polisim
