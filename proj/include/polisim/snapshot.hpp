#pragma once

#include <cstdint>
#include <filesystem>

#include "json.hpp"
#include "polisim/state.hpp"

namespace polisim {

inline constexpr int kSnapshotVersion = 1;

// Full state, RNG streams included, so a loaded snapshot resumes bit-identically.
nlohmann::json save_snapshot(const State& s);
State load_snapshot(const nlohmann::json& j);  // throws ConfigError on version mismatch

void write_snapshot(const State& s, const std::filesystem::path& path);
State read_snapshot(const std::filesystem::path& path);

// FNV-1a over the serialized state.
std::uint64_t state_digest(const State& s);

}  // namespace polisim
