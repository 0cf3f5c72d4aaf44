#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace polisim {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t hash_name(std::string_view name);

// mt19937_64 output is fixed by the standard; the distributions below are
// written out by hand because libstdc++/libc++ distributions differ.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                         // [0, 1)
  double uniform(double lo, double hi);     // [lo, hi)
  bool bernoulli(double p);                 // p clamped to [0, 1]
  std::size_t index(std::size_t n);         // uniform in [0, n), n > 0
  int uniform_int(int lo, int hi);          // inclusive
  double normal();
  double lognormal(double mu, double sigma);
  std::size_t weighted(std::span<const double> weights);  // index by weight

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

  bool operator==(const Rng& o) const { return engine_ == o.engine_; }

  friend std::ostream& operator<<(std::ostream& os, const Rng& r) { return os << r.engine_; }
  friend std::istream& operator>>(std::istream& is, Rng& r) { return is >> r.engine_; }

 private:
  std::mt19937_64 engine_;
};

enum class Stream : std::size_t {
  demographics,
  labor,
  goods,
  housing,
  policy,
  firms,
  construction,
  migration,
  count_
};

std::string_view stream_name(Stream s);

// One independent generator per module, each derived from the master seed and
// the stream name, so extra draws in one module leave the others untouched.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t master_seed = 0);

  Rng& operator[](Stream s) { return streams_[static_cast<std::size_t>(s)]; }
  const Rng& operator[](Stream s) const { return streams_[static_cast<std::size_t>(s)]; }
  std::uint64_t master_seed() const { return master_; }

 private:
  std::uint64_t master_;
  std::array<Rng, static_cast<std::size_t>(Stream::count_)> streams_;
};

}  // namespace polisim
