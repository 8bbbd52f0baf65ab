#include "he3sq/noise.hpp"

#include <cmath>

namespace he3sq {

GaussianStream::GaussianStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double GaussianStream::uniform() {
  // (k + 0.5) / 2^53 lies strictly inside (0,1)
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t base, std::uint64_t k) { return mix_seed(mix_seed(base) + k); }

std::uint64_t decoherence_seed_for(std::uint64_t exchange_seed) {
  return mix_seed(exchange_seed ^ 0xd1b54a32d192ed03ULL);
}

TrajectoryStreams::TrajectoryStreams(std::uint64_t homodyne_seed, std::uint64_t exchange_seed,
                                     bool with_decoherence)
    : homodyne(homodyne_seed), exchange(exchange_seed) {
  if (with_decoherence) decoherence.emplace(decoherence_seed_for(exchange_seed));
}

}  // namespace he3sq
