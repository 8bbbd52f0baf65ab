#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace he3sq {

/// Reproducible N(0,1) source.
///
/// Uniforms come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard, mapped to (0,1) from the top 53 bits. Normals use the
/// Marsaglia polar method implemented here, because std::normal_distribution
/// is implementation-defined and would break cross-platform replay.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);

  double next();
  /// Wiener increment with variance dt.
  double increment(double dt) { return std::sqrt(dt) * next(); }

  std::uint64_t seed() const { return seed_; }

 private:
  double uniform();

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive child seeds from a parent seed.
std::uint64_t mix_seed(std::uint64_t x);

/// k-th child of a base seed, mix(mix(base) + k). Mixing the base first keeps the
/// children of nearby base seeds apart (base + k alone makes base and base + 1 overlap).
std::uint64_t child_seed(std::uint64_t base, std::uint64_t k);

/// Seed of the metastable-decoherence stream paired with an exchange seed.
std::uint64_t decoherence_seed_for(std::uint64_t exchange_seed);

/// The increment sources of a single three-mode trajectory.
struct TrajectoryStreams {
  GaussianStream homodyne;
  GaussianStream exchange;
  std::optional<GaussianStream> decoherence;

  TrajectoryStreams(std::uint64_t homodyne_seed, std::uint64_t exchange_seed,
                    bool with_decoherence);
};

/// Seed sets for an ensemble: one homodyne record, several exchange histories.
struct NoiseSeeds {
  std::uint64_t homodyne = 1;
  std::vector<std::uint64_t> exchange;
};

}  // namespace he3sq
