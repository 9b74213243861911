#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crgg/cantor_model.hpp"
#include "crgg/rng.hpp"

namespace crgg {

/// Counter-based point generator: point i of the stream identified by
/// (seed, replicate_id) is a pure function of those values and i.
class SamplerCore {
 public:
  SamplerCore(const CantorParams& params, std::uint64_t seed, std::uint64_t replicate_id)
      : phi_(params.phi.to_double()),
        one_minus_phi_(1.0 - phi_),
        depth_(params.depth),
        blocks_((params.depth + 63) / 64),
        base_(rng::derive(seed, replicate_id)) {}

  /// Truncated series evaluated by Horner from the deepest digit.
  double point(std::uint64_t i) const {
    double x = 0.0;
    std::uint64_t word = 0;
    int have = -1;  // block index currently loaded
    for (int j = depth_ - 1; j >= 0; --j) {
      const int b = j >> 6;
      if (b != have) {
        word = rng::at(base_, i * blocks_ + static_cast<std::uint64_t>(b));
        have = b;
      }
      const bool z = (word >> (j & 63)) & 1u;
      x = (z ? one_minus_phi_ : 0.0) + phi_ * x;
    }
    return x;
  }

  double phi() const { return phi_; }

 private:
  double phi_, one_minus_phi_;
  int depth_, blocks_;
  std::uint64_t base_;
};

struct SampleBatch {
  CantorParams params;
  std::uint64_t seed = 0;
  std::uint64_t replicate_id = 0;
  std::vector<double> points;
};

struct SplitStats {
  std::size_t n_lower = 0;          // points in the left third [0, phi]
  std::optional<double> l_max;      // largest point in [0, phi]
  std::optional<double> u_min;      // smallest point in [1 - phi, 1]
  double minimum = 0.0;
  double maximum = 0.0;
  std::vector<std::uint64_t> occupancy;  // 2^occupancy_depth level-K cell counts
  bool all_occupied = false;
};

/// One digit of the series from an explicit word buffer; the test seam for point().
double point_from_bits(const CantorParams& params, std::span<const std::uint64_t> words);

/// n points of replicate `replicate_id` under master seed `seed`. Order-independent:
/// the stream is fixed by the identifiers alone.
SampleBatch sample_batch(const CantorParams& params, std::size_t n, std::uint64_t seed,
                         std::uint64_t replicate_id);

/// Geometry of one batch: half counts, extreme points per half, level-K occupancy.
/// Rejects points that land inside a deleted gap of level <= occupancy_depth.
SplitStats split_stats(const SampleBatch& batch);

/// Same statistics over a raw point span; the allocation-light path for replicate loops.
SplitStats split_stats(std::span<const double> points, double phi, int occupancy_levels);

}  // namespace crgg
