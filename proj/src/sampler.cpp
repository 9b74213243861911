#include "crgg/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crgg {

namespace {

constexpr double kCellTol = 1e-13;

struct CellPath {
  std::size_t index;  // level-K cell, binary digits of the descent
  bool lower;         // first digit 0, i.e. the point lies in [0, phi]
};

CellPath classify(double x, double phi, int levels) {
  if (!std::isfinite(x) || x < -kCellTol || x > 1.0 + kCellTol) {
    throw std::domain_error("split_stats: point outside [0, 1]: " + std::to_string(x));
  }
  const double one_minus_phi = 1.0 - phi;
  double lo = 0.0, len = 1.0;
  std::size_t idx = 0;
  for (int level = 1; level <= levels; ++level) {
    const double left_end = lo + phi * len;
    const double right_begin = lo + one_minus_phi * len;
    if (x <= left_end + kCellTol) {
      idx <<= 1;
    } else if (x >= right_begin - kCellTol) {
      idx = (idx << 1) | 1u;
      lo = right_begin;
    } else {
      throw std::logic_error("split_stats: point " + std::to_string(x) +
                             " lies in a deleted gap at level " + std::to_string(level) +
                             "; sampler output is inconsistent");
    }
    len *= phi;
  }
  return {idx, (idx >> (levels - 1)) == 0};
}

}  // namespace

double point_from_bits(const CantorParams& params, std::span<const std::uint64_t> words) {
  const std::size_t need = static_cast<std::size_t>((params.depth + 63) / 64);
  if (words.size() < need) {
    throw std::invalid_argument("point_from_bits: need " + std::to_string(need) + " words, got " +
                                std::to_string(words.size()));
  }
  const double phi = params.phi.to_double();
  const double one_minus_phi = 1.0 - phi;
  double x = 0.0;
  for (int j = params.depth - 1; j >= 0; --j) {
    const bool z = (words[j >> 6] >> (j & 63)) & 1u;
    x = (z ? one_minus_phi : 0.0) + phi * x;
  }
  return x;
}

SampleBatch sample_batch(const CantorParams& params, std::size_t n, std::uint64_t seed,
                         std::uint64_t replicate_id) {
  if (n == 0) throw std::domain_error("sample_batch: n must be >= 1");
  SampleBatch batch{params, seed, replicate_id, {}};
  batch.points.resize(n);
  const SamplerCore core(params, seed, replicate_id);
  for (std::size_t i = 0; i < n; ++i) batch.points[i] = core.point(i);
  return batch;
}

SplitStats split_stats(const SampleBatch& batch) {
  return split_stats(batch.points, batch.params.phi.to_double(), batch.params.occupancy_depth);
}

SplitStats split_stats(std::span<const double> points, double phi, int levels) {
  if (points.empty()) throw std::domain_error("split_stats: batch must be nonempty");
  if (levels < 1 || levels > 26) {
    throw std::runtime_error("split_stats: occupancy depth " + std::to_string(levels) +
                             " outside the supported range [1, 26]");
  }

  SplitStats s;
  s.occupancy.assign(std::size_t{1} << levels, 0);
  s.minimum = points[0];
  s.maximum = points[0];
  for (const double x : points) {
    const CellPath cell = classify(x, phi, levels);
    ++s.occupancy[cell.index];
    s.minimum = std::min(s.minimum, x);
    s.maximum = std::max(s.maximum, x);
    if (cell.lower) {
      ++s.n_lower;
      if (!s.l_max || x > *s.l_max) s.l_max = x;
    } else {
      if (!s.u_min || x < *s.u_min) s.u_min = x;
    }
  }
  s.all_occupied = true;
  for (const std::uint64_t c : s.occupancy) {
    if (c == 0) {
      s.all_occupied = false;
      break;
    }
  }
  return s;
}

}  // namespace crgg
