#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crgg/cantor_model.hpp"
#include "crgg/rational.hpp"

namespace crgg {

enum class Target { convergence, l1_rate, identity, escape_probability, occupancy };

inline constexpr Target kAllTargets[] = {Target::convergence, Target::l1_rate, Target::identity,
                                         Target::escape_probability, Target::occupancy};

std::string_view target_name(Target t);
std::optional<Target> target_from_name(std::string_view name);

struct ExperimentConfig {
  Rational phi{1, 3};
  int depth = 0;                 // 0 selects default_depth(phi)
  std::vector<long> n_grid;      // empty selects the per-target default grid
  long replicates = 0;           // 0 selects the per-target default
  std::uint64_t master_seed = 1;
  std::vector<Target> targets;   // empty selects all targets
  int exact_n_max = 2048;        // ceiling for exact-sequence references
};

/// One CSV record. Compound statistics are encoded in the target name
/// ("convergence.mean", "l1_rate.slope", ...); the slope row uses n = 0.
struct ResultRow {
  std::string target;
  long n = 0;
  double estimate = 0.0;
  double stderr_value = 0.0;
  std::optional<double> reference;
  std::optional<double> z;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  double wall_seconds = 0.0;
  unsigned threads = 1;
};

/// Per-target default grids and replicate counts (used when the config leaves them 0/empty).
std::vector<long> default_grid(Target t);
long default_replicates(Target t);

ExperimentResult run_convergence(const ExperimentConfig& cfg, unsigned threads = 1);
ExperimentResult run_l1_rate(const ExperimentConfig& cfg, unsigned threads = 1);
ExperimentResult verify_identity(const ExperimentConfig& cfg, unsigned threads = 1);
ExperimentResult estimate_escape_probability(const ExperimentConfig& cfg, unsigned threads = 1);
ExperimentResult occupancy_test(const ExperimentConfig& cfg, unsigned threads = 1);

/// Runs cfg.targets in declaration order, sharing one exact-sequence computation.
ExperimentResult run_all(const ExperimentConfig& cfg, unsigned threads = 1);

/// P(some level-K cell is empty after n points): inclusion-exclusion over the
/// 2^K equiprobable cells. Exact rational evaluation at desk scale
/// (2^K <= 256 and n <= 4096), log-space long double beyond.
double escape_probability_exact(int occupancy_depth, long n);

/// The matching union bound 2^K (1 - 2^-K)^n.
double escape_union_bound(int occupancy_depth, long n);

}  // namespace crgg
