#include "crgg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "crgg/exact_sequence.hpp"
#include "crgg/parallel.hpp"
#include "crgg/sampler.hpp"
#include "crgg/specfun.hpp"
#include "crgg/stats.hpp"

namespace crgg {

std::string_view target_name(Target t) {
  switch (t) {
    case Target::convergence: return "convergence";
    case Target::l1_rate: return "l1_rate";
    case Target::identity: return "identity";
    case Target::escape_probability: return "escape_probability";
    case Target::occupancy: return "occupancy";
  }
  throw std::logic_error("target_name: unknown target");
}

std::optional<Target> target_from_name(std::string_view name) {
  for (const Target t : kAllTargets) {
    if (target_name(t) == name) return t;
  }
  return std::nullopt;
}

std::vector<long> default_grid(Target t) {
  switch (t) {
    case Target::convergence: return {100, 1000, 10000, 100000};
    case Target::l1_rate:
    case Target::identity: return {64, 128, 256, 512, 1024, 2048};
    case Target::escape_probability: return {8, 16, 32, 64};
    case Target::occupancy: return {64, 256, 1024};
  }
  throw std::logic_error("default_grid: unknown target");
}

long default_replicates(Target t) {
  switch (t) {
    case Target::convergence: return 200;
    case Target::l1_rate: return 10000;
    case Target::identity: return 10000;
    case Target::escape_probability: return 100000;
    case Target::occupancy: return 2000;
  }
  throw std::logic_error("default_replicates: unknown target");
}

double escape_union_bound(int occupancy_depth, long n) {
  if (occupancy_depth < 1 || n < 1) {
    throw std::domain_error("escape_union_bound: need occupancy_depth >= 1 and n >= 1");
  }
  const double cells = std::ldexp(1.0, occupancy_depth);
  return cells * std::exp(static_cast<double>(n) * std::log1p(-1.0 / cells));
}

double escape_probability_exact(int occupancy_depth, long n) {
  if (occupancy_depth < 1 || occupancy_depth > 62 || n < 1) {
    throw std::domain_error(
        "escape_probability_exact: need 1 <= occupancy_depth <= 62 and n >= 1");
  }
  const long cells = 1L << occupancy_depth;
  if (n < cells) return 1.0;  // pigeonhole: some cell is always empty
  if (cells <= 256 && n <= 4096) {
    Rational total(0);
    for (long j = 1; j < cells; ++j) {
      const Rational term = Rational(BigInt::binomial(static_cast<unsigned long>(cells),
                                                      static_cast<unsigned long>(j)),
                                     BigInt(1)) *
                            Rational(cells - j, cells).pow(static_cast<unsigned long>(n));
      if (j % 2 == 1) {
        total += term;
      } else {
        total -= term;
      }
    }
    return total.to_double();
  }

  // Log-space fallback. The log-terms are concave in j, so a negative first
  // increment certifies that the whole series decays; the check runs on the
  // logs because the terms themselves underflow long double far earlier.
  // The truncation error of an alternating series with decreasing terms is
  // bounded by the first omitted term, and an underflowed term bounds every
  // term after it.
  const long double m = static_cast<long double>(cells);
  const long double nl = static_cast<long double>(n);
  const bool decays =
      cells == 2 || std::log((m - 1.0L) / 2.0L) + nl * std::log1p(-1.0L / (m - 1.0L)) < 0.0L;
  if (decays) {
    long double sum = 0.0L;
    for (long j = 1; j < cells; ++j) {
      const long double lt = std::lgamma(m + 1.0L) - std::lgamma(static_cast<long double>(j) + 1.0L) -
                             std::lgamma(m - static_cast<long double>(j) + 1.0L) +
                             nl * std::log1p(-static_cast<long double>(j) / m);
      const long double term = std::exp(lt);
      sum += (j % 2 == 1) ? term : -term;
      if (term == 0.0L || term < 1e-24L * std::fabs(sum)) break;
    }
    return std::clamp(static_cast<double>(sum), 0.0, 1.0);
  }

  // Occupancy indicators are negatively associated, so
  // P(all cells occupied) <= (1 - (1 - 1/m)^n)^m; when that certificate pushes
  // the probability within one ulp of 1, return 1 exactly.
  const long double log_q = static_cast<long double>(n) * std::log1p(-1.0L / m);
  const long double log_all_occupied = m * std::log1p(-std::exp(log_q));
  if (log_all_occupied <= -37.5L) return 1.0;  // P(all occupied) < 1e-16

  throw std::runtime_error(
      "escape_probability_exact: no certified evaluation for 2^" + std::to_string(occupancy_depth) +
      " cells at n = " + std::to_string(n) +
      "; the inclusion-exclusion series does not decay and the probability is not provably 1");
}

namespace {

std::uint64_t grid_seed(std::uint64_t master, Target t, long n) {
  const std::uint64_t salt = static_cast<std::uint64_t>(t) + 1;
  return rng::derive(rng::derive(master, salt), static_cast<std::uint64_t>(n));
}

std::optional<double> z_or_none(double est, double ref, double se) {
  if (!(se > 0.0)) return std::nullopt;
  return (est - ref) / se;
}

class Engine {
 public:
  Engine(const ExperimentConfig& cfg, unsigned threads)
      : cfg_(cfg),
        threads_(resolve_threads(threads)),
        params_(make_params(cfg.phi, cfg.depth)) {}

  const ExperimentConfig& cfg() const { return cfg_; }
  const CantorParams& params() const { return params_; }
  unsigned threads() const { return threads_; }

  std::vector<long> grid(Target t) const {
    std::vector<long> g = cfg_.n_grid.empty() ? default_grid(t) : cfg_.n_grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] < 1) throw std::domain_error("n_grid entries must be >= 1");
      if (i > 0 && g[i] <= g[i - 1]) throw std::domain_error("n_grid must be strictly increasing");
    }
    return g;
  }

  long replicates(Target t) const {
    const long r = cfg_.replicates > 0 ? cfg_.replicates : default_replicates(t);
    if (r < 2) throw std::domain_error("replicates must be >= 2");
    return r;
  }

  // exact values up to min(n_needed, exact_n_max); nullptr when capped below 1
  const ExactSequence* exact_up_to(long n_needed) {
    const int cap = static_cast<int>(std::min<long>(n_needed, cfg_.exact_n_max));
    if (cap < 1) return nullptr;
    if (seq_.n_max < cap) seq_ = compute_sequence(cfg_.phi, cap);
    return &seq_;
  }

  ExperimentResult run(Target t);
  ExperimentResult run_all();

 private:
  ExperimentResult convergence();
  ExperimentResult l1_rate();
  ExperimentResult identity();
  ExperimentResult escape();
  ExperimentResult occupancy();

  ExperimentConfig cfg_;
  unsigned threads_;
  CantorParams params_;
  ExactSequence seq_;
};

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

ExperimentResult Engine::convergence() {
  Timer timer;
  ExperimentResult out;
  out.threads = threads_;
  const double phi_d = params_.phi.to_double();
  const double gap_d = params_.gap.to_double();
  const int levels = params_.occupancy_depth;

  for (const long n : grid(Target::convergence)) {
    const long reps = replicates(Target::convergence);
    const std::uint64_t seed = grid_seed(cfg_.master_seed, Target::convergence, n);
    std::vector<double> r_vals(static_cast<std::size_t>(reps));
    struct Tally {
      std::uint64_t en = 0, eq_viol = 0, below_viol = 0, range_viol = 0;
    };
    std::vector<Tally> tallies(threads_);

    parallel_for(static_cast<std::size_t>(reps), threads_,
                 [&](std::size_t begin, std::size_t end, unsigned worker) {
                   std::vector<double> buf(static_cast<std::size_t>(n));
                   Tally& tal = tallies[worker];
                   for (std::size_t rep = begin; rep < end; ++rep) {
                     const SamplerCore core(params_, seed, rep);
                     for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = core.point(i);
                     const SplitStats st = split_stats(buf, phi_d, levels);
                     std::sort(buf.begin(), buf.end());
                     double r = 0.0;
                     for (std::size_t i = 0; i + 1 < buf.size(); ++i) {
                       r = std::max(r, buf[i + 1] - buf[i]);
                     }
                     r_vals[rep] = r;
                     if (st.all_occupied) {
                       ++tal.en;
                       if (st.l_max && st.u_min && r != *st.u_min - *st.l_max) ++tal.eq_viol;
                       if (r < gap_d - 1e-12) ++tal.below_viol;
                     }
                     const bool one_sided = st.n_lower == 0 || st.n_lower == buf.size();
                     if (r < 0.0 || r > 1.0 || (one_sided && r > phi_d + 1e-12)) ++tal.range_viol;
                   }
                 });

    Tally total;
    for (const Tally& t : tallies) {
      total.en += t.en;
      total.eq_viol += t.eq_viol;
      total.below_viol += t.below_viol;
      total.range_viol += t.range_viol;
    }

    const auto ms = stats::mean_stderr(r_vals);
    std::vector<double> sorted(r_vals);
    std::sort(sorted.begin(), sorted.end());
    const double rd = static_cast<double>(reps);

    long big_dev = 0, small_dev = 0;
    for (const double r : r_vals) {
      const double dev = std::abs(r - gap_d);
      if (dev > 0.05) ++big_dev;
      if (dev > 0.01) ++small_dev;
    }
    const auto frac_row = [&](const char* name, long count) {
      const double p = static_cast<double>(count) / rd;
      out.rows.push_back({std::string("convergence.") + name, n, p,
                          std::sqrt(p * (1.0 - p) / rd), std::nullopt, std::nullopt});
    };

    out.rows.push_back({"convergence.mean", n, ms.mean, ms.se, gap_d, z_or_none(ms.mean, gap_d, ms.se)});
    out.rows.push_back({"convergence.median", n, stats::quantile_sorted(sorted, 0.5), 0.0, gap_d, std::nullopt});
    out.rows.push_back({"convergence.q05", n, stats::quantile_sorted(sorted, 0.05), 0.0, std::nullopt, std::nullopt});
    out.rows.push_back({"convergence.q95", n, stats::quantile_sorted(sorted, 0.95), 0.0, std::nullopt, std::nullopt});
    frac_row("frac_dev_gt_0.05", big_dev);
    frac_row("frac_dev_gt_0.01", small_dev);
    const double en_hat = static_cast<double>(total.en) / rd;
    const double en_ref = 1.0 - escape_probability_exact(levels, n);
    const double en_se = std::sqrt(en_hat * (1.0 - en_hat) / rd);
    out.rows.push_back({"convergence.en_frac", n, en_hat, en_se, en_ref, z_or_none(en_hat, en_ref, en_se)});
    out.rows.push_back({"convergence.rn_eq_split_violations", n, static_cast<double>(total.eq_viol), 0.0, 0.0, std::nullopt});
    out.rows.push_back({"convergence.rn_below_gap_violations", n, static_cast<double>(total.below_viol), 0.0, 0.0, std::nullopt});
    out.rows.push_back({"convergence.range_violations", n, static_cast<double>(total.range_viol), 0.0, 0.0, std::nullopt});
  }
  out.wall_seconds = timer.seconds();
  return out;
}

ExperimentResult Engine::l1_rate() {
  Timer timer;
  ExperimentResult out;
  out.threads = threads_;
  const double gap_d = params_.gap.to_double();
  const std::vector<long> ns = grid(Target::l1_rate);
  const ExactSequence* seq = exact_up_to(ns.back());
  const RateConstant rc = rate_constant(params_);

  std::vector<double> log_n, log_mean;
  for (const long n : ns) {
    const long reps = replicates(Target::l1_rate);
    const std::uint64_t seed = grid_seed(cfg_.master_seed, Target::l1_rate, n);
    std::vector<double> devs(static_cast<std::size_t>(reps));

    parallel_for(static_cast<std::size_t>(reps), threads_,
                 [&](std::size_t begin, std::size_t end, unsigned) {
                   std::vector<double> buf(static_cast<std::size_t>(n));
                   for (std::size_t rep = begin; rep < end; ++rep) {
                     const SamplerCore core(params_, seed, rep);
                     for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = core.point(i);
                     std::sort(buf.begin(), buf.end());
                     double r = 0.0;
                     for (std::size_t i = 0; i + 1 < buf.size(); ++i) {
                       r = std::max(r, buf[i + 1] - buf[i]);
                     }
                     devs[rep] = std::abs(r - gap_d);
                   }
                 });

    const auto ms = stats::mean_stderr(devs);
    std::optional<double> exact_ref;
    if (seq && n <= seq->n_max) exact_ref = 2.0 * seq->at(static_cast<int>(n)).to_double();

    out.rows.push_back({"l1_rate.mean_abs_dev", n, ms.mean, ms.se, exact_ref,
                        exact_ref ? z_or_none(ms.mean, *exact_ref, ms.se) : std::nullopt});
    if (exact_ref) {
      out.rows.push_back({"l1_rate.ratio_exact", n, ms.mean / *exact_ref, ms.se / *exact_ref, 1.0,
                          z_or_none(ms.mean, *exact_ref, ms.se)});
    }
    const double asym = 2.0 * rc.value * std::pow(static_cast<double>(n), -rc.exponent);
    out.rows.push_back({"l1_rate.ratio_asymptotic", n, ms.mean / asym, ms.se / asym, 1.0,
                        z_or_none(ms.mean, asym, ms.se)});
    if (ms.mean > 0.0) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_mean.push_back(std::log(ms.mean));
    }
  }

  if (log_n.size() >= 2) {
    const auto fit = stats::fit_line(log_n, log_mean);
    out.rows.push_back({"l1_rate.slope", 0, fit.slope, fit.slope_se, -rc.exponent,
                        z_or_none(fit.slope, -rc.exponent, fit.slope_se)});
  }
  out.wall_seconds = timer.seconds();
  return out;
}

ExperimentResult Engine::identity() {
  Timer timer;
  ExperimentResult out;
  out.threads = threads_;
  const double phi_d = params_.phi.to_double();
  const double gap_d = params_.gap.to_double();
  const int levels = params_.occupancy_depth;
  const std::vector<long> ns = grid(Target::identity);
  const ExactSequence* seq = exact_up_to(ns.back());
  const Rational one(1);
  const Rational two(2);

  for (const long n : ns) {
    const long reps = replicates(Target::identity);
    const std::uint64_t seed = grid_seed(cfg_.master_seed, Target::identity, n);
    std::vector<double> vals(static_cast<std::size_t>(reps));
    std::vector<std::uint64_t> active(threads_, 0);

    parallel_for(static_cast<std::size_t>(reps), threads_,
                 [&](std::size_t begin, std::size_t end, unsigned worker) {
                   std::vector<double> buf(static_cast<std::size_t>(n));
                   for (std::size_t rep = begin; rep < end; ++rep) {
                     const SamplerCore core(params_, seed, rep);
                     for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = core.point(i);
                     const SplitStats st = split_stats(buf, phi_d, levels);
                     double v = 0.0;
                     if (st.n_lower >= 1 && st.n_lower <= buf.size() - 1) {
                       v = (*st.u_min - *st.l_max) - gap_d;
                       ++active[worker];
                     }
                     vals[rep] = v;
                   }
                 });

    const auto ms = stats::mean_stderr(vals);
    std::optional<double> ref;
    if (seq && n <= seq->n_max) {
      // 2^(1-n) * ((2^n - 2 phi) a_n - (1 - phi)), exact until the final rounding
      const Rational twon = two.pow(static_cast<unsigned long>(n));
      const Rational rhs = (twon - two * params_.phi) * seq->at(static_cast<int>(n)) - (one - params_.phi);
      const Rational scale = Rational(1, 2).pow(static_cast<unsigned long>(n - 1));
      ref = (scale * rhs).to_double();
    }
    out.rows.push_back({"identity.lhs_mean", n, ms.mean, ms.se, ref,
                        ref ? z_or_none(ms.mean, *ref, ms.se) : std::nullopt});
    if (ref) out.rows.push_back({"identity.rhs_exact", n, *ref, 0.0, std::nullopt, std::nullopt});

    std::uint64_t active_total = 0;
    for (const std::uint64_t a : active) active_total += a;
    const double p = static_cast<double>(active_total) / static_cast<double>(reps);
    const double p_ref = 1.0 - std::ldexp(1.0, static_cast<int>(1 - n));
    const double p_se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
    out.rows.push_back({"identity.active_frac", n, p, p_se, p_ref, z_or_none(p, p_ref, p_se)});
  }
  out.wall_seconds = timer.seconds();
  return out;
}

ExperimentResult Engine::escape() {
  Timer timer;
  ExperimentResult out;
  out.threads = threads_;
  const double phi_d = params_.phi.to_double();
  const int levels = params_.occupancy_depth;

  for (const long n : grid(Target::escape_probability)) {
    const long reps = replicates(Target::escape_probability);
    const std::uint64_t seed = grid_seed(cfg_.master_seed, Target::escape_probability, n);
    std::vector<std::uint64_t> escapes(threads_, 0);

    parallel_for(static_cast<std::size_t>(reps), threads_,
                 [&](std::size_t begin, std::size_t end, unsigned worker) {
                   std::vector<double> buf(static_cast<std::size_t>(n));
                   for (std::size_t rep = begin; rep < end; ++rep) {
                     const SamplerCore core(params_, seed, rep);
                     for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = core.point(i);
                     const SplitStats st = split_stats(buf, phi_d, levels);
                     if (!st.all_occupied) ++escapes[worker];
                   }
                 });

    std::uint64_t total = 0;
    for (const std::uint64_t e : escapes) total += e;
    const double rd = static_cast<double>(reps);
    const double p = static_cast<double>(total) / rd;
    const double se = std::sqrt(p * (1.0 - p) / rd);
    const double exact = escape_probability_exact(levels, n);
    const double bound = escape_union_bound(levels, n);
    out.rows.push_back({"escape_probability.frequency", n, p, se, exact, z_or_none(p, exact, se)});
    out.rows.push_back({"escape_probability.exact", n, exact, 0.0, std::nullopt, std::nullopt});
    out.rows.push_back({"escape_probability.union_bound", n, bound, 0.0, std::nullopt, std::nullopt});
    out.rows.push_back({"escape_probability.frequency_minus_bound", n, p - bound, se, 0.0,
                        z_or_none(p, bound, se)});
  }
  out.wall_seconds = timer.seconds();
  return out;
}

ExperimentResult Engine::occupancy() {
  Timer timer;
  ExperimentResult out;
  out.threads = threads_;
  const double phi_d = params_.phi.to_double();
  const int levels = params_.occupancy_depth;
  const std::size_t cells = std::size_t{1} << levels;

  for (const long n : grid(Target::occupancy)) {
    const long reps = replicates(Target::occupancy);
    const std::uint64_t seed = grid_seed(cfg_.master_seed, Target::occupancy, n);
    std::vector<std::vector<std::uint64_t>> pooled(threads_, std::vector<std::uint64_t>(cells, 0));
    std::vector<std::uint64_t> sum_lower(threads_, 0), sum_lower_sq(threads_, 0);

    parallel_for(static_cast<std::size_t>(reps), threads_,
                 [&](std::size_t begin, std::size_t end, unsigned worker) {
                   std::vector<double> buf(static_cast<std::size_t>(n));
                   for (std::size_t rep = begin; rep < end; ++rep) {
                     const SamplerCore core(params_, seed, rep);
                     for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = core.point(i);
                     const SplitStats st = split_stats(buf, phi_d, levels);
                     for (std::size_t c = 0; c < cells; ++c) pooled[worker][c] += st.occupancy[c];
                     const std::uint64_t nl = st.n_lower;
                     sum_lower[worker] += nl;
                     sum_lower_sq[worker] += nl * nl;
                   }
                 });

    std::vector<std::uint64_t> counts(cells, 0);
    std::uint64_t s1 = 0, s2 = 0;
    for (unsigned w = 0; w < threads_; ++w) {
      for (std::size_t c = 0; c < cells; ++c) counts[c] += pooled[w][c];
      s1 += sum_lower[w];
      s2 += sum_lower_sq[w];
    }

    const double rd = static_cast<double>(reps);
    const double expected_per_cell = rd * static_cast<double>(n) / static_cast<double>(cells);
    std::vector<double> expected(cells, expected_per_cell);
    const double stat = stats::chi_square_stat(counts, expected);
    const int dof = static_cast<int>(cells) - 1;
    const double pval = stats::chi_square_pvalue(stat, dof);

    // N/n moments from exact integer sums; order-independent by construction
    const double mean_frac = static_cast<double>(s1) / (rd * static_cast<double>(n));
    const double var_n = (static_cast<double>(s2) - static_cast<double>(s1) * static_cast<double>(s1) / rd) / (rd - 1.0);
    const double se_frac = std::sqrt(var_n / rd) / static_cast<double>(n);

    out.rows.push_back({"occupancy.chi2_stat", n, stat, 0.0, static_cast<double>(dof), std::nullopt});
    out.rows.push_back({"occupancy.chi2_pvalue", n, pval, 0.0, std::nullopt, std::nullopt});
    out.rows.push_back({"occupancy.expected_per_cell", n, expected_per_cell, 0.0, std::nullopt, std::nullopt});
    out.rows.push_back({"occupancy.lower_frac", n, mean_frac, se_frac, 0.5, z_or_none(mean_frac, 0.5, se_frac)});
  }
  out.wall_seconds = timer.seconds();
  return out;
}

ExperimentResult Engine::run(Target t) {
  switch (t) {
    case Target::convergence: return convergence();
    case Target::l1_rate: return l1_rate();
    case Target::identity: return identity();
    case Target::escape_probability: return escape();
    case Target::occupancy: return occupancy();
  }
  throw std::logic_error("Engine::run: unknown target");
}

ExperimentResult Engine::run_all() {
  Timer timer;
  std::vector<Target> wanted = cfg_.targets.empty()
                                   ? std::vector<Target>(std::begin(kAllTargets), std::end(kAllTargets))
                                   : cfg_.targets;
  ExperimentResult out;
  out.threads = threads_;
  for (const Target t : kAllTargets) {  // canonical order, duplicates collapsed
    if (std::find(wanted.begin(), wanted.end(), t) == wanted.end()) continue;
    ExperimentResult part = run(t);
    out.rows.insert(out.rows.end(), part.rows.begin(), part.rows.end());
  }
  out.wall_seconds = timer.seconds();
  return out;
}

}  // namespace

ExperimentResult run_convergence(const ExperimentConfig& cfg, unsigned threads) {
  Engine eng(cfg, threads);
  return eng.run(Target::convergence);
}
ExperimentResult run_l1_rate(const ExperimentConfig& cfg, unsigned threads) {
  Engine eng(cfg, threads);
  return eng.run(Target::l1_rate);
}
ExperimentResult verify_identity(const ExperimentConfig& cfg, unsigned threads) {
  Engine eng(cfg, threads);
  return eng.run(Target::identity);
}
ExperimentResult estimate_escape_probability(const ExperimentConfig& cfg, unsigned threads) {
  Engine eng(cfg, threads);
  return eng.run(Target::escape_probability);
}
ExperimentResult occupancy_test(const ExperimentConfig& cfg, unsigned threads) {
  Engine eng(cfg, threads);
  return eng.run(Target::occupancy);
}
ExperimentResult run_all(const ExperimentConfig& cfg, unsigned threads) {
  Engine eng(cfg, threads);
  return eng.run_all();
}

}  // namespace crgg
