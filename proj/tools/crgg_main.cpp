#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "crgg/acceptance.hpp"
#include "crgg/cantor_model.hpp"
#include "crgg/config_io.hpp"
#include "crgg/exact_sequence.hpp"
#include "crgg/experiments.hpp"
#include "crgg/parallel.hpp"
#include "crgg/sampler.hpp"
#include "crgg/specfun.hpp"
#include "crgg/threshold.hpp"
#include "crgg/version.hpp"

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open points file: " + path);
  std::vector<double> pts;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("trailing characters");
      pts.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error("points file " + path + ": not a number: '" + tok + "'");
    }
  }
  if (pts.empty()) throw std::runtime_error("points file " + path + " holds no points");
  return pts;
}

void write_or_print(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    crgg::write_text_file(out, text);
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cantor-law random geometric graph toolkit"};
  app.set_version_flag("--version", std::string(crgg::kVersion));
  app.require_subcommand(1);

  std::string phi_str = "1/3";
  std::string out_path;
  std::string config_path;
  std::string points_path;
  std::uint64_t seed = 1;
  std::uint64_t replicate = 0;
  unsigned threads = 0;
  int depth = 0;
  int n_max = 64;
  long n_points = 100;
  bool use_search = false;

  auto* sample = app.add_subcommand("sample", "draw one replicate of Cantor-law points");
  sample->add_option("--phi", phi_str, "contraction ratio p/q in (0, 1/2)");
  sample->add_option("--depth", depth, "series truncation depth (0 = automatic)");
  sample->add_option("--n", n_points, "points per replicate")->required();
  sample->add_option("--seed", seed, "master seed");
  sample->add_option("--replicate", replicate, "replicate index");
  sample->add_option("--out", out_path, "output file ('-' = stdout)");

  auto* thresh = app.add_subcommand("threshold", "connectivity threshold of a points file");
  thresh->add_option("--points-file", points_path, "one real number per line")->required();
  thresh->add_flag("--search", use_search, "use the graph-search oracle instead of max-gap");

  auto* sequence = app.add_subcommand("sequence", "exact a_n table with asymptotic ratios");
  sequence->add_option("--phi", phi_str, "contraction ratio p/q in (0, 1/2)");
  sequence->add_option("--n-max", n_max, "table length")->check(CLI::PositiveNumber);
  sequence->add_option("--out", out_path, "output CSV ('-' = stdout)");

  auto* constant = app.add_subcommand("constant", "rate constant C(phi) and its factors");
  constant->add_option("--phi", phi_str, "contraction ratio p/q in (0, 1/2)");

  auto* experiment = app.add_subcommand("experiment", "run configured experiment targets");
  experiment->add_option("--config", config_path, "experiment config JSON")->required();
  experiment->add_option("--out", out_path, "output directory (default $CRGG_OUT_DIR or '.')");
  experiment->add_option("--seed", seed, "override the config master_seed");
  experiment->add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--threads", threads, "worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) {
      const crgg::CantorParams params = crgg::make_params(crgg::Rational(phi_str), depth);
      if (n_points < 1) throw std::domain_error("--n must be >= 1");
      const crgg::SampleBatch batch =
          crgg::sample_batch(params, static_cast<std::size_t>(n_points), seed, replicate);
      std::ostringstream text;
      for (const double x : batch.points) text << fmt17(x) << '\n';
      write_or_print(out_path, text.str());
    } else if (thresh->parsed()) {
      const std::vector<double> pts = read_points_file(points_path);
      const crgg::ThresholdResult res =
          use_search ? crgg::threshold_by_search(pts) : crgg::connectivity_threshold(pts);
      std::cout << fmt17(res.r) << " gap=[" << fmt17(res.gap_left) << ", " << fmt17(res.gap_right)
                << "] method=" << crgg::method_name(res.method) << '\n';
    } else if (sequence->parsed()) {
      const crgg::Rational phi(phi_str);
      if (n_max > 2048) {
        std::cerr << "warning: n_max " << n_max
                  << " exceeds the desk-scale ceiling 2048; expect a long run\n";
      }
      const crgg::ExactSequence seq = crgg::compute_sequence(phi, n_max);
      const crgg::RateConstant rc = crgg::rate_constant(crgg::make_params(phi));
      const std::vector<double> rho = crgg::sequence_asymptotic_ratio(seq, rc);
      std::ostringstream text;
      text << "n,a_exact,a_float,rho\n";
      for (int n = 1; n <= seq.n_max; ++n) {
        text << n << ',' << seq.at(n).str() << ',' << fmt17(seq.at(n).to_double()) << ','
             << fmt17(rho[static_cast<std::size_t>(n) - 1]) << '\n';
      }
      write_or_print(out_path, text.str());
    } else if (constant->parsed()) {
      const crgg::CantorParams params = crgg::make_params(crgg::Rational(phi_str));
      const crgg::RateConstant rc = crgg::rate_constant(params);
      std::cout << "{\n"
                << "  \"phi\": \"" << rc.phi.str() << "\",\n"
                << "  \"value\": " << fmt17(rc.value) << ",\n"
                << "  \"gamma_factor\": " << fmt17(rc.gamma_factor) << ",\n"
                << "  \"zeta_factor\": " << fmt17(rc.zeta_factor) << ",\n"
                << "  \"exponent\": " << fmt17(rc.exponent) << ",\n"
                << "  \"dim\": " << fmt17(params.dim) << ",\n"
                << "  \"est_error\": " << fmt17(rc.est_error) << "\n"
                << "}\n";
    } else if (experiment->parsed()) {
      crgg::ExperimentConfig cfg = crgg::parse_config_file(config_path);
      if (experiment->count("--seed") > 0) cfg.master_seed = seed;
      std::string dir = out_path;
      if (dir.empty()) {
        const char* env = std::getenv("CRGG_OUT_DIR");
        dir = env && *env ? env : ".";
      }
      std::filesystem::create_directories(dir);
      const std::string started = utc_now();
      const crgg::ExperimentResult res = crgg::run_all(cfg, threads);
      const std::string canonical = crgg::emit_config(cfg);

      crgg::RunManifest manifest;
      manifest.version = std::string(crgg::kVersion);
      manifest.config_text = canonical;
      manifest.master_seed = cfg.master_seed;
      manifest.threads = crgg::resolve_threads(threads);
      manifest.wall_seconds = res.wall_seconds;
      manifest.started_utc = started;

      const std::string csv_path = dir + "/results.csv";
      const std::string manifest_path = dir + "/manifest.json";
      crgg::write_text_file(csv_path, crgg::csv_text(res.rows, cfg.master_seed));
      crgg::write_text_file(manifest_path, crgg::manifest_json(manifest));

      for (const crgg::ResultRow& row : res.rows) {
        if (row.target == "occupancy.expected_per_cell" && row.estimate < 5.0) {
          std::cerr << "warning: occupancy chi-square at n=" << row.n << " has expected count "
                    << row.estimate << " per cell (< 5); p-value is unreliable\n";
        }
      }
      std::cout << "wrote " << res.rows.size() << " rows to " << csv_path << " (manifest "
                << manifest_path << ", " << fmt17(res.wall_seconds) << " s)\n";
    } else if (verify->parsed()) {
      const auto results = crgg::run_acceptance(threads, std::cout);
      int failed = 0;
      for (const auto& r : results) {
        if (!r.pass) ++failed;
      }
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
