#include "crgg/config_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "crgg/version.hpp"

namespace crgg {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config field '" + field + "': " + why);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  static const char* known[] = {"phi",         "depth",   "n_grid",     "replicates",
                                "master_seed", "targets", "exact_n_max"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) config_error(key, "unknown key");
  }

  ExperimentConfig cfg;
  if (!j.contains("phi")) config_error("phi", "required");
  if (!j["phi"].is_string()) config_error("phi", "must be a string of the form \"p/q\"");
  try {
    cfg.phi = Rational(j["phi"].get<std::string>());
  } catch (const std::exception& e) {
    config_error("phi", std::string("must be a rational \"p/q\" (decimals are not accepted): ") + e.what());
  }
  if (!(Rational(0) < cfg.phi && cfg.phi < Rational(1, 2))) {
    config_error("phi", "must lie strictly inside (0, 1/2); got " + cfg.phi.str());
  }

  if (j.contains("depth")) {
    if (!j["depth"].is_number_integer()) config_error("depth", "must be an integer");
    const long d = j["depth"].get<long>();
    if (d < 1 || d > 4096) config_error("depth", "must lie in [1, 4096]");
    cfg.depth = static_cast<int>(d);
  }
  if (j.contains("n_grid")) {
    if (!j["n_grid"].is_array() || j["n_grid"].empty()) config_error("n_grid", "must be a nonempty array");
    long prev = 0;
    for (const auto& e : j["n_grid"]) {
      if (!e.is_number_integer()) config_error("n_grid", "entries must be integers");
      const long n = e.get<long>();
      if (n < 1) config_error("n_grid", "entries must be >= 1");
      if (n <= prev) config_error("n_grid", "must be strictly increasing");
      cfg.n_grid.push_back(n);
      prev = n;
    }
  }
  if (j.contains("replicates")) {
    if (!j["replicates"].is_number_integer()) config_error("replicates", "must be an integer");
    const long r = j["replicates"].get<long>();
    if (r < 2) config_error("replicates", "must be >= 2");
    cfg.replicates = r;
  }
  if (j.contains("master_seed")) {
    const auto& s = j["master_seed"];
    if (s.is_number_unsigned()) {
      cfg.master_seed = s.get<std::uint64_t>();
    } else if (s.is_string()) {
      try {
        std::size_t pos = 0;
        cfg.master_seed = std::stoull(s.get<std::string>(), &pos);
        if (pos != s.get<std::string>().size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        config_error("master_seed", "string form must be a decimal unsigned 64-bit integer");
      }
    } else {
      config_error("master_seed", "must be an unsigned integer (number or decimal string)");
    }
  }
  if (j.contains("targets")) {
    if (!j["targets"].is_array() || j["targets"].empty()) config_error("targets", "must be a nonempty array");
    for (const auto& e : j["targets"]) {
      if (!e.is_string()) config_error("targets", "entries must be strings");
      const auto t = target_from_name(e.get<std::string>());
      if (!t) {
        config_error("targets", "unknown target '" + e.get<std::string>() +
                                    "' (known: convergence, l1_rate, identity, escape_probability, occupancy)");
      }
      cfg.targets.push_back(*t);
    }
  }
  if (j.contains("exact_n_max")) {
    if (!j["exact_n_max"].is_number_integer()) config_error("exact_n_max", "must be an integer");
    const long m = j["exact_n_max"].get<long>();
    if (m < 0 || m > 1000000) config_error("exact_n_max", "must lie in [0, 1000000]");
    cfg.exact_n_max = static_cast<int>(m);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
  json j;
  j["phi"] = cfg.phi.str();
  if (cfg.depth > 0) j["depth"] = cfg.depth;
  if (!cfg.n_grid.empty()) j["n_grid"] = cfg.n_grid;
  if (cfg.replicates > 0) j["replicates"] = cfg.replicates;
  j["master_seed"] = cfg.master_seed;
  json targets = json::array();
  const auto& ts = cfg.targets;
  for (const Target t : ts.empty() ? std::vector<Target>(std::begin(kAllTargets), std::end(kAllTargets)) : ts) {
    targets.push_back(std::string(target_name(t)));
  }
  j["targets"] = targets;
  j["exact_n_max"] = cfg.exact_n_max;
  return j.dump(2);  // nlohmann emits object keys sorted; stable by construction
}

std::uint64_t config_hash(const std::string& canonical_text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string manifest_json(const RunManifest& m) {
  json j;
  j["version"] = m.version;
  j["config"] = json::parse(m.config_text);
  j["config_hash"] = config_hash(m.config_text);
  j["master_seed"] = m.master_seed;
  j["threads"] = m.threads;
  j["wall_seconds"] = m.wall_seconds;
  j["started_utc"] = m.started_utc;
  return j.dump(2);
}

std::string csv_header() { return "target,n,estimate,stderr,reference,z,seed"; }

std::string csv_line(const ResultRow& row, std::uint64_t seed) {
  std::ostringstream out;
  out << row.target << ',' << row.n << ',' << format_double(row.estimate) << ','
      << format_double(row.stderr_value) << ',';
  if (row.reference) out << format_double(*row.reference);
  out << ',';
  if (row.z) out << format_double(*row.z);
  out << ',' << seed;
  return out.str();
}

std::string csv_text(std::span<const ResultRow> rows, std::uint64_t seed) {
  std::ostringstream out;
  out << csv_header() << '\n';
  for (const ResultRow& r : rows) out << csv_line(r, seed) << '\n';
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace crgg
