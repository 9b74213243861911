#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "crgg/experiments.hpp"

namespace crgg {

/// Parses the experiment config JSON; unknown keys are rejected, errors name the field.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical JSON echo: sorted keys, sentinel defaults omitted, target list explicit.
/// emit(parse(emit(cfg))) == emit(cfg).
std::string emit_config(const ExperimentConfig& cfg);

/// FNV-1a over the canonical config text.
std::uint64_t config_hash(const std::string& canonical_text);

struct RunManifest {
  std::string version;
  std::string config_text;  // canonical
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  double wall_seconds = 0.0;
  std::string started_utc;  // the only non-reproducible field
};

std::string manifest_json(const RunManifest& m);

std::string csv_header();
std::string csv_line(const ResultRow& row, std::uint64_t seed);
std::string csv_text(std::span<const ResultRow> rows, std::uint64_t seed);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace crgg
