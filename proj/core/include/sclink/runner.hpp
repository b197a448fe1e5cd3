#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sclink/metrics.hpp"
#include "sclink/scenario.hpp"

namespace sclink {

struct RunOptions {
  std::string out_dir = "runs/out";
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> trials_override;      // replaces sweep.blocks
  std::vector<std::string> variant_filter;         // names; empty keeps all
  bool write_files = true;
};

struct ResultRow {
  double backoff_db = 0.0;
  double esn0_db = 0.0;
  std::string variant;
  std::string detector;
  std::string pa;  // "nonlinear" or "linear"
  AirEstimate air;
  BerEstimate ber;
  std::size_t n_symbols = 0;
  double outage = -1.0;  // -1 when outage accounting is disabled
  std::size_t n_blocks = 0;
};

struct RunOutput {
  std::vector<ResultRow> rows;
  std::filesystem::path dir;
  std::vector<std::string> files;  // artifacts written, relative to dir
};

// Executes the sweep and writes results.csv + manifest.txt (plus optional
// spectrum/scatter/model artifacts) under opts.out_dir.
RunOutput run_scenario(const Scenario& scenario, const RunOptions& opts);

std::string results_csv_text(const std::vector<ResultRow>& rows);

}  // namespace sclink
