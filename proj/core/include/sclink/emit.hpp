#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sclink {

// Figure ids understood by emit_figure: fig3 (per-branch linear/distortion
// spectra), fig5a/fig5b (rate/error vs backoff), fig6a/fig6b and fig7a/fig7b
// (rate/error vs Es/N0), fig8 (constellation scatter), fig9 (outage vs Es/N0),
// fig10a/fig10b (rate/error vs Es/N0 per detector).
const std::vector<std::string>& figure_ids();

// Reads results.csv (and companions) from a finished run directory and writes
// <figure-id>.csv there with a fixed column order. Returns the written path.
std::filesystem::path emit_figure(const std::filesystem::path& run_dir,
                                  const std::string& figure_id);

}  // namespace sclink
