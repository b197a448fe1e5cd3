#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sclink/channel.hpp"
#include "sclink/config.hpp"
#include "sclink/pa.hpp"
#include "sclink/types.hpp"

namespace sclink {

enum class PostdistKind { conventional, mm, volterra, gpr, nn };
enum class DetectorKind { nominal, best, dassd };

std::string to_string(PostdistKind k);
std::string to_string(DetectorKind k);
PostdistKind postdist_from_string(const std::string& s);
DetectorKind detector_from_string(const std::string& s);

struct Scenario {
  std::string name = "custom";
  std::uint64_t seed = 1;

  unsigned qam_order = 64;
  unsigned mu = 4;  // samples per symbol, equal to the receiver branch count

  std::size_t n_data = 1024;
  std::size_t n_cp = 64;
  std::size_t n_cs = 16;
  std::size_t n_ft = 512;

  double rrc_rolloff = 0.3;
  unsigned rrc_span = 16;

  int csi_lb = 4;
  int csi_lf = 16;

  unsigned memory_m = 2;
  std::size_t gpr_segments = 4;
  std::size_t gpr_segment_len = 1024;
  unsigned nn_hidden = 30;
  unsigned nn_epochs = 60;
  std::size_t n_st = 4096;
  // training capture is taken clean; raise noise here only for experiments
  double st_esn0_db = 300.0;

  ChannelProfile profile = ChannelProfile::kAwgn;
  double pdp_span_symbols = 16.0;

  PaModel pa = SalehParams{};
  bool linear_reference = true;

  std::vector<double> backoff_db = {6.0};
  std::vector<double> esn0_db = {50.0};
  std::size_t n_blocks = 1;

  std::vector<PostdistKind> variants = {PostdistKind::conventional, PostdistKind::mm,
                                        PostdistKind::volterra, PostdistKind::gpr,
                                        PostdistKind::nn};
  std::vector<DetectorKind> detectors = {DetectorKind::nominal};

  double outage_threshold_bits = 0.0;  // 0 disables per-block outage accounting

  bool spectrum_report = false;
  std::size_t spectrum_symbols = 2048;
  bool scatter_dump = false;
  bool save_models = false;  // serialize trained post-distorters into the run dir

  void validate() const;  // throws std::invalid_argument on any bad combination
};

// Applies a config file on top of a preset base (key "preset") or built-in
// defaults. Every recognized key is consumed; leftovers raise ConfigError.
Scenario scenario_from_config(ConfigView root);
Scenario scenario_from_file(const std::string& filename);

// Canonical flat key=value rendering used for the manifest hash; stable across
// runs for identical settings.
std::string canonical_config_text(const Scenario& s);
std::uint64_t config_hash(const Scenario& s);

const std::vector<std::string>& preset_names();
Scenario preset_scenario(const std::string& name);

}  // namespace sclink
