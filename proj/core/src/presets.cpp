#include <stdexcept>

#include "sclink/scenario.hpp"

namespace sclink {

namespace {

Scenario scenario1_desk() {
  Scenario s;
  s.name = "scenario1-desk";
  s.qam_order = 64;
  s.mu = 4;
  s.n_data = 1024;
  s.n_cp = 64;
  s.n_cs = 16;
  s.n_ft = 512;
  s.rrc_rolloff = 0.3;
  s.rrc_span = 16;
  s.csi_lb = 4;
  s.csi_lf = 16;
  s.memory_m = 2;
  s.gpr_segments = 4;
  s.gpr_segment_len = 1024;
  s.nn_hidden = 30;
  s.nn_epochs = 60;
  s.n_st = 4096;
  s.st_esn0_db = 300.0;
  s.profile = ChannelProfile::kAwgn;
  s.pa = SalehParams{};
  s.backoff_db = {4.0, 5.0, 6.0, 7.0, 8.0, 9.0};
  s.esn0_db = {50.0};
  s.n_blocks = 200;
  s.variants = {PostdistKind::conventional, PostdistKind::mm, PostdistKind::volterra,
                PostdistKind::gpr, PostdistKind::nn};
  s.detectors = {DetectorKind::nominal};
  s.linear_reference = true;
  return s;
}

Scenario scenario1_full() {
  Scenario s = scenario1_desk();
  s.name = "scenario1-full";
  s.qam_order = 1024;
  s.n_data = 8192;
  s.n_ft = 3000;
  s.memory_m = 3;
  s.gpr_segments = 8;
  s.gpr_segment_len = 2048;
  s.n_st = 16384;
  s.backoff_db = {4.46, 5.93, 9.44};
  s.n_blocks = 4;
  return s;
}

Scenario scenario2_desk() {
  Scenario s = scenario1_desk();
  s.name = "scenario2-desk";
  s.profile = ChannelProfile::kDenseExponential;
  s.pdp_span_symbols = 16.0;
  s.pa = make_default_memory_poly();
  s.backoff_db = {6.0};
  s.esn0_db = {10.0, 14.0, 18.0, 22.0, 26.0, 30.0};
  s.n_blocks = 200;
  s.variants = {PostdistKind::conventional, PostdistKind::nn};
  s.detectors = {DetectorKind::nominal, DetectorKind::best, DetectorKind::dassd};
  s.outage_threshold_bits = 5.5;
  s.linear_reference = false;
  return s;
}

Scenario scenario2_full() {
  Scenario s = scenario2_desk();
  s.name = "scenario2-full";
  s.qam_order = 256;
  s.n_data = 8192;
  s.n_ft = 3000;
  s.memory_m = 3;
  s.gpr_segments = 8;
  s.gpr_segment_len = 2048;
  s.n_st = 16384;
  s.esn0_db = {10.0, 14.0, 18.0, 22.0, 26.0, 30.0, 34.0};
  s.n_blocks = 500;
  s.outage_threshold_bits = 7.5;
  return s;
}

Scenario spectrum_demo() {
  Scenario s = scenario1_desk();
  s.name = "spectrum-demo";
  s.profile = ChannelProfile::kDenseExponential;
  s.pdp_span_symbols = 16.0;
  s.backoff_db = {6.0};
  s.esn0_db = {30.0};
  s.n_blocks = 1;
  s.variants = {PostdistKind::conventional};
  s.detectors = {DetectorKind::nominal};
  s.linear_reference = false;
  s.spectrum_report = true;
  s.spectrum_symbols = 2048;
  return s;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "scenario1-desk", "scenario1-full", "scenario2-desk", "scenario2-full", "spectrum-demo"};
  return names;
}

Scenario preset_scenario(const std::string& name) {
  if (name == "scenario1-desk") return scenario1_desk();
  if (name == "scenario1-full") return scenario1_full();
  if (name == "scenario2-desk") return scenario2_desk();
  if (name == "scenario2-full") return scenario2_full();
  if (name == "spectrum-demo") return spectrum_demo();
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace sclink
