#include "sclink/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sclink/qam.hpp"

namespace sclink {

std::string to_string(PostdistKind k) {
  switch (k) {
    case PostdistKind::conventional: return "conventional";
    case PostdistKind::mm: return "mm";
    case PostdistKind::volterra: return "volterra";
    case PostdistKind::gpr: return "gpr";
    case PostdistKind::nn: return "nn";
  }
  return "?";
}

std::string to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::nominal: return "nominal";
    case DetectorKind::best: return "best";
    case DetectorKind::dassd: return "dassd";
  }
  return "?";
}

PostdistKind postdist_from_string(const std::string& s) {
  if (s == "conventional") return PostdistKind::conventional;
  if (s == "mm") return PostdistKind::mm;
  if (s == "volterra") return PostdistKind::volterra;
  if (s == "gpr") return PostdistKind::gpr;
  if (s == "nn") return PostdistKind::nn;
  throw std::invalid_argument("unknown post-distorter variant '" + s +
                              "' (expected conventional|mm|volterra|gpr|nn)");
}

DetectorKind detector_from_string(const std::string& s) {
  if (s == "nominal") return DetectorKind::nominal;
  if (s == "best") return DetectorKind::best;
  if (s == "dassd") return DetectorKind::dassd;
  throw std::invalid_argument("unknown detector '" + s + "' (expected nominal|best|dassd)");
}

void Scenario::validate() const {
  make_qam(qam_order);  // throws on unsupported order
  if (mu < 1) throw std::invalid_argument("samples_per_symbol must be >= 1");
  if (n_data == 0 || n_ft == 0) throw std::invalid_argument("frame sizes must be positive");
  const FrameLayout layout{static_cast<int>(n_data), static_cast<int>(n_cp),
                           static_cast<int>(n_cs), static_cast<int>(n_ft),
                           static_cast<int>(n_st)};
  sclink::validate(layout);
  if (rrc_rolloff < 0.0 || rrc_rolloff > 1.0) {
    throw std::invalid_argument("pulse rolloff must lie in [0, 1]");
  }
  if (rrc_span == 0 || rrc_span % 2 != 0) {
    throw std::invalid_argument("pulse span must be a positive even symbol count");
  }
  if (csi_lb < 1 || csi_lf < 1) throw std::invalid_argument("csi extents must be >= 1");
  if (n_cp < static_cast<std::size_t>(csi_lf - 1) ||
      n_cs < static_cast<std::size_t>(csi_lb - 1)) {
    throw std::invalid_argument(
        "cyclic guards too short for the channel estimator: need cp >= post-1 and cs >= pre-1");
  }
  if (memory_m < 1) throw std::invalid_argument("postdist memory must be >= 1");
  const auto wants = [&](PostdistKind k) {
    return std::find(variants.begin(), variants.end(), k) != variants.end();
  };
  if (wants(PostdistKind::gpr)) {
    if (gpr_segments == 0 || gpr_segment_len == 0 ||
        gpr_segments * gpr_segment_len > n_st) {
      throw std::invalid_argument("gpr segments do not fit in the training sequence");
    }
  }
  if (wants(PostdistKind::nn)) {
    const std::size_t d = 4 * static_cast<std::size_t>(memory_m) - 2;
    const std::size_t params = nn_hidden * d + nn_hidden + 2 * nn_hidden + 2;
    if (n_st < 10 * params) {
      throw std::invalid_argument("nn training needs at least 10x its parameter count in symbols");
    }
  }
  if (backoff_db.empty() || esn0_db.empty()) {
    throw std::invalid_argument("sweep lists must not be empty");
  }
  if (std::holds_alternative<LinearPa>(pa)) {
    if (backoff_db.size() != 1) {
      throw std::invalid_argument("a linear amplifier has no backoff; use a single sweep entry");
    }
  } else {
    for (double b : backoff_db) {
      if (b < 0.0) throw std::invalid_argument("backoff must be >= 0 dB");
    }
  }
  if (n_blocks == 0) throw std::invalid_argument("sweep.blocks must be >= 1");
  if (variants.empty()) throw std::invalid_argument("variants must not be empty");
  if (detectors.empty()) throw std::invalid_argument("detectors must not be empty");
  const bool multi_branch_detector =
      std::find(detectors.begin(), detectors.end(), DetectorKind::dassd) != detectors.end();
  if (multi_branch_detector && n_ft < mu + 1) {
    throw std::invalid_argument("combiner detector needs at least mu+1 training symbols");
  }
  if (outage_threshold_bits < 0.0) throw std::invalid_argument("outage_threshold must be >= 0");
  if (spectrum_report && spectrum_symbols < 64) {
    throw std::invalid_argument("spectrum.symbols must be >= 64");
  }
}

namespace {

PaModel parse_pa(ConfigView pa) {
  const std::string model = pa.text_or("model", "saleh");
  if (model == "linear") {
    pa.done();
    return LinearPa{};
  }
  if (model == "saleh") {
    SalehParams p;
    p.g0 = pa.number_or("g0", p.g0);
    p.a_sat = pa.number_or("a_sat", p.a_sat);
    p.alpha = pa.number_or("alpha_theta", p.alpha);
    p.beta = pa.number_or("beta_theta", p.beta);
    pa.done();
    if (p.g0 <= 0.0 || p.a_sat <= 0.0 || p.beta < 0.0) {
      pa.fail("saleh parameters must satisfy g0 > 0, a_sat > 0, beta_theta >= 0");
    }
    return p;
  }
  if (model == "memory_poly") {
    if (!pa.has("coeffs")) {
      // consume the sizing keys even when absent so done() stays strict
      if (pa.has("kb") || pa.has("pb") || pa.has("pc")) {
        pa.fail("memory_poly sizing given without coeffs");
      }
      pa.done();
      return make_default_memory_poly();
    }
    MemoryPolyParams p;
    p.kb = static_cast<int>(pa.integer("kb"));
    p.pb = static_cast<int>(pa.integer("pb"));
    p.pc = static_cast<int>(pa.integer("pc"));
    for (const auto& [re, im] : pa.complex_list("coeffs")) p.coeffs.emplace_back(re, im);
    pa.done();
    if (p.kb < 1 || p.pb < 1 || p.pc < 1) {
      pa.fail("memory_poly sizes kb, pb, pc must be >= 1");
    }
    const std::size_t want = static_cast<std::size_t>(p.kb) *
                             static_cast<std::size_t>(2 * p.pb - 1) *
                             static_cast<std::size_t>(2 * p.pc - 1);
    if (p.coeffs.size() != want) {
      pa.fail("memory_poly coeffs must have kb*(2pb-1)*(2pc-1) = " + std::to_string(want) +
              " entries");
    }
    return p;
  }
  pa.fail("pa.model must be linear, saleh or memory_poly");
}

void apply_config(Scenario& s, ConfigView& root) {
  s.name = root.text_or("name", s.name);
  s.seed = root.uinteger_or("seed", s.seed);
  s.qam_order = static_cast<unsigned>(root.uinteger_or("qam_order", s.qam_order));
  s.mu = static_cast<unsigned>(root.uinteger_or("samples_per_symbol", s.mu));

  if (auto frame = root.maybe_map("frame")) {
    s.n_data = frame->uinteger_or("data", s.n_data);
    s.n_cp = frame->uinteger_or("cp", s.n_cp);
    s.n_cs = frame->uinteger_or("cs", s.n_cs);
    s.n_ft = frame->uinteger_or("train", s.n_ft);
    frame->done();
  }
  if (auto pulse = root.maybe_map("pulse")) {
    s.rrc_rolloff = pulse->number_or("rolloff", s.rrc_rolloff);
    s.rrc_span = static_cast<unsigned>(pulse->uinteger_or("span", s.rrc_span));
    pulse->done();
  }
  if (auto csi = root.maybe_map("csi")) {
    s.csi_lb = static_cast<int>(csi->integer_or("pre", s.csi_lb));
    s.csi_lf = static_cast<int>(csi->integer_or("post", s.csi_lf));
    csi->done();
  }
  if (auto pd = root.maybe_map("postdist")) {
    s.memory_m = static_cast<unsigned>(pd->uinteger_or("memory", s.memory_m));
    s.gpr_segments = pd->uinteger_or("gpr_segments", s.gpr_segments);
    s.gpr_segment_len = pd->uinteger_or("gpr_segment_len", s.gpr_segment_len);
    s.nn_hidden = static_cast<unsigned>(pd->uinteger_or("nn_hidden", s.nn_hidden));
    s.nn_epochs = static_cast<unsigned>(pd->uinteger_or("nn_epochs", s.nn_epochs));
    s.n_st = pd->uinteger_or("st_symbols", s.n_st);
    s.st_esn0_db = pd->number_or("st_esn0_db", s.st_esn0_db);
    pd->done();
  }
  if (auto pa = root.maybe_map("pa")) {
    s.pa = parse_pa(*pa);
  }
  if (auto ch = root.maybe_map("channel")) {
    if (ch->has("profile")) s.profile = channel_profile_from_string(ch->text("profile"));
    s.pdp_span_symbols = ch->number_or("pdp_span", s.pdp_span_symbols);
    ch->done();
  }
  if (auto sweep = root.maybe_map("sweep")) {
    if (sweep->has("backoff_db")) s.backoff_db = sweep->number_list("backoff_db");
    if (sweep->has("esn0_db")) s.esn0_db = sweep->number_list("esn0_db");
    s.n_blocks = sweep->uinteger_or("blocks", s.n_blocks);
    sweep->done();
  }
  if (root.has("variants")) {
    s.variants.clear();
    for (const auto& v : root.text_list("variants")) s.variants.push_back(postdist_from_string(v));
  }
  if (root.has("detectors")) {
    s.detectors.clear();
    for (const auto& d : root.text_list("detectors")) s.detectors.push_back(detector_from_string(d));
  }
  s.outage_threshold_bits = root.number_or("outage_threshold", s.outage_threshold_bits);
  s.linear_reference = root.boolean_or("linear_reference", s.linear_reference);
  if (auto spec = root.maybe_map("spectrum")) {
    s.spectrum_report = spec->boolean_or("enabled", s.spectrum_report);
    s.spectrum_symbols = spec->uinteger_or("symbols", s.spectrum_symbols);
    spec->done();
  }
  s.scatter_dump = root.boolean_or("scatter_dump", s.scatter_dump);
  s.save_models = root.boolean_or("save_models", s.save_models);
}

}  // namespace

Scenario scenario_from_config(ConfigView root) {
  Scenario s;
  if (root.has("preset")) {
    s = preset_scenario(root.text("preset"));
  } else {
    root.text_or("preset", "");  // consume for done()
  }
  apply_config(s, root);
  root.done();
  s.validate();
  return s;
}

Scenario scenario_from_file(const std::string& filename) {
  return scenario_from_config(load_config_file(filename));
}

namespace {

void put(std::ostringstream& os, const std::string& key, const std::string& value) {
  os << key << "=" << value << "\n";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_list(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << fmt(v[i]);
  return os.str();
}

}  // namespace

std::string canonical_config_text(const Scenario& s) {
  std::ostringstream os;
  put(os, "name", s.name);
  put(os, "seed", std::to_string(s.seed));
  put(os, "qam_order", std::to_string(s.qam_order));
  put(os, "samples_per_symbol", std::to_string(s.mu));
  put(os, "frame.data", std::to_string(s.n_data));
  put(os, "frame.cp", std::to_string(s.n_cp));
  put(os, "frame.cs", std::to_string(s.n_cs));
  put(os, "frame.train", std::to_string(s.n_ft));
  put(os, "pulse.rolloff", fmt(s.rrc_rolloff));
  put(os, "pulse.span", std::to_string(s.rrc_span));
  put(os, "csi.pre", std::to_string(s.csi_lb));
  put(os, "csi.post", std::to_string(s.csi_lf));
  put(os, "postdist.memory", std::to_string(s.memory_m));
  put(os, "postdist.gpr_segments", std::to_string(s.gpr_segments));
  put(os, "postdist.gpr_segment_len", std::to_string(s.gpr_segment_len));
  put(os, "postdist.nn_hidden", std::to_string(s.nn_hidden));
  put(os, "postdist.nn_epochs", std::to_string(s.nn_epochs));
  put(os, "postdist.st_symbols", std::to_string(s.n_st));
  put(os, "postdist.st_esn0_db", fmt(s.st_esn0_db));
  if (std::holds_alternative<LinearPa>(s.pa)) {
    put(os, "pa.model", "linear");
  } else if (const auto* sp = std::get_if<SalehParams>(&s.pa)) {
    put(os, "pa.model", "saleh");
    put(os, "pa.g0", fmt(sp->g0));
    put(os, "pa.a_sat", fmt(sp->a_sat));
    put(os, "pa.alpha_theta", fmt(sp->alpha));
    put(os, "pa.beta_theta", fmt(sp->beta));
  } else if (const auto* mp = std::get_if<MemoryPolyParams>(&s.pa)) {
    put(os, "pa.model", "memory_poly");
    put(os, "pa.kb", std::to_string(mp->kb));
    put(os, "pa.pb", std::to_string(mp->pb));
    put(os, "pa.pc", std::to_string(mp->pc));
    std::ostringstream cs;
    for (std::size_t i = 0; i < mp->coeffs.size(); ++i) {
      cs << (i ? ";" : "") << fmt(mp->coeffs[i].real()) << "," << fmt(mp->coeffs[i].imag());
    }
    put(os, "pa.coeffs", cs.str());
  }
  put(os, "channel.profile", to_string(s.profile));
  put(os, "channel.pdp_span", fmt(s.pdp_span_symbols));
  put(os, "sweep.backoff_db", fmt_list(s.backoff_db));
  put(os, "sweep.esn0_db", fmt_list(s.esn0_db));
  put(os, "sweep.blocks", std::to_string(s.n_blocks));
  {
    std::ostringstream vs;
    for (std::size_t i = 0; i < s.variants.size(); ++i) {
      vs << (i ? "," : "") << to_string(s.variants[i]);
    }
    put(os, "variants", vs.str());
  }
  {
    std::ostringstream ds;
    for (std::size_t i = 0; i < s.detectors.size(); ++i) {
      ds << (i ? "," : "") << to_string(s.detectors[i]);
    }
    put(os, "detectors", ds.str());
  }
  put(os, "outage_threshold", fmt(s.outage_threshold_bits));
  put(os, "linear_reference", s.linear_reference ? "true" : "false");
  put(os, "spectrum.enabled", s.spectrum_report ? "true" : "false");
  put(os, "spectrum.symbols", std::to_string(s.spectrum_symbols));
  put(os, "scatter_dump", s.scatter_dump ? "true" : "false");
  put(os, "save_models", s.save_models ? "true" : "false");
  return os.str();
}

std::uint64_t config_hash(const Scenario& s) {
  const std::string text = canonical_config_text(s);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sclink
