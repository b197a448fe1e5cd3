#include "sclink/emit.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sclink {

namespace {

struct Row {
  double backoff_db = 0.0;
  double esn0_db = 0.0;
  std::string variant, detector, pa;
  // cells kept verbatim so emitted text matches results.csv exactly
  std::string air_bits, air_stderr, ber, ber_lo, ber_hi, outage;
  std::uint64_t n_blocks = 0;
};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Row> read_results(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "results.csv";
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::string header;
  std::getline(f, header);
  const std::string expected =
      "backoff_db,esn0_db,variant,detector,pa,air_bits,air_stderr,ber,ber_lo,ber_hi,"
      "bit_errors,n_bits,n_symbols,outage,n_blocks";
  if (header != expected) {
    throw std::runtime_error(path.string() + ": unexpected results header");
  }
  std::vector<Row> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 15) throw std::runtime_error(path.string() + ": malformed row");
    Row r;
    r.backoff_db = std::stod(cells[0]);
    r.esn0_db = std::stod(cells[1]);
    r.variant = cells[2];
    r.detector = cells[3];
    r.pa = cells[4];
    r.air_bits = cells[5];
    r.air_stderr = cells[6];
    r.ber = cells[7];
    r.ber_lo = cells[8];
    r.ber_hi = cells[9];
    r.outage = cells[13];
    r.n_blocks = std::stoull(cells[14]);
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no result rows");
  return rows;
}

std::string receiver_name(const Row& r) {
  if (r.pa == "linear") return "linear";
  return r.variant;
}

std::string ber_err(const Row& r) {
  // half-width of the 95% interval
  std::ostringstream os;
  os << std::setprecision(12) << (std::stod(r.ber_hi) - std::stod(r.ber_lo)) / 2.0;
  return os.str();
}

std::string outage_err(const Row& r) {
  if (r.outage.empty() || r.n_blocks == 0) return "";
  const double p = std::stod(r.outage);
  std::ostringstream os;
  os << std::setprecision(12) << std::sqrt(p * (1.0 - p) / static_cast<double>(r.n_blocks));
  return os.str();
}

// Long-format line figure: one row per (receiver, x).
std::filesystem::path write_long(const std::filesystem::path& run_dir,
                                 const std::string& figure_id, const std::string& x_name,
                                 const std::string& y_name, bool x_is_backoff,
                                 const std::vector<Row>& rows,
                                 const std::function<bool(const Row&)>& keep,
                                 const std::function<std::string(const Row&)>& receiver,
                                 const std::function<std::string(const Row&)>& value,
                                 const std::function<std::string(const Row&)>& err) {
  const auto path = run_dir / (figure_id + ".csv");
  std::ofstream f(path);
  f << "receiver," << x_name << ',' << y_name << ",err\n";
  for (const auto& r : rows) {
    if (!keep(r)) continue;
    std::ostringstream x;
    x << std::setprecision(12) << (x_is_backoff ? r.backoff_db : r.esn0_db);
    f << receiver(r) << ',' << x.str() << ',' << value(r) << ',' << err(r) << '\n';
  }
  return path;
}

std::filesystem::path emit_vs_backoff(const std::filesystem::path& run_dir,
                                      const std::string& figure_id, bool air) {
  const auto rows = read_results(run_dir);
  const double esn0 = rows.front().esn0_db;
  return write_long(
      run_dir, figure_id, "backoff_dB", air ? "air_bps" : "ber", true, rows,
      [&](const Row& r) { return r.detector == "nominal" && r.esn0_db == esn0; },
      receiver_name, [&](const Row& r) { return air ? r.air_bits : r.ber; },
      [&](const Row& r) { return air ? r.air_stderr : ber_err(r); });
}

std::filesystem::path emit_vs_snr(const std::filesystem::path& run_dir,
                                  const std::string& figure_id, bool air) {
  const auto rows = read_results(run_dir);
  const double backoff = rows.front().backoff_db;
  return write_long(
      run_dir, figure_id, "snr_dB", air ? "air_bps" : "ber", false, rows,
      [&](const Row& r) { return r.detector == "nominal" && r.backoff_db == backoff; },
      receiver_name, [&](const Row& r) { return air ? r.air_bits : r.ber; },
      [&](const Row& r) { return air ? r.air_stderr : ber_err(r); });
}

// Detector-comparison figures label receivers "<variant>+<detector>".
std::filesystem::path emit_per_detector(const std::filesystem::path& run_dir,
                                        const std::string& figure_id,
                                        int what /*0 air, 1 ber, 2 outage*/) {
  const auto rows = read_results(run_dir);
  const double backoff = rows.front().backoff_db;
  if (what == 2) {
    bool any = false;
    for (const auto& r : rows) any = any || !r.outage.empty();
    if (!any) {
      throw std::runtime_error("figure needs outage data; rerun with outage_threshold > 0");
    }
  }
  return write_long(
      run_dir, figure_id, "snr_dB", what == 0 ? "air_bps" : (what == 1 ? "ber" : "p_out"),
      false, rows,
      [&](const Row& r) {
        if (r.pa != "nonlinear" || r.backoff_db != backoff) return false;
        return !(what == 2 && r.outage.empty());
      },
      [](const Row& r) { return r.variant + "+" + r.detector; },
      [&](const Row& r) { return what == 0 ? r.air_bits : (what == 1 ? r.ber : r.outage); },
      [&](const Row& r) {
        return what == 0 ? r.air_stderr : (what == 1 ? ber_err(r) : outage_err(r));
      });
}

std::filesystem::path emit_spectrum(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "fig3.csv";
  std::ofstream out(path);
  out << "branch,frequency,psd_linear,psd_distortion\n";
  bool any = false;
  for (int i = 1;; ++i) {
    const auto branch_path = run_dir / ("spectrum_branch" + std::to_string(i) + ".csv");
    std::ifstream f(branch_path);
    if (!f) break;
    any = true;
    std::string line;
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
      if (!line.empty()) out << i << ',' << line << '\n';
    }
  }
  if (!any) {
    throw std::runtime_error("figure needs spectrum data; rerun with spectrum.enabled true");
  }
  return path;
}

std::filesystem::path emit_scatter(const std::filesystem::path& run_dir) {
  const auto src = run_dir / "scatter.csv";
  std::ifstream f(src);
  if (!f) {
    throw std::runtime_error("figure needs scatter data; rerun with scatter_dump true");
  }
  const auto path = run_dir / "fig8.csv";
  std::ofstream out(path);
  out << f.rdbuf();
  return path;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig3",  "fig5a", "fig5b", "fig6a", "fig6b",
                                               "fig7a", "fig7b", "fig8",  "fig9",  "fig10a",
                                               "fig10b"};
  return ids;
}

std::filesystem::path emit_figure(const std::filesystem::path& run_dir,
                                  const std::string& figure_id) {
  if (figure_id == "fig3") return emit_spectrum(run_dir);
  if (figure_id == "fig5a") return emit_vs_backoff(run_dir, figure_id, true);
  if (figure_id == "fig5b") return emit_vs_backoff(run_dir, figure_id, false);
  if (figure_id == "fig6a" || figure_id == "fig7a") return emit_vs_snr(run_dir, figure_id, true);
  if (figure_id == "fig6b" || figure_id == "fig7b") return emit_vs_snr(run_dir, figure_id, false);
  if (figure_id == "fig8") return emit_scatter(run_dir);
  if (figure_id == "fig9") return emit_per_detector(run_dir, figure_id, 2);
  if (figure_id == "fig10a") return emit_per_detector(run_dir, figure_id, 0);
  if (figure_id == "fig10b") return emit_per_detector(run_dir, figure_id, 1);
  throw std::invalid_argument("unknown figure id '" + figure_id + "'");
}

}  // namespace sclink
