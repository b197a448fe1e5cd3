#include "sclink/postdist.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace sclink {

Eigen::VectorXd build_regressor(const cvec& z, int n, int memory) {
  const int len = static_cast<int>(z.size());
  if (len == 0) throw std::invalid_argument("regressor: empty block");
  if (memory < 1) throw std::invalid_argument("regressor: memory must be >= 1");
  if (n < 0 || n >= len) throw std::invalid_argument("regressor: index outside block");

  const int width = 2 * memory - 1;
  Eigen::VectorXd out(2 * width);
  for (int t = 0; t < width; ++t) {
    // t = 0 is the most advanced tap z_{n+M-1}.
    int idx = (n + memory - 1 - t) % len;
    if (idx < 0) idx += len;
    out(t) = z[idx].real();
    out(width + t) = z[idx].imag();
  }
  return out;
}

Eigen::MatrixXd build_regressor_block(const cvec& z, int memory) {
  const int len = static_cast<int>(z.size());
  const int width = 2 * memory - 1;
  Eigen::MatrixXd out(len, 2 * width);
  for (int n = 0; n < len; ++n) {
    for (int t = 0; t < width; ++t) {
      int idx = (n + memory - 1 - t) % len;
      if (idx < 0) idx += len;
      out(n, t) = z[idx].real();
      out(n, width + t) = z[idx].imag();
    }
  }
  return out;
}

double blue_fuse(const std::vector<double>& means, const std::vector<double>& variances,
                 std::vector<double>* weights) {
  if (means.empty() || means.size() != variances.size())
    throw std::invalid_argument("blue: size mismatch");
  double norm = 0.0;
  for (double v : variances) {
    if (v <= 0.0) throw std::invalid_argument("blue: nonpositive variance");
    norm += 1.0 / v;
  }
  double fused = 0.0;
  if (weights) weights->resize(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double w = (1.0 / variances[i]) / norm;
    if (weights) (*weights)[i] = w;
    fused += w * means[i];
  }
  return fused;
}

BlueEnsemble blue_fit(const cvec& z_st, const cvec& a_st, int memory, int n_segments,
                      const GprFitOptions& opts) {
  const int n = static_cast<int>(z_st.size());
  if (n == 0 || z_st.size() != a_st.size())
    throw std::invalid_argument("blue fit: training length mismatch");
  if (n_segments < 1 || n % n_segments != 0)
    throw std::invalid_argument("blue fit: training length not divisible into segments");
  const int seg_len = n / n_segments;
  const int d = 4 * memory - 2;
  if (n < n_segments * d * 10)
    throw std::invalid_argument("blue fit: training set too small for segment count");

  const Eigen::MatrixXd all = build_regressor_block(z_st, memory);

  BlueEnsemble ens;
  ens.memory = memory;
  for (int comp = 0; comp < 2; ++comp) {
    auto& segs = comp == 0 ? ens.seg_i : ens.seg_q;
    GprFitOptions seg_opts = opts;
    for (int s = 0; s < n_segments; ++s) {
      const Eigen::MatrixXd z_seg = all.middleRows(s * seg_len, seg_len);
      Eigen::VectorXd t_seg(seg_len);
      for (int r = 0; r < seg_len; ++r) {
        const cplx a = a_st[s * seg_len + r];
        t_seg(r) = comp == 0 ? a.real() : a.imag();
      }
      segs.push_back(gpr_fit(z_seg, t_seg, seg_opts));
      if (s == 0) {
        // Noise level is estimated once per component and then frozen.
        seg_opts.fit_sigma_nu = false;
        seg_opts.fixed_sigma_nu = segs.front().sigma_nu;
      }
    }
  }
  return ens;
}

cvec blue_predict(const BlueEnsemble& ens, const cvec& z_block) {
  const int m = static_cast<int>(z_block.size());
  if (m == 0) throw std::invalid_argument("blue predict: empty block");
  const Eigen::MatrixXd z_test = build_regressor_block(z_block, ens.memory);
  const int n_seg = static_cast<int>(ens.seg_i.size());

  Eigen::MatrixXd mean_i(m, n_seg), var_i(m, n_seg), mean_q(m, n_seg), var_q(m, n_seg);
  Eigen::VectorXd mu, var;
  for (int s = 0; s < n_seg; ++s) {
    gpr_predict(ens.seg_i[s], z_test, &mu, &var);
    mean_i.col(s) = mu;
    var_i.col(s) = var;
    gpr_predict(ens.seg_q[s], z_test, &mu, &var);
    mean_q.col(s) = mu;
    var_q.col(s) = var;
  }

  cvec out(m);
  for (int r = 0; r < m; ++r) {
    double wi = 0.0, wq = 0.0, fi = 0.0, fq = 0.0;
    for (int s = 0; s < n_seg; ++s) {
      const double inv_i = 1.0 / var_i(r, s);
      const double inv_q = 1.0 / var_q(r, s);
      wi += inv_i;
      wq += inv_q;
      fi += inv_i * mean_i(r, s);
      fq += inv_q * mean_q(r, s);
    }
    out[r] = {fi / wi, fq / wq};
  }
  return out;
}

VolterraModel volterra_fit(const cvec& z_st, const cvec& a_st, int memory) {
  const int n = static_cast<int>(z_st.size());
  if (n == 0 || z_st.size() != a_st.size())
    throw std::invalid_argument("volterra fit: training length mismatch");
  if (memory < 1) throw std::invalid_argument("volterra fit: memory must be >= 1");
  const int width = 2 * memory - 1;
  const int n_terms = width + width * width;
  if (n < 4 * n_terms) throw std::invalid_argument("volterra fit: too few training samples");

  auto z_at = [&](int idx) {
    idx %= n;
    if (idx < 0) idx += n;
    return z_st[idx];
  };

  Eigen::MatrixXcd phi(n, n_terms);
  for (int r = 0; r < n; ++r) {
    int col = 0;
    for (int k = -(memory - 1); k <= memory - 1; ++k) phi(r, col++) = z_at(r - k);
    for (int k = -(memory - 1); k <= memory - 1; ++k)
      for (int l = -(memory - 1); l <= memory - 1; ++l)
        phi(r, col++) = z_at(r - k) * std::norm(z_at(r - l));
  }
  Eigen::VectorXcd y(n);
  for (int r = 0; r < n; ++r) y(r) = a_st[r];

  const Eigen::VectorXcd coef =
      (phi.adjoint() * phi).ldlt().solve(phi.adjoint() * y);

  VolterraModel m;
  m.memory = memory;
  m.linear.assign(coef.data(), coef.data() + width);
  m.cubic.assign(coef.data() + width, coef.data() + n_terms);
  return m;
}

cvec volterra_predict(const VolterraModel& m, const cvec& z_block) {
  const int n = static_cast<int>(z_block.size());
  if (n == 0) throw std::invalid_argument("volterra predict: empty block");
  auto z_at = [&](int idx) {
    idx %= n;
    if (idx < 0) idx += n;
    return z_block[idx];
  };
  cvec out(n, cplx{0.0, 0.0});
  for (int r = 0; r < n; ++r) {
    cplx acc{0.0, 0.0};
    int col = 0;
    for (int k = -(m.memory - 1); k <= m.memory - 1; ++k) acc += m.linear[col++] * z_at(r - k);
    col = 0;
    for (int k = -(m.memory - 1); k <= m.memory - 1; ++k)
      for (int l = -(m.memory - 1); l <= m.memory - 1; ++l)
        acc += m.cubic[col++] * z_at(r - k) * std::norm(z_at(r - l));
    out[r] = acc;
  }
  return out;
}

MmTable mm_fit(const cvec& z_st, const std::vector<int>& ids, const QamAlphabet& alphabet,
               int min_hits) {
  const int n = static_cast<int>(z_st.size());
  if (n == 0 || z_st.size() != ids.size())
    throw std::invalid_argument("mm fit: training length mismatch");

  std::vector<cplx> sum(alphabet.order, cplx{0.0, 0.0});
  std::vector<int> hits(alphabet.order, 0);
  for (int r = 0; r < n; ++r) {
    const int id = ids[r];
    if (id < 0 || id >= alphabet.order) throw std::invalid_argument("mm fit: id out of range");
    sum[id] += z_st[r] / alphabet.points[id];
    ++hits[id];
  }

  std::vector<int> ring_of_point;
  amplitude_rings(alphabet, &ring_of_point);
  const int n_rings = 1 + *std::max_element(ring_of_point.begin(), ring_of_point.end());
  std::vector<cplx> ring_sum(n_rings, cplx{0.0, 0.0});
  std::vector<int> ring_hits(n_rings, 0);
  for (int id = 0; id < alphabet.order; ++id) {
    ring_sum[ring_of_point[id]] += sum[id];
    ring_hits[ring_of_point[id]] += hits[id];
  }

  MmTable t;
  t.order = alphabet.order;
  t.varpi.resize(alphabet.order);
  for (int id = 0; id < alphabet.order; ++id) {
    if (hits[id] >= min_hits) {
      t.varpi[id] = sum[id] / static_cast<double>(hits[id]);
    } else {
      const int ring = ring_of_point[id];
      if (ring_hits[ring] < min_hits)
        throw std::invalid_argument("mm fit: constellation bin empty even after ring pooling");
      t.varpi[id] = ring_sum[ring] / static_cast<double>(ring_hits[ring]);
    }
  }
  return t;
}

int mm_detect_one(const MmTable& t, const QamAlphabet& alphabet, cplx z) {
  if (t.order != alphabet.order) throw std::invalid_argument("mm detect: table order mismatch");
  int best = 0;
  double best_metric = std::norm(z - t.varpi[0] * alphabet.points[0]);
  for (int id = 1; id < alphabet.order; ++id) {
    const double metric = std::norm(z - t.varpi[id] * alphabet.points[id]);
    if (metric < best_metric) {
      best_metric = metric;
      best = id;
    }
  }
  return best;
}

std::vector<int> mm_detect(const MmTable& t, const QamAlphabet& alphabet, const cvec& z) {
  std::vector<int> out(z.size());
  for (std::size_t r = 0; r < z.size(); ++r) out[r] = mm_detect_one(t, alphabet, z[r]);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kMagic = "sclink-postdist";
constexpr int kVersion = 1;

void write_header(std::ostream& os, const char* type) {
  os << kMagic << " v" << kVersion << "\ntype " << type << "\n";
  os.precision(17);
}

void expect_header(std::istream& is, const char* type) {
  std::string magic, version, key, got;
  is >> magic >> version >> key >> got;
  if (magic != kMagic || version != "v1" || key != "type")
    throw std::invalid_argument("model load: bad header");
  if (got != type)
    throw std::invalid_argument("model load: expected type " + std::string(type) + ", got " + got);
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  os << m.rows() << " " << m.cols();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << " " << m(r, c);
  os << "\n";
}

Eigen::MatrixXd read_matrix(std::istream& is) {
  Eigen::Index rows, cols;
  is >> rows >> cols;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) is >> m(r, c);
  return m;
}

void write_cvec(std::ostream& os, const cvec& v) {
  os << v.size();
  for (const cplx& x : v) os << " " << x.real() << " " << x.imag();
  os << "\n";
}

cvec read_cvec(std::istream& is) {
  std::size_t n;
  is >> n;
  cvec v(n);
  for (auto& x : v) {
    double re, im;
    is >> re >> im;
    x = {re, im};
  }
  return v;
}

void write_segment(std::ostream& os, const GprSegmentModel& s) {
  write_matrix(os, s.z_train);
  write_matrix(os, s.targets);
  os << s.sigma_f << " " << s.sigma_nu << "\n";
  write_matrix(os, s.length_scales);
}

GprSegmentModel rebuild_segment(std::istream& is);

}  // namespace

void save_model(std::ostream& os, const BlueEnsemble& m) {
  write_header(os, "gpr-blue");
  os << m.memory << " " << m.seg_i.size() << "\n";
  for (const auto& s : m.seg_i) write_segment(os, s);
  for (const auto& s : m.seg_q) write_segment(os, s);
}

void save_model(std::ostream& os, const NnModel& m) {
  write_header(os, "nn");
  os << m.w1.rows() << " " << m.w1.cols() << "\n";
  write_matrix(os, m.w1);
  write_matrix(os, m.b1);
  write_matrix(os, m.w2i);
  write_matrix(os, m.w2q);
  os << m.b2i << " " << m.b2q << "\n";
}

void save_model(std::ostream& os, const VolterraModel& m) {
  write_header(os, "volterra");
  os << m.memory << "\n";
  write_cvec(os, m.linear);
  write_cvec(os, m.cubic);
}

void save_model(std::ostream& os, const MmTable& m) {
  write_header(os, "mm");
  os << m.order << "\n";
  write_cvec(os, m.varpi);
}

std::string peek_model_type(std::istream& is) {
  const std::streampos pos = is.tellg();
  std::string magic, version, key, got;
  is >> magic >> version >> key >> got;
  is.seekg(pos);
  if (magic != kMagic || key != "type")
    throw std::invalid_argument("model load: bad header");
  return got;
}

namespace {
GprSegmentModel rebuild_segment(std::istream& is) {
  const Eigen::MatrixXd z = read_matrix(is);
  const Eigen::VectorXd targets = read_matrix(is);
  double sigma_f, sigma_nu;
  is >> sigma_f >> sigma_nu;
  const Eigen::VectorXd scales = read_matrix(is);
  return gpr_rebuild(z, targets, sigma_f, sigma_nu, scales);
}
}  // namespace

BlueEnsemble load_blue(std::istream& is) {
  expect_header(is, "gpr-blue");
  BlueEnsemble m;
  std::size_t n_seg;
  is >> m.memory >> n_seg;
  for (std::size_t s = 0; s < n_seg; ++s) m.seg_i.push_back(rebuild_segment(is));
  for (std::size_t s = 0; s < n_seg; ++s) m.seg_q.push_back(rebuild_segment(is));
  return m;
}

NnModel load_nn(std::istream& is) {
  expect_header(is, "nn");
  Eigen::Index hidden, dim;
  is >> hidden >> dim;
  NnModel m;
  m.w1 = read_matrix(is);
  m.b1 = read_matrix(is);
  m.w2i = read_matrix(is);
  m.w2q = read_matrix(is);
  is >> m.b2i >> m.b2q;
  if (m.w1.rows() != hidden || m.w1.cols() != dim)
    throw std::invalid_argument("model load: nn shape mismatch");
  return m;
}

VolterraModel load_volterra(std::istream& is) {
  expect_header(is, "volterra");
  VolterraModel m;
  is >> m.memory;
  m.linear = read_cvec(is);
  m.cubic = read_cvec(is);
  return m;
}

MmTable load_mm(std::istream& is) {
  expect_header(is, "mm");
  MmTable m;
  is >> m.order;
  m.varpi = read_cvec(is);
  return m;
}

}  // namespace sclink
