#include "sclink/runner.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

#include "sclink/analysis.hpp"
#include "sclink/channel.hpp"
#include "sclink/detect.hpp"
#include "sclink/fdebank.hpp"
#include "sclink/pa.hpp"
#include "sclink/postdist.hpp"
#include "sclink/qam.hpp"
#include "sclink/txchain.hpp"

namespace sclink {

namespace {

std::vector<int> draw_ids(std::size_t n, int order, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> ids(n);
  for (auto& id : ids) id = static_cast<int>(rng.integer(static_cast<std::uint64_t>(order)));
  return ids;
}

// Mean output power over the cyclically-extended payload span.
double payload_power(const ComplexSignal& x, std::size_t n_ext_symbols, int mu) {
  const std::size_t begin = static_cast<std::size_t>(x.origin);
  const std::size_t count = n_ext_symbols * static_cast<std::size_t>(mu);
  if (begin + count > x.samples.size()) throw std::logic_error("payload window out of range");
  double acc = 0.0;
  for (std::size_t k = 0; k < count; ++k) acc += std::norm(x.samples[begin + k]);
  return acc / static_cast<double>(count);
}

struct PaContext {
  PaModel pa;
  double scale = 1.0;
  double es = 1.0;  // received symbol energy, mu * mean sample power
  bool linear = false;
};

BranchSet transmit(const cvec& points, const Scenario& sc, const PulseShape& pulse,
                   const PaContext& ctx, const ChannelRealization& ch, double n0,
                   std::uint64_t noise_seed) {
  const cvec ext = add_cyclic_extension(points, static_cast<int>(sc.n_cp),
                                        static_cast<int>(sc.n_cs));
  const ComplexSignal shaped = shape(ext, pulse);
  const ComplexSignal amplified = pa_apply(ctx.pa, shaped, ctx.scale);
  const ComplexSignal received = propagate(amplified, ch, NoiseSpec{n0, noise_seed});
  const ComplexSignal mf = matched_filter(received, pulse);
  return split_branches(mf, static_cast<int>(sc.mu), static_cast<int>(sc.n_cp),
                        static_cast<int>(points.size()));
}

struct ScalarFit {
  cplx beta{1.0, 0.0};
  double r = 1.0;
  double ft_air = 0.0;
};

ScalarFit fit_scalar(const cvec& pred_ft, const cvec& ft_points, const std::vector<int>& ft_ids,
                     const QamAlphabet& alphabet) {
  cplx num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t k = 0; k < pred_ft.size(); ++k) {
    num += std::conj(ft_points[k]) * pred_ft[k];
    den += std::norm(ft_points[k]);
  }
  ScalarFit f;
  f.beta = num / den;
  double acc = 0.0;
  for (std::size_t k = 0; k < pred_ft.size(); ++k) {
    acc += std::norm(pred_ft[k] - f.beta * ft_points[k]);
  }
  f.r = std::max(acc / static_cast<double>(pred_ft.size()), 1e-12);
  f.ft_air = gmi_air_scalar(pred_ft, ft_ids, f.beta, f.r, alphabet).bits;
  return f;
}

struct ComboAcc {
  GmiAccumulator air;
  std::uint64_t bit_errors = 0;
  std::uint64_t n_bits = 0;
  std::size_t n_symbols = 0;
  std::vector<double> block_air;
};

// Deterministic map key: (linear, variant order, detector order).
using ComboKey = std::tuple<int, int, int>;

struct TrainedModels {
  bool has_mm = false, has_volterra = false, has_gpr = false, has_nn = false;
  MmTable mm;
  VolterraModel volterra;
  BlueEnsemble gpr;
  NnModel nn;
  unsigned memory = 2;
};

cvec predict_variant(const TrainedModels& models, PostdistKind v, const cvec& z) {
  switch (v) {
    case PostdistKind::conventional: return z;
    case PostdistKind::volterra: return volterra_predict(models.volterra, z);
    case PostdistKind::gpr: return blue_predict(models.gpr, z);
    case PostdistKind::nn: return nn_predict(models.nn, z, static_cast<int>(models.memory));
    case PostdistKind::mm: break;
  }
  throw std::logic_error("predict_variant: table-based variant has no soft output");
}

std::string fmt_g(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

std::string results_csv_text(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "backoff_db,esn0_db,variant,detector,pa,air_bits,air_stderr,ber,ber_lo,ber_hi,"
        "bit_errors,n_bits,n_symbols,outage,n_blocks\n";
  for (const auto& r : rows) {
    os << fmt_g(r.backoff_db) << ',' << fmt_g(r.esn0_db) << ',' << r.variant << ','
       << r.detector << ',' << r.pa << ',' << fmt_g(r.air.bits) << ','
       << fmt_g(r.air.std_error) << ',' << fmt_g(r.ber.ber) << ',' << fmt_g(r.ber.wilson_lo)
       << ',' << fmt_g(r.ber.wilson_hi) << ',' << r.ber.bit_errors << ',' << r.ber.n_bits << ','
       << r.n_symbols << ',';
    if (r.outage >= 0.0) os << fmt_g(r.outage);
    os << ',' << r.n_blocks << '\n';
  }
  return os.str();
}

RunOutput run_scenario(const Scenario& scenario_in, const RunOptions& opts) {
  Scenario sc = scenario_in;
  if (opts.seed_override) sc.seed = *opts.seed_override;
  if (opts.trials_override) sc.n_blocks = *opts.trials_override;
  if (!opts.variant_filter.empty()) {
    std::vector<PostdistKind> keep;
    for (const auto& name : opts.variant_filter) {
      const PostdistKind k = postdist_from_string(name);
      if (std::find(sc.variants.begin(), sc.variants.end(), k) == sc.variants.end()) {
        throw std::invalid_argument("variant filter names '" + name +
                                    "' which the scenario does not include");
      }
      if (std::find(keep.begin(), keep.end(), k) == keep.end()) keep.push_back(k);
    }
    // preserve the scenario's ordering
    std::vector<PostdistKind> ordered;
    for (PostdistKind k : sc.variants) {
      if (std::find(keep.begin(), keep.end(), k) != keep.end()) ordered.push_back(k);
    }
    sc.variants = ordered;
  }
  sc.validate();

  const QamAlphabet alphabet = make_qam(static_cast<int>(sc.qam_order));
  const PulseShape pulse =
      design_rrc(sc.rrc_rolloff, static_cast<int>(sc.rrc_span), static_cast<int>(sc.mu));
  const std::uint64_t master = sc.seed;
  const std::size_t n_ext_st = sc.n_cp + sc.n_st + sc.n_cs;
  const int span_symbols = static_cast<int>(sc.pdp_span_symbols);

  const bool want_mm =
      std::find(sc.variants.begin(), sc.variants.end(), PostdistKind::mm) != sc.variants.end();
  const bool want_volt = std::find(sc.variants.begin(), sc.variants.end(),
                                   PostdistKind::volterra) != sc.variants.end();
  const bool want_gpr =
      std::find(sc.variants.begin(), sc.variants.end(), PostdistKind::gpr) != sc.variants.end();
  const bool want_nn =
      std::find(sc.variants.begin(), sc.variants.end(), PostdistKind::nn) != sc.variants.end();

  RunOutput out;
  out.dir = opts.out_dir;
  if (opts.write_files) std::filesystem::create_directories(out.dir);

  std::ostringstream scatter;
  bool scatter_written = false;

  for (std::size_t b = 0; b < sc.backoff_db.size(); ++b) {
    // --- one-time training pass for this amplifier operating point ---
    const std::vector<int> st_ids =
        draw_ids(sc.n_st, alphabet.order, derive_seed(master, "st-syms", b));
    const cvec st_points = points_of(alphabet, st_ids);
    const cvec st_ext = add_cyclic_extension(st_points, static_cast<int>(sc.n_cp),
                                             static_cast<int>(sc.n_cs));
    const ComplexSignal st_shaped = shape(st_ext, pulse);

    PaContext nl;
    nl.pa = sc.pa;
    if (std::holds_alternative<LinearPa>(sc.pa)) {
      nl.scale = 1.0;
    } else {
      nl.scale = set_backoff(st_shaped.samples, sc.pa, sc.backoff_db[b]).scale;
    }
    {
      const ComplexSignal st_amp = pa_apply(nl.pa, st_shaped, nl.scale);
      nl.es = static_cast<double>(sc.mu) * payload_power(st_amp, n_ext_st, static_cast<int>(sc.mu));
    }

    PaContext lin;
    lin.pa = LinearPa{};
    lin.scale = nl.scale;
    lin.linear = true;
    {
      const ComplexSignal st_lin = pa_apply(lin.pa, st_shaped, lin.scale);
      lin.es = static_cast<double>(sc.mu) * payload_power(st_lin, n_ext_st, static_cast<int>(sc.mu));
    }

    const ChannelRealization st_channel =
        draw_channel(ChannelProfile::kAwgn, 1, static_cast<int>(sc.mu),
                     derive_seed(master, "st-channel", b));
    const double st_n0 = nl.es * undb10(-sc.st_esn0_db);
    const BranchSet st_branches = transmit(st_points, sc, pulse, nl, st_channel, st_n0,
                                           derive_seed(master, "st-noise", b));
    cvec z_st = st_branches.branches[0];
    {
      // one complex scalar aligns the training stream with the constellation
      cplx num{0.0, 0.0};
      double den = 0.0;
      for (std::size_t k = 0; k < z_st.size(); ++k) {
        num += std::conj(st_points[k]) * z_st[k];
        den += std::norm(st_points[k]);
      }
      const cplx gain = num / den;
      for (auto& z : z_st) z /= gain;
    }

    TrainedModels models;
    models.memory = sc.memory_m;
    if (want_mm) {
      models.mm = mm_fit(z_st, st_ids, alphabet);
      models.has_mm = true;
    }
    if (want_volt) {
      models.volterra = volterra_fit(z_st, st_points, static_cast<int>(sc.memory_m));
      models.has_volterra = true;
    }
    if (want_gpr) {
      const std::size_t keep = sc.gpr_segments * sc.gpr_segment_len;
      const cvec z_head(z_st.begin(), z_st.begin() + static_cast<std::ptrdiff_t>(keep));
      const cvec a_head(st_points.begin(), st_points.begin() + static_cast<std::ptrdiff_t>(keep));
      models.gpr = blue_fit(z_head, a_head, static_cast<int>(sc.memory_m),
                            static_cast<int>(sc.gpr_segments));
      models.has_gpr = true;
    }
    if (want_nn) {
      const Eigen::MatrixXd inputs = build_regressor_block(z_st, static_cast<int>(sc.memory_m));
      Eigen::MatrixXd targets(static_cast<Eigen::Index>(sc.n_st), 2);
      for (std::size_t k = 0; k < sc.n_st; ++k) {
        targets(static_cast<Eigen::Index>(k), 0) = st_points[k].real();
        targets(static_cast<Eigen::Index>(k), 1) = st_points[k].imag();
      }
      models.nn = nn_init(static_cast<int>(sc.nn_hidden), static_cast<int>(inputs.cols()),
                          derive_seed(master, "nn-init", b));
      NnTrainOptions topt;
      topt.max_epochs = static_cast<int>(sc.nn_epochs);
      nn_train(models.nn, inputs, targets, topt);
      models.has_nn = true;
    }

    if (opts.write_files && sc.save_models && b == 0) {
      auto dump = [&](const std::string& name, auto const& model) {
        std::ofstream f(out.dir / name);
        save_model(f, model);
        out.files.push_back(name);
      };
      if (models.has_mm) dump("model_mm.txt", models.mm);
      if (models.has_volterra) dump("model_volterra.txt", models.volterra);
      if (models.has_gpr) dump("model_gpr.txt", models.gpr);
      if (models.has_nn) dump("model_nn.txt", models.nn);
    }

    if (opts.write_files && sc.spectrum_report && b == 0) {
      const std::vector<int> sp_ids = draw_ids(sc.spectrum_symbols, alphabet.order,
                                               derive_seed(master, "spectrum-syms", b));
      const ChannelRealization sp_ch =
          draw_channel(sc.profile, span_symbols, static_cast<int>(sc.mu),
                       derive_seed(master, "channel", 0, 0, 0));
      const int welch = static_cast<int>(std::min<std::size_t>(256, sc.spectrum_symbols / 4));
      const DistortionSpectrum ds = distortion_spectrum_report(
          points_of(alphabet, sp_ids), pulse, nl.pa, nl.scale, sp_ch,
          static_cast<int>(sc.n_cp), static_cast<int>(sc.n_cs), welch);
      for (std::size_t i = 0; i < ds.psd_linear.size(); ++i) {
        const std::string name = "spectrum_branch" + std::to_string(i + 1) + ".csv";
        std::ofstream f(out.dir / name);
        f << "frequency,psd_linear,psd_distortion\n";
        for (std::size_t k = 0; k < ds.freq.size(); ++k) {
          f << fmt_g(ds.freq[k]) << ',' << fmt_g(ds.psd_linear[i][k]) << ','
            << fmt_g(ds.psd_distortion[i][k]) << '\n';
        }
        out.files.push_back(name);
      }
    }

    // --- sweep over noise levels ---
    for (std::size_t e = 0; e < sc.esn0_db.size(); ++e) {
      std::map<ComboKey, ComboAcc> accs;
      auto acc_of = [&](bool linear, std::size_t vi, std::size_t di) -> ComboAcc& {
        return accs[ComboKey{linear ? 1 : 0, static_cast<int>(vi), static_cast<int>(di)}];
      };

      for (std::size_t blk = 0; blk < sc.n_blocks; ++blk) {
        const ChannelRealization ch =
            draw_channel(sc.profile, span_symbols, static_cast<int>(sc.mu),
                         derive_seed(master, "channel", 0, 0, blk));
        const std::vector<int> ft_ids =
            draw_ids(sc.n_ft, alphabet.order, derive_seed(master, "ft-syms", 0, 0, blk));
        const cvec ft_points = points_of(alphabet, ft_ids);
        const std::vector<int> data_ids =
            draw_ids(sc.n_data, alphabet.order, derive_seed(master, "data-syms", 0, 0, blk));
        const cvec data_points = points_of(alphabet, data_ids);

        struct Equalized {
          std::vector<cvec> ft;    // per branch
          std::vector<cvec> data;  // per branch
        };
        auto equalize = [&](const PaContext& ctx) {
          const double n0 = ctx.es * undb10(-sc.esn0_db[e]);
          const BranchSet ft_b =
              transmit(ft_points, sc, pulse, ctx, ch, n0,
                       derive_seed(master, "ft-noise", 0, 0, blk));
          const BranchSet data_b =
              transmit(data_points, sc, pulse, ctx, ch, n0,
                       derive_seed(master, "data-noise", 0, 0, blk));
          Equalized eq;
          eq.ft.resize(sc.mu);
          eq.data.resize(sc.mu);
          for (unsigned i = 0; i < sc.mu; ++i) {
            const SymbolRateCsi csi =
                ls_estimate(ft_points, ft_b.branches[i], sc.csi_lb, sc.csi_lf,
                            static_cast<int>(sc.n_cp), static_cast<int>(sc.n_cs));
            eq.ft[i] = fde_equalize(ft_b.branches[i], csi, n0);
            eq.data[i] = fde_equalize(data_b.branches[i], csi, n0);
          }
          return eq;
        };

        const Equalized eq = equalize(nl);

        for (std::size_t vi = 0; vi < sc.variants.size(); ++vi) {
          const PostdistKind v = sc.variants[vi];

          if (v == PostdistKind::mm) {
            // Table lookup correction: soft symbols never materialize, so the
            // combiner detector is not applicable and the branch score uses the
            // table metric directly.
            std::vector<cvec> norm_ft(sc.mu), norm_data(sc.mu);
            std::vector<double> r_of(sc.mu, 0.0);
            std::vector<double> ft_air(sc.mu, 0.0);
            std::vector<bool> ready(sc.mu, false);
            Eigen::ArrayXd neg_metric(alphabet.order);
            auto mm_prepare = [&](unsigned i) {
              if (ready[i]) return;
              ScalarFit f = fit_scalar(eq.ft[i], ft_points, ft_ids, alphabet);
              norm_ft[i].resize(sc.n_ft);
              for (std::size_t k = 0; k < sc.n_ft; ++k) norm_ft[i][k] = eq.ft[i][k] / f.beta;
              norm_data[i].resize(sc.n_data);
              for (std::size_t k = 0; k < sc.n_data; ++k) norm_data[i][k] = eq.data[i][k] / f.beta;
              double racc = 0.0;
              for (std::size_t k = 0; k < sc.n_ft; ++k) {
                const cplx a = ft_points[k];
                racc += std::norm(norm_ft[i][k] -
                                  models.mm.varpi[static_cast<std::size_t>(ft_ids[k])] * a);
              }
              r_of[i] = std::max(racc / static_cast<double>(sc.n_ft), 1e-12);
              GmiAccumulator facc;
              for (std::size_t k = 0; k < sc.n_ft; ++k) {
                for (int id = 0; id < alphabet.order; ++id) {
                  neg_metric(id) = -std::norm(norm_ft[i][k] -
                                              models.mm.varpi[static_cast<std::size_t>(id)] *
                                                  alphabet.points[static_cast<std::size_t>(id)]) /
                                   r_of[i];
                }
                facc.add(gmi_sample_term(neg_metric, ft_ids[k]));
              }
              ft_air[i] = facc.estimate(static_cast<unsigned>(alphabet.order)).bits;
              ready[i] = true;
            };
            auto mm_run = [&](unsigned i, ComboAcc& acc) {
              GmiAccumulator block_acc;
              for (std::size_t k = 0; k < sc.n_data; ++k) {
                for (int id = 0; id < alphabet.order; ++id) {
                  neg_metric(id) = -std::norm(norm_data[i][k] -
                                              models.mm.varpi[static_cast<std::size_t>(id)] *
                                                  alphabet.points[static_cast<std::size_t>(id)]) /
                                   r_of[i];
                }
                block_acc.add(gmi_sample_term(neg_metric, data_ids[k]));
              }
              acc.air.merge(block_acc);
              acc.block_air.push_back(
                  block_acc.estimate(static_cast<unsigned>(alphabet.order)).bits);
              const std::vector<int> dec = mm_detect(models.mm, alphabet, norm_data[i]);
              acc.bit_errors += count_bit_errors(dec, data_ids, alphabet);
              acc.n_bits += static_cast<std::uint64_t>(sc.n_data) *
                            static_cast<std::uint64_t>(alphabet.bits_per_symbol);
              acc.n_symbols += sc.n_data;
            };
            for (std::size_t di = 0; di < sc.detectors.size(); ++di) {
              const DetectorKind d = sc.detectors[di];
              if (d == DetectorKind::dassd) continue;
              if (d == DetectorKind::nominal) {
                mm_prepare(0);
                mm_run(0, acc_of(false, vi, di));
              } else {
                for (unsigned i = 0; i < sc.mu; ++i) mm_prepare(i);
                unsigned ib = 0;
                for (unsigned i = 1; i < sc.mu; ++i) {
                  if (ft_air[i] > ft_air[ib]) ib = i;
                }
                mm_run(ib, acc_of(false, vi, di));
              }
            }
            continue;
          }

          std::vector<cvec> pred_ft(sc.mu), pred_data(sc.mu);
          std::vector<bool> have_ft(sc.mu, false), have_data(sc.mu, false);
          auto ft_of = [&](unsigned i) -> const cvec& {
            if (!have_ft[i]) {
              pred_ft[i] = predict_variant(models, v, eq.ft[i]);
              have_ft[i] = true;
            }
            return pred_ft[i];
          };
          auto data_of = [&](unsigned i) -> const cvec& {
            if (!have_data[i]) {
              pred_data[i] = predict_variant(models, v, eq.data[i]);
              have_data[i] = true;
            }
            return pred_data[i];
          };

          auto run_scalar = [&](unsigned i, ComboAcc& acc) {
            const ScalarFit f = fit_scalar(ft_of(i), ft_points, ft_ids, alphabet);
            GmiAccumulator block_acc;
            gmi_accumulate_scalar(block_acc, data_of(i), data_ids, f.beta, f.r, alphabet);
            acc.air.merge(block_acc);
            acc.block_air.push_back(
                block_acc.estimate(static_cast<unsigned>(alphabet.order)).bits);
            cvec unbiased(sc.n_data);
            for (std::size_t k = 0; k < sc.n_data; ++k) unbiased[k] = data_of(i)[k] / f.beta;
            const std::vector<int> dec = conventional_detect(unbiased, alphabet);
            acc.bit_errors += count_bit_errors(dec, data_ids, alphabet);
            acc.n_bits += static_cast<std::uint64_t>(sc.n_data) *
                          static_cast<std::uint64_t>(alphabet.bits_per_symbol);
            acc.n_symbols += sc.n_data;
          };

          for (std::size_t di = 0; di < sc.detectors.size(); ++di) {
            const DetectorKind d = sc.detectors[di];
            ComboAcc& acc = acc_of(false, vi, di);
            if (d == DetectorKind::nominal) {
              run_scalar(0, acc);
            } else if (d == DetectorKind::best) {
              unsigned ib = 0;
              double best_air = -1.0;
              for (unsigned i = 0; i < sc.mu; ++i) {
                const ScalarFit f = fit_scalar(ft_of(i), ft_points, ft_ids, alphabet);
                if (f.ft_air > best_air) {
                  best_air = f.ft_air;
                  ib = i;
                }
              }
              run_scalar(ib, acc);
            } else {
              std::vector<cvec> all_ft(sc.mu), all_data(sc.mu);
              for (unsigned i = 0; i < sc.mu; ++i) {
                all_ft[i] = ft_of(i);
                all_data[i] = data_of(i);
              }
              const DetectorParams params = train_dassd(all_ft, ft_points);
              GmiAccumulator block_acc;
              gmi_accumulate(block_acc, all_data, data_ids, params, alphabet);
              acc.air.merge(block_acc);
              acc.block_air.push_back(
                  block_acc.estimate(static_cast<unsigned>(alphabet.order)).bits);
              const std::vector<int> dec = dassd_detect(params, all_data, alphabet);
              acc.bit_errors += count_bit_errors(dec, data_ids, alphabet);
              acc.n_bits += static_cast<std::uint64_t>(sc.n_data) *
                            static_cast<std::uint64_t>(alphabet.bits_per_symbol);
              acc.n_symbols += sc.n_data;
            }
          }

        }

        if (sc.scatter_dump && b == 0 && e == 0 && blk == 0 && !scatter_written) {
          scatter << "stage,point_id,re,im\n";
          const ScalarFit f0 = fit_scalar(eq.ft[0], ft_points, ft_ids, alphabet);
          const std::size_t limit = std::min<std::size_t>(sc.n_data, 4096);
          for (std::size_t k = 0; k < limit; ++k) {
            const cplx z = eq.data[0][k] / f0.beta;
            scatter << "fde," << data_ids[k] << ',' << fmt_g(z.real()) << ',' << fmt_g(z.imag())
                    << '\n';
          }
          for (std::size_t vi = 0; vi < sc.variants.size(); ++vi) {
            const PostdistKind v = sc.variants[vi];
            if (v == PostdistKind::conventional || v == PostdistKind::mm) continue;
            const cvec pred = predict_variant(models, v, eq.data[0]);
            const cvec pred_ft0 = predict_variant(models, v, eq.ft[0]);
            const ScalarFit f = fit_scalar(pred_ft0, ft_points, ft_ids, alphabet);
            for (std::size_t k = 0; k < limit; ++k) {
              const cplx z = pred[k] / f.beta;
              scatter << to_string(v) << ',' << data_ids[k] << ',' << fmt_g(z.real()) << ','
                      << fmt_g(z.imag()) << '\n';
            }
          }
          scatter_written = true;
        }

        if (sc.linear_reference) {
          const Equalized leq = equalize(lin);
          ComboAcc& acc = acc_of(true, 0, 0);
          const ScalarFit f = fit_scalar(leq.ft[0], ft_points, ft_ids, alphabet);
          GmiAccumulator block_acc;
          gmi_accumulate_scalar(block_acc, leq.data[0], data_ids, f.beta, f.r, alphabet);
          acc.air.merge(block_acc);
          acc.block_air.push_back(block_acc.estimate(static_cast<unsigned>(alphabet.order)).bits);
          cvec unbiased(sc.n_data);
          for (std::size_t k = 0; k < sc.n_data; ++k) unbiased[k] = leq.data[0][k] / f.beta;
          const std::vector<int> dec = conventional_detect(unbiased, alphabet);
          acc.bit_errors += count_bit_errors(dec, data_ids, alphabet);
          acc.n_bits += static_cast<std::uint64_t>(sc.n_data) *
                        static_cast<std::uint64_t>(alphabet.bits_per_symbol);
          acc.n_symbols += sc.n_data;
        }
      }

      // --- rows for this sweep point, fixed order ---
      auto emit_row = [&](bool linear, std::size_t vi, std::size_t di, const std::string& vname,
                          const std::string& dname) {
        const auto it = accs.find(ComboKey{linear ? 1 : 0, static_cast<int>(vi),
                                           static_cast<int>(di)});
        if (it == accs.end()) return;
        const ComboAcc& acc = it->second;
        ResultRow row;
        row.backoff_db = sc.backoff_db[b];
        row.esn0_db = sc.esn0_db[e];
        row.variant = vname;
        row.detector = dname;
        row.pa = linear ? "linear" : "nonlinear";
        row.air = acc.air.estimate(sc.qam_order);
        row.ber = wilson_interval(acc.bit_errors, acc.n_bits);
        row.n_symbols = acc.n_symbols;
        row.n_blocks = acc.block_air.size();
        if (sc.outage_threshold_bits > 0.0) {
          row.outage = outage_probability(acc.block_air, sc.outage_threshold_bits).p_out;
        }
        out.rows.push_back(row);
      };
      for (std::size_t vi = 0; vi < sc.variants.size(); ++vi) {
        for (std::size_t di = 0; di < sc.detectors.size(); ++di) {
          emit_row(false, vi, di, to_string(sc.variants[vi]), to_string(sc.detectors[di]));
        }
      }
      if (sc.linear_reference) emit_row(true, 0, 0, "conventional", "nominal");
    }
  }

  if (opts.write_files) {
    {
      std::ofstream f(out.dir / "results.csv");
      f << results_csv_text(out.rows);
      out.files.insert(out.files.begin(), "results.csv");
    }
    if (scatter_written) {
      std::ofstream f(out.dir / "scatter.csv");
      f << scatter.str();
      out.files.push_back("scatter.csv");
    }
    {
      std::ostringstream m;
      m << "tool=sclink 1.0.0\n";
      m << "config_hash=" << std::hex << std::setw(16) << std::setfill('0') << config_hash(sc)
        << std::dec << "\n";
      m << "seed=" << sc.seed << "\n";
      m << "trials=" << sc.n_blocks << "\n";
      m << "variant_filter=";
      if (opts.variant_filter.empty()) {
        m << "(none)";
      } else {
        for (std::size_t i = 0; i < opts.variant_filter.size(); ++i) {
          m << (i ? "," : "") << opts.variant_filter[i];
        }
      }
      m << "\n";
      m << "eigen=" << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
        << EIGEN_MINOR_VERSION << "\n";
      m << "fftw=" << fftw_version << "\n";
      m << "compiler=" << __VERSION__ << "\n";
      m << "files=";
      for (std::size_t i = 0; i < out.files.size(); ++i) m << (i ? "," : "") << out.files[i];
      m << "\nconfig:\n";
      std::istringstream cfg(canonical_config_text(sc));
      std::string line;
      while (std::getline(cfg, line)) m << "  " << line << "\n";
      std::ofstream f(out.dir / "manifest.txt");
      f << m.str();
      out.files.push_back("manifest.txt");
    }
  }
  return out;
}

}  // namespace sclink
