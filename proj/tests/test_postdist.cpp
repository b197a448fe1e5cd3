#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sclink/postdist.hpp"
#include "sclink/rng.hpp"

using namespace sclink;

TEST_CASE("regressor window layout and cyclic wrap") {
  const cvec z = {{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  const auto r0 = build_regressor(z, 0, 2);
  REQUIRE(r0.size() == 6);
  // [Re z_1, Re z_0, Re z_-1(wrap: z_3), Im z_1, Im z_0, Im z_3]
  CHECK(r0(0) == 3.0);
  CHECK(r0(1) == 1.0);
  CHECK(r0(2) == 7.0);
  CHECK(r0(3) == 4.0);
  CHECK(r0(4) == 2.0);
  CHECK(r0(5) == 8.0);

  const auto r3 = build_regressor(z, 3, 2);
  CHECK(r3(0) == 1.0);  // z_4 wraps to z_0
  CHECK(r3(1) == 7.0);
  CHECK(r3(2) == 5.0);

  const auto block = build_regressor_block(z, 2);
  REQUIRE(block.rows() == 4);
  REQUIRE(block.cols() == 6);
  for (int n = 0; n < 4; ++n) CHECK((block.row(n).transpose() - build_regressor(z, n, 2)).norm() == 0.0);

  CHECK_THROWS(build_regressor(z, 4, 2));
  CHECK_THROWS(build_regressor(z, 0, 0));
  CHECK_THROWS(build_regressor(cvec{}, 0, 2));

  const auto r1 = build_regressor(z, 1, 1);
  REQUIRE(r1.size() == 2);
  CHECK(r1(0) == 3.0);
  CHECK(r1(1) == 4.0);
}

TEST_CASE("gaussian process interpolates a smooth curve") {
  const int n = 60;
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = -3.0 + 6.0 * i / (n - 1);
    y(i) = std::sin(1.7 * x(i, 0));
  }
  const auto m = gpr_fit(x, y, {});

  Eigen::MatrixXd probe(3, 1);
  probe << -1.234, 0.5, 2.2;
  Eigen::VectorXd mean, var;
  gpr_predict(m, probe, &mean, &var);
  for (int i = 0; i < 3; ++i) {
    CHECK(mean(i) == doctest::Approx(std::sin(1.7 * probe(i, 0))).epsilon(0.05));
  }
}

TEST_CASE("far from the data the prediction falls back to the prior") {
  const int n = 40;
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd y(n);
  Rng rng(3);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = rng.uniform();
    y(i) = 2.0 * x(i, 0) - 1.0;
  }
  const auto m = gpr_fit(x, y, {});

  Eigen::MatrixXd probe(1, 1);
  probe << 1e4;
  Eigen::VectorXd mean, var;
  gpr_predict(m, probe, &mean, &var);
  CHECK(std::abs(mean(0)) < 1e-6);  // zero-mean prior
  CHECK(var(0) == doctest::Approx(m.sigma_f * m.sigma_f + m.sigma_nu * m.sigma_nu).epsilon(1e-9));
}

TEST_CASE("predicted variance never drops below the fitted noise floor") {
  Rng rng(5);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int n = 80;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    Rng local(seed);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = local.gaussian();
      x(i, 1) = local.gaussian();
      y(i) = std::tanh(x(i, 0)) - 0.3 * x(i, 1) + 0.05 * local.gaussian();
    }
    const auto m = gpr_fit(x, y, {});
    Eigen::MatrixXd probe(n, 2);
    for (int i = 0; i < n; ++i) {
      probe(i, 0) = local.gaussian();
      probe(i, 1) = local.gaussian();
    }
    Eigen::VectorXd mean, var;
    gpr_predict(m, probe, &mean, &var);
    for (int i = 0; i < n; ++i) CHECK(var(i) >= m.sigma_nu * m.sigma_nu);
    // on the training points themselves the data shrinks the variance
    gpr_predict(m, x, &mean, &var);
    for (int i = 0; i < n; ++i) CHECK(var(i) < m.sigma_f * m.sigma_f + m.sigma_nu * m.sigma_nu);
  }
}

TEST_CASE("inverse-variance fusion matches the closed form") {
  std::vector<double> w;
  const double fused = blue_fuse({1.0, 1.0}, {1.0, 3.0}, &w);
  CHECK(fused == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-15));

  const double asym = blue_fuse({2.0, 6.0}, {0.5, 1.5});
  CHECK(asym == doctest::Approx((2.0 / 0.5 + 6.0 / 1.5) / (1.0 / 0.5 + 1.0 / 1.5)).epsilon(1e-15));

  CHECK_THROWS(blue_fuse({1.0}, {0.0}));
  CHECK_THROWS(blue_fuse({1.0}, {1.0, 2.0}));
  CHECK_THROWS(blue_fuse({}, {}));
}

TEST_CASE("fusion weights sum to one across random ensembles") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.integer(6));
    std::vector<double> means(k), vars(k), w;
    for (int i = 0; i < k; ++i) {
      means[i] = rng.gaussian();
      vars[i] = 0.1 + rng.uniform();
    }
    blue_fuse(means, vars, &w);
    double sum = 0.0;
    for (double wi : w) sum += wi;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("segmented ensemble learns a static nonlinearity") {
  Rng rng(9);
  const int n = 512;
  cvec a(n), z(n);
  for (int i = 0; i < n; ++i) {
    a[i] = rng.cgaussian(1.0);
    z[i] = a[i] * (1.0 + 0.15 * std::norm(a[i])) + rng.cgaussian(1e-4);
  }
  const auto ens = blue_fit(z, a, 2, 2, {});
  REQUIRE(ens.seg_i.size() == 2);
  REQUIRE(ens.seg_q.size() == 2);
  // the noise level is fitted once and reused across later segments
  CHECK(ens.seg_i[1].sigma_nu == ens.seg_i[0].sigma_nu);
  CHECK(ens.seg_q[1].sigma_nu == ens.seg_q[0].sigma_nu);

  const auto fixed = blue_predict(ens, z);
  double err_before = 0.0, err_after = 0.0;
  for (int i = 0; i < n; ++i) {
    err_before += std::norm(z[i] - a[i]);
    err_after += std::norm(fixed[i] - a[i]);
  }
  CHECK(err_after < 0.05 * err_before);

  CHECK_THROWS(blue_fit(z, a, 2, 3, {}));            // 512 not divisible by 3
  CHECK_THROWS(blue_fit(cvec(30), cvec(30), 2, 1, {}));  // too small
}

TEST_CASE("series model identifies its own coefficients exactly") {
  Rng rng(11);
  VolterraModel truth;
  truth.memory = 2;
  truth.linear = {cplx{0.05, -0.02}, cplx{1.0, 0.1}, cplx{-0.03, 0.06}};
  truth.cubic.assign(9, cplx{0.0, 0.0});
  truth.cubic[4] = {-0.2, -0.08};  // (k=0, l=0)
  truth.cubic[1] = {0.03, 0.01};   // (k=-1, l=0)
  truth.cubic[7] = {0.02, -0.04};  // (k=1, l=0)

  const cvec z = rng.cgaussian_vector(1024, 1.0);
  const cvec a = volterra_predict(truth, z);
  const auto fitted = volterra_fit(z, a, 2);

  REQUIRE(fitted.linear.size() == 3);
  REQUIRE(fitted.cubic.size() == 9);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(fitted.linear[i] - truth.linear[i]) < 1e-8);
  for (int i = 0; i < 9; ++i) CHECK(std::abs(fitted.cubic[i] - truth.cubic[i]) < 1e-8);

  CHECK_THROWS(volterra_fit(cvec(10), cvec(10), 2));  // too few samples
  CHECK_THROWS(volterra_fit(z, cvec(10), 2));
}

TEST_CASE("series fit never does worse than its linear subspace") {
  Rng rng(13);
  const int n = 2048;
  cvec a(n), z(n);
  for (int i = 0; i < n; ++i) {
    a[i] = rng.cgaussian(1.0);
    z[i] = a[i] + 0.2 * a[i] * std::norm(a[i]) + rng.cgaussian(0.01);
  }
  const auto m = volterra_fit(z, a, 2);

  // linear-only least squares over the same lag window
  auto z_at = [&](int idx) {
    idx %= n;
    if (idx < 0) idx += n;
    return z[idx];
  };
  Eigen::MatrixXcd phi(n, 3);
  Eigen::VectorXcd y(n);
  for (int r = 0; r < n; ++r) {
    for (int k = -1; k <= 1; ++k) phi(r, k + 1) = z_at(r - k);
    y(r) = a[r];
  }
  const Eigen::VectorXcd lin = (phi.adjoint() * phi).ldlt().solve(phi.adjoint() * y);
  const double lin_resid = (phi * lin - y).squaredNorm();

  const cvec pred = volterra_predict(m, z);
  double full_resid = 0.0;
  for (int i = 0; i < n; ++i) full_resid += std::norm(pred[i] - a[i]);
  CHECK(full_resid <= lin_resid * (1.0 + 1e-9));
}

TEST_CASE("per-point table recovers an exact static warp") {
  Rng rng(17);
  const auto q = make_qam(16);
  const int n = 4000;
  std::vector<int> ids(n);
  cvec z(n);
  auto warp = [](cplx a) {
    return a * (1.0 + 0.12 * std::norm(a)) * std::polar(1.0, 0.2 * std::norm(a));
  };
  for (int i = 0; i < n; ++i) {
    ids[i] = static_cast<int>(rng.integer(16));
    z[i] = warp(q.points[ids[i]]);
  }
  const auto t = mm_fit(z, ids, q);
  REQUIRE(t.varpi.size() == 16);
  for (int id = 0; id < 16; ++id) {
    CHECK(std::abs(t.varpi[id] * q.points[id] - warp(q.points[id])) < 1e-12);
  }
  CHECK(mm_detect(t, q, z) == ids);
}

TEST_CASE("sparse constellation points borrow their ring average") {
  Rng rng(19);
  const auto q = make_qam(16);
  std::vector<int> ids;
  cvec z;
  for (int rep = 0; rep < 100; ++rep) {
    for (int id = 0; id < 16; ++id) {
      if (id == 5) continue;  // starve one inner point
      ids.push_back(id);
      z.push_back(q.points[id] * 1.07);
    }
  }
  const auto t = mm_fit(z, ids, q, 20);
  CHECK(std::abs(t.varpi[5] - 1.07) < 1e-12);

  // a fully empty ring cannot be pooled
  std::vector<int> few_ids = {0, 1};
  cvec few_z = {q.points[0], q.points[1]};
  CHECK_THROWS(mm_fit(few_z, few_ids, q, 20));
}

TEST_CASE("detection against the warped centroids is nearest-neighbor") {
  const auto q = make_qam(4);
  MmTable t;
  t.order = 4;
  t.varpi.assign(4, cplx{0.9, 0.0});
  CHECK(mm_detect_one(t, q, 0.9 * q.points[2]) == 2);
  // equidistant between two centroids: lowest id wins
  const cplx mid = 0.9 * 0.5 * (q.points[0] + q.points[1]);
  CHECK(mm_detect_one(t, q, mid) < 2);
  MmTable wrong;
  wrong.order = 16;
  CHECK_THROWS(mm_detect_one(wrong, q, cplx{0, 0}));
}

TEST_CASE("model dumps restore bit-identical predictors") {
  Rng rng(23);
  const cvec z = rng.cgaussian_vector(256, 1.0);

  SUBCASE("series model") {
    cvec a(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] + 0.1 * z[i] * std::norm(z[i]);
    const auto m = volterra_fit(z, a, 2);
    std::stringstream ss;
    save_model(ss, m);
    CHECK(peek_model_type(ss) == "volterra");
    const auto back = load_volterra(ss);
    CHECK(back.memory == m.memory);
    const auto p1 = volterra_predict(m, z);
    const auto p2 = volterra_predict(back, z);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(p1[i] == p2[i]);
  }

  SUBCASE("per-point table") {
    const auto q = make_qam(16);
    std::vector<int> ids(2000);
    cvec zs(2000);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      ids[i] = static_cast<int>(rng.integer(16));
      zs[i] = q.points[ids[i]] * 1.05 + rng.cgaussian(0.001);
    }
    const auto t = mm_fit(zs, ids, q);
    std::stringstream ss;
    save_model(ss, t);
    CHECK(peek_model_type(ss) == "mm");
    const auto back = load_mm(ss);
    REQUIRE(back.varpi.size() == t.varpi.size());
    for (std::size_t i = 0; i < t.varpi.size(); ++i) CHECK(back.varpi[i] == t.varpi[i]);
  }

  SUBCASE("gaussian-process ensemble") {
    cvec a(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] * (1.0 - 0.05 * std::norm(z[i]));
    const auto ens = blue_fit(z, a, 2, 1, {});
    std::stringstream ss;
    save_model(ss, ens);
    CHECK(peek_model_type(ss) == "gpr-blue");
    const auto back = load_blue(ss);
    const auto p1 = blue_predict(ens, z);
    const auto p2 = blue_predict(back, z);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(p1[i] - p2[i]) < 1e-12);
  }

  SUBCASE("wrong type tag is refused") {
    const auto q = make_qam(4);
    std::vector<int> ids(200);
    cvec zs(200);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      ids[i] = static_cast<int>(rng.integer(4));
      zs[i] = q.points[ids[i]];
    }
    const auto t = mm_fit(zs, ids, q);
    std::stringstream ss;
    save_model(ss, t);
    CHECK_THROWS(load_volterra(ss));
    std::stringstream junk("not-a-model v9 type ?\n");
    CHECK_THROWS(peek_model_type(junk));
  }
}
