#include "cfti/experiments.hpp"
#include "cfti/recon.hpp"
#include "cfti/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace cfti;

namespace {

LinOp identity_op(Eigen::Index n) {
  LinOp op;
  op.rows = op.cols = n;
  op.apply = [](const VecC& v) { return v; };
  op.adjoint = [](const VecC& v) { return v; };
  return op;
}

LinOp dense_op(const MatC& m) {
  LinOp op;
  op.rows = m.rows();
  op.cols = m.cols();
  op.apply = [m](const VecC& v) { return VecC(m * v); };
  op.adjoint = [m](const VecC& v) { return VecC(m.adjoint() * v); };
  return op;
}

}  // namespace

TEST_CASE("l1 projection onto a fidelity ball around 2*e1 lands on e1") {
  const Eigen::Index n = 4;
  VecC y = VecC::Zero(n);
  y[0] = cxd(2.0, 0.0);
  ReconConfig cfg;
  cfg.feasibility_tol = 1e-8;
  cfg.objective_tol = 1e-10;
  cfg.max_iterations = 2000;
  // target radius epsilon*sqrt(M) = 1
  BpdnResult res = bpdn_weighted(y, VecD::Ones(n), identity_op(n), identity_op(n),
                                 0.5, cfg);
  CHECK(res.status.converged);
  CHECK(res.status.objective_l1 == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(res.status.residual_norm == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(res.coeffs[0] - cxd(1.0, 0.0)) < 1e-4);
  for (Eigen::Index i = 1; i < n; ++i) CHECK(std::abs(res.coeffs[i]) < 1e-6);
}

TEST_CASE("identity sensing with zero radius reproduces the data") {
  const Eigen::Index n = 32;
  SplitMix64 rng(77);
  VecC y = VecC::Zero(n);
  y[3] = cxd(rng.gaussian(), rng.gaussian());
  y[17] = cxd(rng.gaussian(), rng.gaussian());
  y[29] = cxd(rng.gaussian(), rng.gaussian());
  ReconConfig cfg;
  BpdnResult res = bpdn_weighted(y, VecD::Ones(n), identity_op(n), identity_op(n),
                                 0.0, cfg);
  CHECK(res.status.converged);
  CHECK((res.signal - y).norm() < 1e-5 * y.norm());
}

TEST_CASE("zero estimate is returned when the data already fits the radius") {
  const Eigen::Index n = 3;
  VecC y = VecC::Constant(n, cxd(0.1, 0.0));
  ReconConfig cfg;
  BpdnResult res =
      bpdn_weighted(y, VecD::Ones(n), identity_op(n), identity_op(n), 1.0, cfg);
  CHECK(res.status.converged);
  CHECK(res.status.message == "zero solution is feasible");
  CHECK(res.signal.norm() == 0.0);
}

TEST_CASE("an unreachable fidelity ball is reported, best iterate kept") {
  // second data entry is outside the operator range, so the residual can
  // never drop below 1
  MatC a = MatC::Zero(2, 2);
  a(0, 0) = cxd(1.0, 0.0);
  VecC y(2);
  y[0] = cxd(1.0, 0.0);
  y[1] = cxd(1.0, 0.0);
  ReconConfig cfg;
  cfg.max_iterations = 5000;
  BpdnResult res =
      bpdn_weighted(y, VecD::Ones(2), dense_op(a), identity_op(2), 0.1, cfg);
  CHECK_FALSE(res.status.converged);
  CHECK(res.status.residual_norm == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(res.status.message.find("target") != std::string::npos);
  CHECK(std::abs(res.coeffs[0] - cxd(1.0, 0.0)) < 1e-3);
}

TEST_CASE("preconditioner weights act exactly like prescaled rows") {
  SplitMix64 rng(2024);
  const Eigen::Index m = 6, n = 8;
  MatC a(m, n);
  for (Eigen::Index i = 0; i < m * n; ++i)
    a.data()[i] = cxd(rng.gaussian(), rng.gaussian());
  VecC y(m);
  for (Eigen::Index i = 0; i < m; ++i) y[i] = cxd(rng.gaussian(), rng.gaussian());
  VecD w(m);
  for (Eigen::Index i = 0; i < m; ++i) w[i] = 0.5 + rng.uniform01();

  ReconConfig cfg;
  cfg.max_iterations = 5000;
  const double eps = 0.4 * (y.cwiseProduct(w.cast<cxd>())).norm() / std::sqrt(6.0);
  BpdnResult weighted =
      bpdn_weighted(y, w, dense_op(a), identity_op(n), eps, cfg);

  MatC aw = w.cast<cxd>().asDiagonal() * a;
  VecC yw = y.cwiseProduct(w.cast<cxd>());
  BpdnResult scaled =
      bpdn_weighted(yw, VecD::Ones(m), dense_op(aw), identity_op(n), eps, cfg);

  REQUIRE(weighted.status.converged);
  REQUIRE(scaled.status.converged);
  CHECK((weighted.coeffs - scaled.coeffs).norm() < 1e-6);
}

TEST_CASE("noiseless shared-OPD acquisition recovers a sparse phantom exactly") {
  HSVolume vol = gen_sparse_phantom(32, 2, 2, 1, Scheme::ci,
                                    Haar2DMode::isotropic, 5);
  Pmf pmf = build_pmf_ci(32, 1.0);
  SamplingPlan plan = draw_plan(pmf, 24, 11, Scheme::ci);
  MeasurementSet meas = ci_forward(vol, plan, 0.0, 0);
  ReconConfig cfg;
  cfg.max_iterations = 4000;
  ReconResult rec = reconstruct_ci(meas, 0.0, cfg);
  CHECK(rec.all_converged);
  CHECK(rsnr(vol.data, rec.volume.data) > 95.0);
}

TEST_CASE("noiseless per-pixel acquisition recovers a volumetric phantom") {
  HSVolume vol = gen_sparse_phantom(16, 4, 2, 2, Scheme::si,
                                    Haar2DMode::isotropic, 21);
  Pmf pmf = build_pmf_si(16, 16, 1.0);
  SamplingPlan plan = draw_plan(pmf, 128, 31, Scheme::si);  // half of N
  MeasurementSet meas = si_forward(vol, plan, 0.0, 0);
  ReconConfig cfg;
  cfg.max_iterations = 6000;
  ReconResult rec = reconstruct_si(meas, 0.0, cfg);
  CHECK(rec.all_converged);
  CHECK(rsnr(vol.data, rec.volume.data) > 95.0);
}

TEST_CASE("least-norm inversion averages duplicates and zero-fills") {
  MeasurementSet meas;
  meas.scheme = Scheme::ci;
  meas.n_xi = 8;
  meas.side = 1;
  meas.values.resize(3, 1);
  meas.values(0, 0) = cxd(1.0, 0.5);
  meas.values(1, 0) = cxd(3.0, -0.5);
  meas.values(2, 0) = cxd(-2.0, 1.0);
  meas.row_indices = {2, 2, 5};

  VecC z = VecC::Zero(8);
  z[2] = cxd(2.0, 0.0);  // average of the two draws of row 2
  z[5] = cxd(-2.0, 1.0);
  VecD expected = (dense_dft(8) * z).real();

  HSVolume rec = minimal_energy(meas);
  CHECK((rec.data.col(0) - expected).norm() < 1e-12);
}

TEST_CASE("reconstruction quality metric") {
  MatD ref(4, 2);
  ref << 1, 2, 3, 4, 5, 6, 7, 8;
  CHECK(rsnr(ref, ref) == doctest::Approx(300.0));

  MatD noise = MatD::Zero(4, 2);
  noise(0, 0) = 0.1 * ref.norm();
  CHECK(rsnr(ref, ref + noise) == doctest::Approx(20.0).epsilon(1e-12));

  CHECK_THROWS_AS(rsnr(MatD::Zero(4, 2), ref), std::invalid_argument);
  CHECK_THROWS_AS(rsnr(ref, MatD::Zero(3, 2)), std::invalid_argument);

  // per-pixel normalization removes column scalings
  MatD est = ref;
  est.col(0) *= 3.0;
  est.col(1) *= 0.25;
  CHECK(rsnr(ref, est, true) == doctest::Approx(300.0));
  CHECK(rsnr(ref, est, false) < 20.0);
}
