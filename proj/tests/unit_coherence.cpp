#include "cfti/coherence.hpp"

#include <doctest.h>

#include <cmath>

using namespace cfti;

TEST_CASE("analytic shared-opd profile at n=8 matches the closed form") {
  CoherenceProfile p = kappa_ci(8);
  const double s2 = std::sqrt(2.0);
  const double expected[8] = {s2 / std::sqrt(3.0), 1.0, s2, s2,
                              s2, 1.0, s2 / std::sqrt(3.0), s2 / 2.0};
  REQUIRE(p.kappa.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(p.kappa[i] == doctest::Approx(expected[i]));
  CHECK(p.kappa_sq_norm == doctest::Approx(p.kappa.squaredNorm()));
}

TEST_CASE("exact spectral coherence peaks at exactly 1 on the dc row") {
  for (std::size_t n : {8u, 16u, 64u, 256u}) {
    VecD mu = spectral_coherence_exact(n);
    CHECK(std::abs(mu[static_cast<Eigen::Index>(n / 2 - 1)] - 1.0) < 1e-12);
  }
}

TEST_CASE("analytic profile dominates the exact one everywhere") {
  const std::size_t n = 64;
  CoherenceProfile bound = kappa_ci(n);
  CoherenceProfile exact = kappa_ci_exact(n);
  for (Eigen::Index i = 0; i < bound.kappa.size(); ++i)
    CHECK(bound.kappa[i] >= exact.kappa[i] - 1e-12);
}

TEST_CASE("pixel-domain coherence of the 2d wavelets is exactly one half") {
  for (auto mode : {Haar2DMode::isotropic, Haar2DMode::anisotropic}) {
    MatC eye = MatC::Identity(16, 16);
    MatC psi = dense_haar2d(4, mode).cast<cxd>();
    VecD mu = local_coherence_exact(eye, psi);
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      CHECK(std::abs(mu[i] - 0.5) < 1e-14);
  }
}

TEST_CASE("full-cube exact profile factorizes through the spectral one") {
  const std::size_t n_xi = 8, side = 2, n_p = side * side;
  CoherenceProfile fact = kappa_si_exact(n_xi, n_p);

  for (auto mode : {Haar2DMode::isotropic, Haar2DMode::anisotropic}) {
    // brute force on the dense Kronecker pair: sensing e_j (x) f_l,
    // sparsity psi2d (x) psi1d
    MatC f = dense_dft(n_xi);
    MatC psi1 = dense_haar1d(n_xi).cast<cxd>();
    MatC psi2 = dense_haar2d(side, mode).cast<cxd>();
    const Eigen::Index n = static_cast<Eigen::Index>(n_xi * n_p);
    MatC sensing(n, n), sparsity(n, n);
    for (Eigen::Index jc = 0; jc < static_cast<Eigen::Index>(n_p); ++jc)
      for (Eigen::Index lc = 0; lc < static_cast<Eigen::Index>(n_xi); ++lc) {
        // column k = n_xi*j + l of each kron factorized basis
        for (Eigen::Index jr = 0; jr < static_cast<Eigen::Index>(n_p); ++jr)
          for (Eigen::Index lr = 0; lr < static_cast<Eigen::Index>(n_xi); ++lr) {
            const Eigen::Index row = jr * static_cast<Eigen::Index>(n_xi) + lr;
            const Eigen::Index col = jc * static_cast<Eigen::Index>(n_xi) + lc;
            sensing(row, col) = (jr == jc ? cxd(1.0, 0.0) : cxd(0.0, 0.0)) * f(lr, lc);
            sparsity(row, col) = psi2(jr, jc) * psi1(lr, lc);
          }
      }
    VecD brute = local_coherence_exact(sensing, sparsity);
    REQUIRE(brute.size() == fact.kappa.size());
    for (Eigen::Index i = 0; i < brute.size(); ++i)
      CHECK(std::abs(brute[i] - fact.kappa[i]) < 1e-12);
  }
}

TEST_CASE("single-pixel cube degenerates to the shared-opd profile") {
  CoherenceProfile one = kappa_si(16, 1);
  CoherenceProfile ci = kappa_ci(16);
  CHECK((one.kappa - ci.kappa).norm() < 1e-14);
}

TEST_CASE("per-pixel analytic profile tiles half the spectral bound") {
  CoherenceProfile si = kappa_si(8, 4);
  CoherenceProfile ci = kappa_ci(8);
  REQUIRE(si.kappa.size() == 32);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t l = 0; l < 8; ++l)
      CHECK(si.kappa[static_cast<Eigen::Index>(j * 8 + l)] ==
            doctest::Approx(0.5 * ci.kappa[static_cast<Eigen::Index>(l)]));
}

TEST_CASE("squared profile norms land on the frozen values") {
  // sum of 2*min{1,1/dist}: 2*(1 + 2*H_255 + 1/256)
  CoherenceProfile ci512 = kappa_ci(512);
  double h255 = 0.0;
  for (int d = 1; d <= 255; ++d) h255 += 1.0 / d;
  CHECK(ci512.kappa_sq_norm == doctest::Approx(2.0 * (1.0 + 2.0 * h255 + 1.0 / 256.0)));
  CHECK(ci512.kappa_sq_norm > 14.24);  // sampling-efficiency floor used in reports

  // squared norm of the exact profile is far smaller
  CoherenceProfile opt = kappa_ci_exact(512);
  CHECK(opt.kappa_sq_norm < ci512.kappa_sq_norm);
  CHECK(opt.kappa_sq_norm == doctest::Approx(6.15).epsilon(0.02));
}

TEST_CASE("sample complexity index behaves like delta^-2 K ln^3 K ln N") {
  const double base = sample_complexity(8, 512, 10.0, 0.5);
  CHECK(sample_complexity(8, 512, 10.0, 0.25) == doctest::Approx(4.0 * base));
  CHECK(sample_complexity(8, 512, 20.0, 0.5) == doctest::Approx(2.0 * base));
  CHECK(sample_complexity(16, 512, 10.0, 0.5) > base);
  const double lk = std::log(8.0);
  CHECK(base == doctest::Approx(10.0 * 8.0 * lk * lk * lk * std::log(512.0) / 0.25));
  CHECK_THROWS_AS(sample_complexity(1, 512, 10.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(sample_complexity(8, 512, 10.0, 1.5), std::invalid_argument);
}
