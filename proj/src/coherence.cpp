#include "cfti/coherence.hpp"

#include <cmath>
#include <stdexcept>

namespace cfti {

VecD local_coherence_exact(const MatC& sensing, const MatC& sparsity) {
  if (sensing.rows() != sparsity.rows())
    throw std::invalid_argument("coherence: bases act on different spaces");
  if (sensing.rows() > 4096)
    throw std::invalid_argument("exact coherence is capped at dimension 4096");
  // mu_l = max_j |<s_l, psi_j>|, one row of S^H Psi at a time to keep the
  // working set linear in the dimension.
  const Eigen::Index n = sensing.cols();
  VecD mu(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    VecC row = sparsity.adjoint() * sensing.col(l);  // conj of (S^H Psi)_{l,:}
    mu[l] = row.cwiseAbs().maxCoeff();
  }
  return mu;
}

VecD spectral_coherence_exact(std::size_t n_xi) {
  MatC f = dense_dft(n_xi);
  MatC psi = dense_haar1d(n_xi).cast<cxd>();
  return local_coherence_exact(f, psi);
}

namespace {

// sqrt(2) * min{1, |l + 1 - n/2|^{-1/2}} with the DC row (distance 0) capped
// by the min at 1.
double ci_bound(std::size_t l, std::size_t n) {
  const double dist =
      std::abs(static_cast<double>(l) + 1.0 - static_cast<double>(n) / 2.0);
  const double tail = dist > 0.0 ? 1.0 / std::sqrt(dist) : 1.0;
  return std::sqrt(2.0) * std::min(1.0, tail);
}

}  // namespace

CoherenceProfile kappa_ci(std::size_t n_xi) {
  log2_exact(n_xi, "spectral dimension");
  CoherenceProfile p;
  p.kappa.resize(static_cast<Eigen::Index>(n_xi));
  for (std::size_t l = 0; l < n_xi; ++l) p.kappa[l] = ci_bound(l, n_xi);
  p.kappa_sq_norm = p.kappa.squaredNorm();
  p.label = "shared-opd analytic";
  return p;
}

CoherenceProfile kappa_si(std::size_t n_xi, std::size_t n_p) {
  log2_exact(n_xi, "spectral dimension");
  if (n_p == 0) throw std::invalid_argument("pixel count must be positive");
  // The spatial factor contributes 1/2 per pixel (finest 2-D atom) whenever
  // there is more than one pixel; a single-pixel cube degenerates to the
  // shared-OPD profile.
  const double spatial = n_p == 1 ? 1.0 : 0.5;
  CoherenceProfile p;
  p.kappa.resize(static_cast<Eigen::Index>(n_xi * n_p));
  for (std::size_t j = 0; j < n_p; ++j)
    for (std::size_t l = 0; l < n_xi; ++l)
      p.kappa[j * n_xi + l] = spatial * ci_bound(l, n_xi);
  p.kappa_sq_norm = p.kappa.squaredNorm();
  p.label = "per-pixel analytic";
  return p;
}

CoherenceProfile kappa_ci_exact(std::size_t n_xi) {
  CoherenceProfile p;
  p.kappa = spectral_coherence_exact(n_xi);
  p.kappa_sq_norm = p.kappa.squaredNorm();
  p.label = "shared-opd exact";
  return p;
}

CoherenceProfile kappa_si_exact(std::size_t n_xi, std::size_t n_p) {
  if (n_p == 0) throw std::invalid_argument("pixel count must be positive");
  // Kronecker pair: the full-cube coherence factorizes into the spectral
  // profile times the spatial one, and every 2-D Haar atom meets the
  // single-pixel row at max modulus 1/2 (finest-scale atom), independent of
  // the pixel and of the 2-D mode.
  VecD spectral = spectral_coherence_exact(n_xi);
  const double spatial = n_p == 1 ? 1.0 : 0.5;
  CoherenceProfile p;
  p.kappa.resize(static_cast<Eigen::Index>(n_xi * n_p));
  for (std::size_t j = 0; j < n_p; ++j)
    for (std::size_t l = 0; l < n_xi; ++l)
      p.kappa[j * n_xi + l] = spatial * spectral[l];
  p.kappa_sq_norm = p.kappa.squaredNorm();
  p.label = "per-pixel exact";
  return p;
}

double sample_complexity(double sparsity, double ambient_dim, double kappa_sq_norm,
                         double delta) {
  if (sparsity < 2.0) throw std::invalid_argument("sparsity must be >= 2");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("confidence parameter must lie in (0,1)");
  if (ambient_dim < 2.0 || kappa_sq_norm <= 0.0)
    throw std::invalid_argument("sample_complexity: bad dimension or profile norm");
  const double lk = std::log(sparsity);
  return kappa_sq_norm * sparsity * lk * lk * lk * std::log(ambient_dim) /
         (delta * delta);
}

}  // namespace cfti
