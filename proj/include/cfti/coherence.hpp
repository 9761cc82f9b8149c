#pragma once

#include "cfti/transforms.hpp"

#include <cstddef>
#include <string>

// Local coherence profiles between a sensing basis and a sparsity basis, the
// analytic upper bounds used to shape sampling densities, and the resulting
// sample-complexity index. Conventions:
//  * Profiles are indexed like sensing-basis rows (0-based; for spectral rows
//    the DC row is index n_xi/2 - 1).
//  * kappa_sq_norm is the squared l2 norm of the profile, the quantity that
//    multiplies sparsity in the sample-complexity bound.

namespace cfti {

struct CoherenceProfile {
  VecD kappa;            // per-row bound (or exact value) of max_j |<row, psi_j>|
  double kappa_sq_norm;  // ||kappa||_2^2
  std::string label;
};

// Exact local coherence: mu_l = max_j |(S^H Psi)_{l,j}| for unitary S, Psi
// given densely. Intended for verification sizes (<= 4096).
VecD local_coherence_exact(const MatC& sensing, const MatC& sparsity);

// Exact spectral profile mu_l of the centered-DFT / 1-D Haar pair, computed
// densely. Shared by both schemes: the spatial factor of the structured-
// illumination pair contributes a constant 1/2 per pixel, so the full-cube
// profile factorizes through this one.
VecD spectral_coherence_exact(std::size_t n_xi);

// Analytic bound for shared-OPD sensing (rows = spectral samples):
//   kappa_l = sqrt(2) * min{1, |l + 1 - n_xi/2|^{-1/2}}   (0-based l)
CoherenceProfile kappa_ci(std::size_t n_xi);

// Analytic bound for per-pixel spatiotemporal sensing over n_p pixels; the
// profile has n_xi * n_p entries, constant across pixels:
//   kappa_{(j,l)} = (sqrt(2)/2) * min{1, |l + 1 - n_xi/2|^{-1/2}}
CoherenceProfile kappa_si(std::size_t n_xi, std::size_t n_p);

// Exact-coherence profiles (kappa = mu), usable as the optimum-density input.
CoherenceProfile kappa_ci_exact(std::size_t n_xi);
CoherenceProfile kappa_si_exact(std::size_t n_xi, std::size_t n_p);

// Comparative sample-complexity index (the hidden absolute constant of the
// recovery guarantee is unknown, so only ratios and monotonicity are
// meaningful):  delta^{-2} * kappa_sq_norm * K * ln(K)^3 * ln(N),
// natural logs, K >= 2, delta in (0,1).
double sample_complexity(double sparsity, double ambient_dim, double kappa_sq_norm,
                         double delta);

}  // namespace cfti
