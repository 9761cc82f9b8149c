#pragma once

#include "cfti/noise.hpp"
#include "cfti/sensing.hpp"
#include "cfti/transforms.hpp"

#include <functional>
#include <string>
#include <vector>

// Weighted basis-pursuit-denoise reconstruction
//
//   min ||s||_1   s.t.  ||D (y - A Psi s)|| <= epsilon * sqrt(M),
//
// solved in the coefficient domain by a spectral projected-gradient scheme on
// the constrained LASSO subproblems with Newton root-finding on the l1 radius
// (the standard root-finding approach for this program). Shared-OPD
// measurements decouple into independent per-pixel solves; per-pixel
// (flattened-cube) measurements and the volumetric-prior variant solve one
// joint problem. A minimal-energy (least-norm) baseline and RSNR metrics
// complete the module.

namespace cfti {

// Matrix-free complex linear operator.
struct LinOp {
  Eigen::Index rows = 0, cols = 0;
  std::function<VecC(const VecC&)> apply;    // cols -> rows
  std::function<VecC(const VecC&)> adjoint;  // rows -> cols
};

enum class SparsityPrior { spectral_1d, spatiospectral_3d };

struct ReconConfig {
  SparsityPrior prior = SparsityPrior::spectral_1d;
  Haar2DMode mode2d = Haar2DMode::isotropic;
  double feasibility_tol = 1e-6;  // relative residual slack
  double objective_tol = 1e-6;    // duality-gap tolerance
  std::size_t max_iterations = 10000;
  bool enforce_real = false;     // post-projection of the returned estimate
  bool enforce_nonneg = false;
  std::size_t threads = 1;
};

struct SolverStatus {
  bool converged = false;
  std::size_t iterations = 0;
  double residual_norm = 0.0;  // ||D(y - A u)|| at the returned iterate
  double target = 0.0;         // epsilon * sqrt(M) (+ slack applied)
  double objective_l1 = 0.0;
  std::string message;
};

struct BpdnResult {
  VecC coeffs;   // sparse-domain solution s
  VecC signal;   // Psi s
  SolverStatus status;
};

// y: measurements; weights: per-entry preconditioner diagonal; A: sensing
// restriction (signal -> measurements); synth: sparsity synthesis operator
// (coefficients -> signal, orthonormal). Nonconvergence is always explicit in
// the returned status; the best iterate found is still returned.
BpdnResult bpdn_weighted(const VecC& y, const VecD& weights, const LinOp& a,
                         const LinOp& synth, double epsilon, const ReconConfig& cfg);

struct ReconResult {
  HSVolume volume;           // real part of the estimate
  double imag_sq_norm = 0.0; // energy discarded by taking the real part
  std::vector<SolverStatus> statuses;  // one per pixel, or a single joint entry
  bool all_converged = false;
};

// Shared-OPD reconstruction: independent per-pixel solves under the spectral
// prior, or one joint solve under the volumetric prior (weights replicated
// across pixels, radius epsilon*sqrt(M_xi*N_p)).
ReconResult reconstruct_ci(const MeasurementSet& meas, double epsilon,
                           const ReconConfig& cfg);

// Per-pixel-acquisition reconstruction: one joint solve with the volumetric
// prior.
ReconResult reconstruct_si(const MeasurementSet& meas, double epsilon,
                           const ReconConfig& cfg);

// Deduplicated shared-OPD reconstruction: per-pixel solves with identity
// weights on the unique rows.
ReconResult reconstruct_dedup_ci(const MeasurementSet& meas, double epsilon,
                                 const ReconConfig& cfg);

// Least-norm inversion: duplicate measurements averaged, unsampled rows
// zero-filled, then the synthesis (inverse DFT) applied per pixel.
HSVolume minimal_energy(const MeasurementSet& meas);

// -10 log10(||x - xhat||^2 / ||x||^2), capped at 300 dB; the normalized
// variant rescales every pixel spectrum of both arguments to unit norm first.
double rsnr(const MatD& reference, const MatD& estimate, bool normalized = false);

}  // namespace cfti
