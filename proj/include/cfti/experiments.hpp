#pragma once

#include "cfti/noise.hpp"
#include "cfti/recon.hpp"
#include "cfti/sampling.hpp"
#include "cfti/sensing.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Reproducible experiment drivers: noiseless phase-transition sweeps over
// sampling densities, synthetic biological volume generation, constrained/
// unconstrained exposure RSNR sweeps, and the acquisition-time dedup pipeline.
// Every Monte-Carlo trial derives its own seed from the spec seed, so reports
// are byte-reproducible at any thread count (rows are ordered by construction,
// not completion).

namespace cfti {

struct ReportRow {
  std::string scheme;  // "ci" or "si"
  double alpha = 0.0;  // -1 marks the coherence-optimal density
  double ratio = 0.0;  // M / N
  std::size_t m = 0;
  std::size_t m_eff = 0;
  double sigma = 0.0;
  double epsilon = 0.0;
  bool constrained = false;
  std::string metric_name;
  double metric_value = 0.0;
  long trial = -1;  // -1 for aggregate rows
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
};

// ---- sparse phantoms and phase transitions ---------------------------------

// X = Psi S with S supported on k_xi uniformly chosen spectral rows times
// k_p uniformly chosen pixel columns, iid standard normal nonzeros. The
// synthesis matches the prior used by the named scheme's reconstruction
// (per-pixel spectral wavelets for shared-OPD, the volumetric tensor basis
// for per-pixel acquisition).
HSVolume gen_sparse_phantom(std::size_t n_xi, std::size_t side, std::size_t k_xi,
                            std::size_t k_p, Scheme prior, Haar2DMode mode,
                            std::uint64_t seed);

struct PhaseTransitionSpec {
  Scheme scheme = Scheme::ci;
  std::size_t n_xi = 512;
  std::size_t side = 8;
  std::size_t k_xi = 4;
  std::size_t k_p = 4;
  std::vector<double> alphas = {0.0, 1.0, 2.0, 8.0};
  bool include_optimal = true;
  std::vector<double> ratios = {0.1, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0};
  std::size_t trials = 50;
  std::uint64_t seed = 1234;
  double success_threshold = 1e-10;  // relative squared error
  std::size_t max_iterations = 2500;
  Haar2DMode mode2d = Haar2DMode::isotropic;
  std::size_t threads = 1;
};

// Noiseless recovery probability per (density, ratio); per-trial "success"
// rows plus "success_rate" and "nonconverged_rate" aggregates. A trial
// succeeds when the solver converged and the relative squared error is at or
// below the threshold.
ExperimentReport run_phase_transition(const PhaseTransitionSpec& spec);

// ---- synthetic biological volume -------------------------------------------

enum class AbundanceSource { procedural, uniform };

struct SpectralPeak {
  double center = 0.0;  // 0-based one-sided row in [1, n_xi/2]
  double width = 0.0;
  double amplitude = 0.0;
};

struct SyntheticVolumeSpec {
  std::size_t n_xi = 512;
  std::size_t side = 64;
  std::size_t endmembers = 3;
  // one entry per endmember; empty selects procedural smooth bumps
  std::vector<std::vector<SpectralPeak>> peaks;
  AbundanceSource abundance = AbundanceSource::procedural;
  bool symmetric = true;
  std::uint64_t seed = 7;
};

// Nonnegative mixture of smooth spectra with nonnegative abundance maps;
// spectral rows mirrored around the DC row when symmetric.
HSVolume gen_synthetic_bio(const SyntheticVolumeSpec& spec);

// ---- exposure sweeps --------------------------------------------------------

struct ExposureSweepSpec {
  Scheme scheme = Scheme::ci;
  SyntheticVolumeSpec volume{512, 16, 3, {}, AbundanceSource::procedural, true, 7};
  double snr_db = 20.0;  // full-acquisition input SNR fixing sigma per volume
  std::vector<double> ratios = {0.1, 0.2, 0.4, 0.7, 1.0};
  std::size_t trials = 10;
  double alpha = 1.0;
  double zeta = 0.01;  // per-pixel cap failure probability (per-pixel scheme)
  bool run_unconstrained = true;
  bool run_constrained = true;
  std::size_t noise_trials = 100;  // empirical-radius calibration
  double quantile = 0.95;
  std::uint64_t seed = 99;
  ReconConfig recon{SparsityPrior::spectral_1d, Haar2DMode::isotropic,
                    1e-6,  1e-6, 3000, false, false, 1};
};

// Mean compressive and least-norm RSNR per ratio, for constrained and/or
// unconstrained exposure arms. The fidelity radius comes from the empirical
// percentile curve at unit sigma, scaled by the arm's effective sigma.
ExperimentReport run_exposure_sweep(const ExposureSweepSpec& spec);

// ---- acquisition-time dedup pipeline ----------------------------------------

struct DedupPipelineSpec {
  SyntheticVolumeSpec volume{512, 16, 3, {}, AbundanceSource::procedural, true, 7};
  double i_ref = 100.0;
  std::vector<double> intensities = {100, 200, 300, 400, 500, 600, 700};
  double sigma_a = 1.44e-2;  // sigma(I) = a*(I/100) + b
  double sigma_b = 1.26e-1;
  std::size_t trials = 10;
  double concentration_s = 6.0;
  std::uint64_t seed = 4242;
  ReconConfig recon{SparsityPrior::spectral_1d, Haar2DMode::isotropic,
                    1e-6,  1e-6, 3000, false, false, 1};
};

// For each illumination intensity I: scale the volume by I/I_ref, acquire
// M_xi = round((I_ref/I) * n_xi) shared-OPD draws at noise sigma(I), keep the
// unique rows, reconstruct with identity weights, and report the normalized
// RSNR against the unscaled reference plus M_eff/n_xi.
ExperimentReport run_dedup_pipeline(const DedupPipelineSpec& spec);

}  // namespace cfti
