#pragma once

#include "cfti/sampling.hpp"
#include "cfti/transforms.hpp"

#include <cstdint>
#include <vector>

// Forward acquisition models. A hyperspectral volume X (n_xi x n_p, column j
// = spectrum at pixel j) is observed through the centered DFT analysis
// Y = F^* X plus iid complex Gaussian noise of per-sample variance sigma^2.
//  * Shared-OPD acquisition keeps M_xi spectral rows (with multiplicity) for
//    every pixel.
//  * Per-pixel acquisition keeps M flattened-cube entries k = n_xi*j + l.
// Constrained-exposure mode rescales sigma instead of amplifying the data;
// the amplification factor is recorded on the measurement set.

namespace cfti {

struct HSVolume {
  std::size_t n_xi = 0;
  std::size_t side = 0;  // n_p = side * side
  MatD data;             // n_xi x n_p
  bool symmetric = false;

  std::size_t n_p() const { return side * side; }
  std::size_t n_hs() const { return n_xi * side * side; }
};

// Checks X_{l,j} = X_{(n_xi - l) mod n_xi, j} exactly (the evenness that makes
// the interferogram real).
bool volume_is_symmetric(const MatD& data);

struct MeasurementSet {
  Scheme scheme = Scheme::ci;
  std::size_t n_xi = 0;
  std::size_t side = 0;
  MatC values;  // shared-OPD: M_xi x n_p; per-pixel: M x 1
  SamplingPlan plan;
  // OPD row (shared-OPD) or flattened-cube index (per-pixel) of each stored
  // row; equals plan.draws except for deduplicated sets.
  std::vector<std::uint32_t> row_indices;
  double sigma = 0.0;
  double amplification = 1.0;
  bool deduplicated = false;

  std::size_t n_p() const { return side * side; }
};

// Full acquisition: Y = F^* X + N, one column per pixel.
MatC nyquist_forward(const HSVolume& vol, double sigma, std::uint64_t seed);

// Shared-OPD acquisition: rows of F^* X at the plan's draws (with
// multiplicity), fresh noise per stored entry including repeats.
MeasurementSet ci_forward(const HSVolume& vol, const SamplingPlan& plan, double sigma,
                          std::uint64_t seed);

// Per-pixel acquisition over flattened-cube draws.
MeasurementSet si_forward(const HSVolume& vol, const SamplingPlan& plan, double sigma,
                          std::uint64_t seed);

// Restriction of existing full measurements to the plan's unique rows (one
// copy each); used by the acquisition-time dedup pipeline.
MeasurementSet dedup_ci_forward(const MatC& nyquist_y, const HSVolume& vol,
                                const SamplingPlan& plan, double sigma);

// Exposure amplification per retained OPD sample: n_xi / m_xi.
double constrained_ci_scale(std::size_t m_xi, std::size_t n_xi);

// High-probability cap on the per-pixel sample count of a per-pixel plan:
// (M/N_p) * (1 + (t0 + sqrt(t0^2 + 12 t0))/2), t0 = (2 N_p / (3 M)) ln(N_p/zeta).
double si_exposure_cap(std::size_t m, std::size_t n_p, double zeta);

// Per-pixel draw counts M_j of a per-pixel plan.
std::vector<std::size_t> si_pixel_counts(const SamplingPlan& plan, std::size_t n_xi,
                                         std::size_t n_p);

}  // namespace cfti
