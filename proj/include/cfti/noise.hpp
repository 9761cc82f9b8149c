#pragma once

#include "cfti/sampling.hpp"
#include "cfti/transforms.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Fidelity-radius machinery: the sub-exponential inflation factor rho of a
// sampling density, analytic radii for uniform and variable density sampling,
// Monte-Carlo percentile radii, and robust noise-level estimation from full
// interferograms.
//
// All radii are for the weighted residual norm ||D n|| / sqrt(M), where n has
// iid complex Gaussian entries of per-sample variance sigma^2 (variance
// sigma^2/2 in each of the real and imaginary parts).

namespace cfti {

enum class NoiseBoundMethod { analytic_uds, analytic_vds, empirical_percentile };

struct NoiseBound {
  double sigma = 0.0;
  double s = 0.0;      // concentration parameter (exceedance exp(-s/2) scale)
  double rho = 1.0;    // density inflation factor, >= 1
  double epsilon = 0.0;
  NoiseBoundMethod method = NoiseBoundMethod::analytic_uds;
};

// Inflation factor of a density: 1/(N * min_l p(l)) for the power family,
// which collapses to the closed form 2 + ln(n_xi/2) at alpha = 1 (the value
// quoted alongside the guarantees) and to 1 for uniform densities.
double rho_for_pmf(const Pmf& pmf);

// sigma * sqrt(N) * (1 + sqrt(s)/sqrt(2M) + s/M)^{1/2}
double epsilon_uds(double sigma, std::size_t n, std::size_t m, double s);

// Adds the variable-density term 4e(2 ln M + s) max{s/M, sqrt(s/M)} rho
// inside the bracket. Requires rho >= 1.
double epsilon_vds(double sigma, std::size_t n, std::size_t m, double s, double rho);

struct EmpiricalNoisePoint {
  std::size_t m = 0;
  double epsilon = 0.0;  // q-quantile of ||D n||/sqrt(M) over the trials
};

// Fresh plan and fresh noise per trial; the quantile is taken over
// ||D n||/sqrt(M) (not its square). Linear in sigma by construction.
std::vector<EmpiricalNoisePoint> epsilon_empirical(const Pmf& pmf,
                                                   const std::vector<std::size_t>& m_grid,
                                                   double sigma, std::size_t trials,
                                                   double quantile, std::uint64_t seed,
                                                   Scheme scheme, std::size_t threads = 1);

// Robust-median noise estimate from full interferograms (one column per
// pixel): median of |finest-scale Haar details| over all pixels, divided by
// the standard-normal median absolute deviation 0.6745.
double estimate_sigma_rm(const MatD& interferograms);

}  // namespace cfti
