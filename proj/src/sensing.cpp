#include "cfti/sensing.hpp"

#include "cfti/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfti {

bool volume_is_symmetric(const MatD& data) {
  const auto n = static_cast<std::size_t>(data.rows());
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t mirror = (n - l) % n;
    if (data.row(static_cast<Eigen::Index>(l)) !=
        data.row(static_cast<Eigen::Index>(mirror)))
      return false;
  }
  return true;
}

namespace {

void check_volume(const HSVolume& vol) {
  if (vol.data.rows() != static_cast<Eigen::Index>(vol.n_xi) ||
      vol.data.cols() != static_cast<Eigen::Index>(vol.n_p()))
    throw std::invalid_argument("volume dimensions disagree with its data matrix");
  log2_exact(vol.n_xi, "spectral dimension");
}

// complex Gaussian with per-sample variance sigma^2
cxd noise_sample(SplitMix64& rng, double sigma) {
  const double part = sigma / std::sqrt(2.0);
  const double re = part * rng.gaussian();
  const double im = part * rng.gaussian();
  return {re, im};
}

}  // namespace

MatC nyquist_forward(const HSVolume& vol, double sigma, std::uint64_t seed) {
  check_volume(vol);
  const std::size_t n_p = vol.n_p();
  MatC y(vol.data.rows(), vol.data.cols());
  for (std::size_t j = 0; j < n_p; ++j)
    y.col(static_cast<Eigen::Index>(j)) =
        dft_forward(VecD(vol.data.col(static_cast<Eigen::Index>(j))));
  if (sigma > 0.0) {
    SplitMix64 rng(seed);
    for (std::size_t j = 0; j < n_p; ++j)
      for (std::size_t l = 0; l < vol.n_xi; ++l)
        y(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) +=
            noise_sample(rng, sigma);
  }
  return y;
}

MeasurementSet ci_forward(const HSVolume& vol, const SamplingPlan& plan, double sigma,
                          std::uint64_t seed) {
  check_volume(vol);
  if (plan.scheme != Scheme::ci)
    throw std::invalid_argument("shared-OPD forward model needs a spectral-axis plan");
  const std::size_t n_p = vol.n_p();
  const std::size_t m = plan.draws.size();
  for (auto d : plan.draws)
    if (d >= vol.n_xi)
      throw std::invalid_argument("plan index " + std::to_string(d) +
                                  " outside the spectral range");

  MeasurementSet out;
  out.scheme = Scheme::ci;
  out.n_xi = vol.n_xi;
  out.side = vol.side;
  out.plan = plan;
  out.row_indices.assign(plan.draws.begin(), plan.draws.end());
  out.sigma = sigma;
  out.values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n_p));
  SplitMix64 rng(seed);
  for (std::size_t j = 0; j < n_p; ++j) {
    VecC col = dft_forward(VecD(vol.data.col(static_cast<Eigen::Index>(j))));
    for (std::size_t r = 0; r < m; ++r) {
      cxd v = col[plan.draws[r]];
      if (sigma > 0.0) v += noise_sample(rng, sigma);
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return out;
}

MeasurementSet si_forward(const HSVolume& vol, const SamplingPlan& plan, double sigma,
                          std::uint64_t seed) {
  check_volume(vol);
  if (plan.scheme != Scheme::si)
    throw std::invalid_argument("per-pixel forward model needs a flattened-cube plan");
  const std::size_t n_p = vol.n_p();
  const std::size_t n_hs = vol.n_hs();
  const std::size_t m = plan.draws.size();
  for (auto d : plan.draws)
    if (d >= n_hs)
      throw std::invalid_argument("plan index " + std::to_string(d) +
                                  " outside the flattened cube");

  // full spectra are cheap compared to the solve; compute each pixel's DFT
  // once even if only a few entries are kept
  MatC full(vol.data.rows(), vol.data.cols());
  for (std::size_t j = 0; j < n_p; ++j)
    full.col(static_cast<Eigen::Index>(j)) =
        dft_forward(VecD(vol.data.col(static_cast<Eigen::Index>(j))));

  MeasurementSet out;
  out.scheme = Scheme::si;
  out.n_xi = vol.n_xi;
  out.side = vol.side;
  out.plan = plan;
  out.row_indices.assign(plan.draws.begin(), plan.draws.end());
  out.sigma = sigma;
  out.values.resize(static_cast<Eigen::Index>(m), 1);
  SplitMix64 rng(seed);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t k = plan.draws[r];
    const std::size_t j = k / vol.n_xi, l = k % vol.n_xi;
    cxd v = full(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
    if (sigma > 0.0) v += noise_sample(rng, sigma);
    out.values(static_cast<Eigen::Index>(r), 0) = v;
  }
  return out;
}

MeasurementSet dedup_ci_forward(const MatC& nyquist_y, const HSVolume& vol,
                                const SamplingPlan& plan, double sigma) {
  check_volume(vol);
  if (plan.scheme != Scheme::ci)
    throw std::invalid_argument("dedup restriction needs a spectral-axis plan");
  if (nyquist_y.rows() != static_cast<Eigen::Index>(vol.n_xi) ||
      nyquist_y.cols() != static_cast<Eigen::Index>(vol.n_p()))
    throw std::invalid_argument("full measurement matrix does not match the volume");
  EffectiveSet eff = dedup(plan);
  MeasurementSet out;
  out.scheme = Scheme::ci;
  out.n_xi = vol.n_xi;
  out.side = vol.side;
  out.plan = plan;
  out.row_indices = eff.indices;
  out.sigma = sigma;
  out.deduplicated = true;
  out.values.resize(static_cast<Eigen::Index>(eff.m_eff),
                    static_cast<Eigen::Index>(vol.n_p()));
  for (std::size_t r = 0; r < eff.m_eff; ++r)
    out.values.row(static_cast<Eigen::Index>(r)) =
        nyquist_y.row(static_cast<Eigen::Index>(eff.indices[r]));
  return out;
}

double constrained_ci_scale(std::size_t m_xi, std::size_t n_xi) {
  if (m_xi == 0) throw std::invalid_argument("need at least one OPD sample");
  if (m_xi > n_xi)
    throw std::invalid_argument("cannot retain more OPD samples than exist");
  return static_cast<double>(n_xi) / static_cast<double>(m_xi);
}

double si_exposure_cap(std::size_t m, std::size_t n_p, double zeta) {
  if (m == 0 || n_p == 0) throw std::invalid_argument("degenerate plan size");
  if (!(zeta > 0.0 && zeta < 1.0))
    throw std::invalid_argument("failure probability must lie in (0,1)");
  const double md = static_cast<double>(m), npd = static_cast<double>(n_p);
  const double t0 = (2.0 * npd / (3.0 * md)) * std::log(npd / zeta);
  return (md / npd) * (1.0 + 0.5 * (t0 + std::sqrt(t0 * t0 + 12.0 * t0)));
}

std::vector<std::size_t> si_pixel_counts(const SamplingPlan& plan, std::size_t n_xi,
                                         std::size_t n_p) {
  std::vector<std::size_t> counts(n_p, 0);
  for (auto d : plan.draws) {
    const std::size_t j = d / n_xi;
    if (j >= n_p) throw std::invalid_argument("plan index outside the flattened cube");
    ++counts[j];
  }
  return counts;
}

}  // namespace cfti
