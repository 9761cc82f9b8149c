#include "cfti/noise.hpp"

#include "cfti/parallel.hpp"
#include "cfti/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfti {

double rho_for_pmf(const Pmf& pmf) {
  if (pmf.family == PmfFamily::uniform) return 1.0;
  if (pmf.family != PmfFamily::power)
    throw std::invalid_argument(
        "rho is defined for power-family densities; use the empirical radius otherwise");
  if (pmf.alpha == 1.0)
    // closed form quoted with the guarantees; an admissible upper bound on
    // 1/(N p_min) for this density
    return 2.0 + std::log(static_cast<double>(pmf.n_xi) / 2.0);
  const double p_min = pmf.probs.minCoeff() * static_cast<double>(pmf.n_p);
  // per-axis minimum: SI densities are the CI ones divided by n_p, and the
  // ambient dimension grows by the same factor, so rho is scheme-independent
  const double rho = 1.0 / (static_cast<double>(pmf.n_xi) * p_min);
  return std::max(1.0, rho);
}

double epsilon_uds(double sigma, std::size_t n, std::size_t m, double s) {
  if (sigma < 0.0 || s < 0.0 || n == 0 || m == 0)
    throw std::invalid_argument("epsilon_uds: nonpositive arguments");
  const double md = static_cast<double>(m);
  const double bracket = 1.0 + std::sqrt(s) / std::sqrt(2.0 * md) + s / md;
  return sigma * std::sqrt(static_cast<double>(n)) * std::sqrt(bracket);
}

double epsilon_vds(double sigma, std::size_t n, std::size_t m, double s, double rho) {
  if (rho < 1.0) throw std::invalid_argument("epsilon_vds: rho must be >= 1");
  if (sigma < 0.0 || s < 0.0 || n == 0 || m == 0)
    throw std::invalid_argument("epsilon_vds: nonpositive arguments");
  const double md = static_cast<double>(m);
  const double e = 2.71828182845904523536;
  const double extra = 4.0 * e * (2.0 * std::log(md) + s) *
                       std::max(s / md, std::sqrt(s / md)) * rho;
  const double bracket = 1.0 + std::sqrt(s) / std::sqrt(2.0 * md) + s / md + extra;
  return sigma * std::sqrt(static_cast<double>(n)) * std::sqrt(bracket);
}

std::vector<EmpiricalNoisePoint> epsilon_empirical(const Pmf& pmf,
                                                   const std::vector<std::size_t>& m_grid,
                                                   double sigma, std::size_t trials,
                                                   double quantile, std::uint64_t seed,
                                                   Scheme scheme, std::size_t threads) {
  if (trials < 2) throw std::invalid_argument("empirical radius needs at least 2 trials");
  if (!(quantile > 0.0 && quantile < 1.0))
    throw std::invalid_argument("quantile must lie in (0,1)");
  if (pmf.probs.size() == 0) throw std::invalid_argument("empty pmf");

  std::vector<EmpiricalNoisePoint> curve(m_grid.size());
  for (std::size_t gi = 0; gi < m_grid.size(); ++gi) {
    const std::size_t m = m_grid[gi];
    if (m == 0) throw std::invalid_argument("empirical radius: M must be positive");
    std::vector<double> vals(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      const std::uint64_t ts = derive_seed(seed, gi * trials + t);
      SamplingPlan plan = draw_plan(pmf, m, derive_seed(ts, 0), scheme);
      SplitMix64 rng(derive_seed(ts, 1));
      // complex noise, per-sample variance sigma^2
      const double part = sigma / std::sqrt(2.0);
      double acc = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        const double re = part * rng.gaussian();
        const double im = part * rng.gaussian();
        const double w = plan.weights[static_cast<Eigen::Index>(r)];
        acc += w * w * (re * re + im * im);
      }
      vals[t] = std::sqrt(acc / static_cast<double>(m));
    });
    std::sort(vals.begin(), vals.end());
    // order statistic at ceil(q * trials), clamped
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(quantile * static_cast<double>(trials)));
    rank = std::min(std::max<std::size_t>(rank, 1), trials);
    curve[gi] = {m, vals[rank - 1]};
  }
  return curve;
}

double estimate_sigma_rm(const MatD& interferograms) {
  const auto n_xi = static_cast<std::size_t>(interferograms.rows());
  log2_exact(n_xi, "interferogram length");
  if (n_xi < 2) throw std::invalid_argument("need at least two samples per pixel");
  const auto n_p = static_cast<std::size_t>(interferograms.cols());
  // finest-scale detail of pair (a,b) is (a-b)/sqrt(2); no need for the full
  // transform
  std::vector<double> details;
  details.reserve(n_xi / 2 * n_p);
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  for (std::size_t j = 0; j < n_p; ++j)
    for (std::size_t i = 0; i + 1 < n_xi; i += 2)
      details.push_back(std::abs(
          inv_sqrt2 * (interferograms(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(j)) -
                       interferograms(static_cast<Eigen::Index>(i + 1),
                                      static_cast<Eigen::Index>(j)))));
  auto mid = details.begin() + static_cast<std::ptrdiff_t>(details.size() / 2);
  std::nth_element(details.begin(), mid, details.end());
  double med = *mid;
  if (details.size() % 2 == 0) {
    auto lower = std::max_element(details.begin(), mid);
    med = 0.5 * (med + *lower);
  }
  return med / 0.6745;
}

}  // namespace cfti
