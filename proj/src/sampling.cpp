#include "cfti/sampling.hpp"

#include "cfti/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cfti {

namespace {

// Unnormalized power-family masses min{1, dist^-alpha} along the spectral
// axis; the mass at the DC row (distance 0) is 1 via the min.
VecD power_masses(std::size_t n_xi, double alpha) {
  VecD m(static_cast<Eigen::Index>(n_xi));
  for (std::size_t l = 0; l < n_xi; ++l) {
    const double dist =
        std::abs(static_cast<double>(l) + 1.0 - static_cast<double>(n_xi) / 2.0);
    m[l] = dist > 0.0 ? std::min(1.0, std::pow(dist, -alpha)) : 1.0;
  }
  return m;
}

}  // namespace

Pmf build_pmf_ci(std::size_t n_xi, double alpha) {
  log2_exact(n_xi, "spectral dimension");
  if (alpha < 0.0) throw std::invalid_argument("density exponent must be >= 0");
  Pmf p;
  VecD m = power_masses(n_xi, alpha);
  p.norm_inv = m.sum();
  p.probs = m / p.norm_inv;
  p.family = alpha == 0.0 ? PmfFamily::uniform : PmfFamily::power;
  p.alpha = alpha;
  p.n_xi = n_xi;
  p.n_p = 1;
  return p;
}

Pmf build_pmf_si(std::size_t n_xi, std::size_t n_p, double alpha) {
  if (n_p == 0) throw std::invalid_argument("pixel count must be positive");
  Pmf base = build_pmf_ci(n_xi, alpha);
  Pmf p;
  p.probs.resize(static_cast<Eigen::Index>(n_xi * n_p));
  for (std::size_t j = 0; j < n_p; ++j)
    p.probs.segment(static_cast<Eigen::Index>(j * n_xi),
                    static_cast<Eigen::Index>(n_xi)) =
        base.probs / static_cast<double>(n_p);
  p.family = base.family;
  p.alpha = alpha;
  p.n_xi = n_xi;
  p.n_p = n_p;
  p.norm_inv = base.norm_inv;
  return p;
}

Pmf build_pmf_optimal(const CoherenceProfile& profile, std::size_t n_xi,
                      std::size_t n_p) {
  const auto n = static_cast<std::size_t>(profile.kappa.size());
  if (n != n_xi * n_p)
    throw std::invalid_argument("optimal pmf: profile length does not match n_xi*n_p");
  VecD sq = profile.kappa.array().square();
  const double total = sq.sum();
  if (total <= 0.0) throw std::invalid_argument("optimal pmf: zero coherence profile");
  Pmf p;
  p.probs = sq / total;
  p.family = PmfFamily::optimal;
  p.alpha = -1.0;  // sentinel: not a power-family member
  p.n_xi = n_xi;
  p.n_p = n_p;
  p.norm_inv = total;
  return p;
}

SamplingPlan draw_plan(const Pmf& pmf, std::size_t m, std::uint64_t seed,
                       Scheme scheme) {
  if (m == 0) throw std::invalid_argument("plans need at least one draw");
  const auto n = static_cast<std::size_t>(pmf.probs.size());
  if (n == 0) throw std::invalid_argument("empty pmf");

  // Inverse-CDF sampling over a cumulative table; ties in the binary search
  // resolve toward the lower index.
  VecD cdf(pmf.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += pmf.probs[i];
    cdf[i] = acc;
  }
  cdf[n - 1] = 1.0;  // guard against rounding shortfall at the top

  SamplingPlan plan;
  plan.pmf = pmf;
  plan.scheme = scheme;
  plan.rng_seed = seed;
  plan.draws.resize(m);
  plan.weights.resize(static_cast<Eigen::Index>(m));
  SplitMix64 rng(seed);
  const double* begin = cdf.data();
  const double* end = begin + n;
  for (std::size_t r = 0; r < m; ++r) {
    const double u = rng.uniform01();
    const auto idx = static_cast<std::uint32_t>(std::lower_bound(begin, end, u) - begin);
    plan.draws[r] = idx;
    const double p = pmf.probs[idx];
    if (!(p > 0.0))
      throw std::runtime_error("drew an index with zero probability");
    plan.weights[static_cast<Eigen::Index>(r)] = 1.0 / std::sqrt(p);
  }
  return plan;
}

EffectiveSet dedup(const SamplingPlan& plan) {
  std::map<std::uint32_t, std::uint32_t> counts;
  for (auto d : plan.draws) ++counts[d];
  EffectiveSet e;
  e.indices.reserve(counts.size());
  e.multiplicities.reserve(counts.size());
  for (const auto& [idx, c] : counts) {
    e.indices.push_back(idx);
    e.multiplicities.push_back(c);
  }
  e.m_eff = e.indices.size();
  e.m_total = plan.draws.size();
  return e;
}

double expected_effective(const Pmf& pmf, std::size_t m) {
  if (m == 0) return 0.0;
  double sum = 0.0;
  const auto n = static_cast<std::size_t>(pmf.probs.size());
  for (std::size_t l = 0; l < n; ++l)
    sum += 1.0 - std::pow(1.0 - pmf.probs[l], static_cast<double>(m));
  return sum;
}

}  // namespace cfti
