#pragma once

#include "cfti/coherence.hpp"
#include "cfti/transforms.hpp"

#include <cstdint>
#include <vector>

// Sampling densities over measurement indices, iid index draws with
// replacement, the diagonal preconditioning weights d_r = p(draw_r)^{-1/2},
// and deduplicated "effective" index sets with multiplicities.
//
// Index conventions: CI pmfs live on the N_xi spectral rows (0-based; DC at
// N_xi/2 - 1). SI pmfs live on the flattened cube, entry k = n_xi * j + l for
// pixel j and spectral row l (column-major vec of the N_xi x N_p data matrix).

namespace cfti {

enum class Scheme { ci, si };

enum class PmfFamily { uniform, power, optimal };

struct Pmf {
  VecD probs;
  PmfFamily family = PmfFamily::uniform;
  double alpha = 0.0;
  std::size_t n_xi = 0;  // spectral length (probs.size() == n_xi * n_p)
  std::size_t n_p = 1;
  // Inverse of the power-family normalization constant C (i.e. the sum of the
  // unnormalized masses min{1, dist^-alpha} over one spectral axis). Kept
  // because the noise-inflation factor and several frozen checks need it.
  double norm_inv = 0.0;

  // 0-based row of the density peak (the DC interferogram sample).
  std::size_t dc_row() const { return n_xi / 2 - 1; }
};

struct SamplingPlan {
  Pmf pmf;
  std::vector<std::uint32_t> draws;  // ordered multiset, |draws| = M
  VecD weights;                      // d_r = p(draws[r])^{-1/2}
  Scheme scheme = Scheme::ci;
  std::uint64_t rng_seed = 0;
};

struct EffectiveSet {
  std::vector<std::uint32_t> indices;        // unique, sorted ascending
  std::vector<std::uint32_t> multiplicities; // aligned with indices
  std::size_t m_eff = 0;
  std::size_t m_total = 0;
};

// p(l) = C * min{1, |l - l0|^-alpha} on the spectral axis (1-based distance
// convention: 0-based row l is at distance |l + 1 - n_xi/2| from the DC row).
Pmf build_pmf_ci(std::size_t n_xi, double alpha);

// Pixel-uniform extension: p(k(j,l)) = p_ci(l) / n_p. The pixel marginal is
// exactly 1/n_p for every pixel.
Pmf build_pmf_si(std::size_t n_xi, std::size_t n_p, double alpha);

// p proportional to the squared exact coherence profile.
Pmf build_pmf_optimal(const CoherenceProfile& profile, std::size_t n_xi,
                      std::size_t n_p);

SamplingPlan draw_plan(const Pmf& pmf, std::size_t m, std::uint64_t seed,
                       Scheme scheme);

EffectiveSet dedup(const SamplingPlan& plan);

// E[M_eff] = sum_l 1 - (1 - p(l))^M, exactly.
double expected_effective(const Pmf& pmf, std::size_t m);

}  // namespace cfti
