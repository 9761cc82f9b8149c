#include "cfti/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace cfti;

namespace {

std::size_t count_above(const VecD& v, double tol) {
  std::size_t c = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > tol) ++c;
  return c;
}

bool rows_identical(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const ReportRow &x = a.rows[i], &y = b.rows[i];
    if (x.scheme != y.scheme || x.alpha != y.alpha || x.ratio != y.ratio ||
        x.m != y.m || x.m_eff != y.m_eff || x.sigma != y.sigma ||
        x.epsilon != y.epsilon || x.constrained != y.constrained ||
        x.metric_name != y.metric_name || x.metric_value != y.metric_value ||
        x.trial != y.trial || x.seed != y.seed)
      return false;  // wall_ms intentionally ignored
  }
  return true;
}

}  // namespace

TEST_CASE("sparse phantoms have the advertised support size") {
  const std::size_t n_xi = 32, side = 4, k_xi = 3, k_p = 2;

  HSVolume ci = gen_sparse_phantom(n_xi, side, k_xi, k_p, Scheme::ci,
                                   Haar2DMode::isotropic, 99);
  std::size_t total = 0, live_cols = 0;
  for (Eigen::Index j = 0; j < ci.data.cols(); ++j) {
    VecD coef = haar1d_analysis(VecD(ci.data.col(j)));
    const std::size_t nz = count_above(coef, 1e-12);
    if (nz > 0) ++live_cols;
    CHECK(nz <= k_xi);
    total += nz;
  }
  CHECK(total == k_xi * k_p);
  CHECK(live_cols == k_p);

  HSVolume si = gen_sparse_phantom(n_xi, side, k_xi, k_p, Scheme::si,
                                   Haar2DMode::anisotropic, 99);
  KronOperator psi{KronFactor::haar2d(side, Haar2DMode::anisotropic),
                   KronFactor::haar1d(n_xi)};
  VecC flat =
      Eigen::Map<const VecD>(si.data.data(), si.data.size()).cast<cxd>();
  VecC coef = kron_adjoint(psi, flat);
  std::size_t nz = 0;
  for (Eigen::Index i = 0; i < coef.size(); ++i)
    if (std::abs(coef[i]) > 1e-12) ++nz;
  CHECK(nz == k_xi * k_p);
}

TEST_CASE("synthetic biological volumes are nonnegative, mirrored, compressible") {
  SyntheticVolumeSpec spec;
  spec.n_xi = 512;
  spec.side = 16;
  spec.endmembers = 3;
  HSVolume vol = gen_synthetic_bio(spec);
  REQUIRE(vol.n_xi == 512);
  REQUIRE(vol.n_p() == 256);
  CHECK(vol.data.minCoeff() >= 0.0);
  CHECK(vol.symmetric);
  CHECK(volume_is_symmetric(vol.data));
  CHECK(vol.data.squaredNorm() > 0.0);

  auto top32 = [](const VecD& s) {
    VecD c = haar1d_analysis(s);
    VecD mag = c.cwiseAbs();
    std::sort(mag.data(), mag.data() + mag.size(), std::greater<double>());
    return mag.head(32).squaredNorm() / c.squaredNorm();
  };

  // every generated endmember spectrum keeps >= 99% of its energy in its 32
  // largest wavelet terms (single-endmember volumes expose the raw spectra)
  for (std::uint64_t seed = 1; seed <= 16; ++seed) {
    SyntheticVolumeSpec probe{512, 1, 1, {}, AbundanceSource::uniform, true, seed};
    HSVolume rank1 = gen_synthetic_bio(probe);
    CHECK(top32(VecD(rank1.data.col(0))) >= 0.99);
  }

  // pixel mixtures of three spectra stay nearly as compressible
  double worst = 1.0;
  for (Eigen::Index j = 0; j < vol.data.cols(); ++j) {
    if (vol.data.col(j).squaredNorm() <= 0.0) continue;
    worst = std::min(worst, top32(VecD(vol.data.col(j))));
  }
  CHECK(worst >= 0.97);

  spec.abundance = AbundanceSource::uniform;
  HSVolume uni = gen_synthetic_bio(spec);
  CHECK(uni.data.minCoeff() >= 0.0);
  CHECK(volume_is_symmetric(uni.data));

  spec.symmetric = false;
  HSVolume asym = gen_synthetic_bio(spec);
  CHECK_FALSE(asym.symmetric);

  SyntheticVolumeSpec bad = spec;
  bad.endmembers = 0;
  CHECK_THROWS_AS(gen_synthetic_bio(bad), std::invalid_argument);
  bad = spec;
  bad.peaks = {{{4.0, 3.0, 1.0}}};  // one list for three endmembers
  CHECK_THROWS_AS(gen_synthetic_bio(bad), std::invalid_argument);
  bad.peaks = {{{0.0, 3.0, 1.0}}, {{4.0, 3.0, 1.0}}, {{4.0, 3.0, 1.0}}};
  bad.endmembers = 3;  // center 0 is outside the one-sided range
  CHECK_THROWS_AS(gen_synthetic_bio(bad), std::invalid_argument);
}

TEST_CASE("phase-transition sweeps report per-trial and aggregate rows") {
  PhaseTransitionSpec spec;
  spec.scheme = Scheme::ci;
  spec.n_xi = 32;
  spec.side = 2;
  spec.k_xi = 1;
  spec.k_p = 1;
  spec.alphas = {1.0};
  spec.include_optimal = false;
  spec.ratios = {0.75, 1.0};
  spec.trials = 3;
  spec.seed = 42;
  spec.max_iterations = 1500;

  ExperimentReport rep = run_phase_transition(spec);
  REQUIRE(rep.rows.size() == 2 * (3 + 2));

  std::size_t trial_rows = 0;
  for (const auto& row : rep.rows) {
    CHECK(row.scheme == "ci");
    CHECK(row.alpha == 1.0);
    if (row.trial >= 0) {
      ++trial_rows;
      CHECK(row.metric_name == "success");
      CHECK((row.metric_value == 0.0 || row.metric_value == 1.0));
      CHECK(row.m == static_cast<std::size_t>(std::llround(row.ratio * 32)));
      CHECK(row.m_eff <= row.m);
      CHECK(row.m_eff > 0);
    } else {
      CHECK((row.metric_name == "success_rate" ||
             row.metric_name == "nonconverged_rate"));
    }
  }
  CHECK(trial_rows == 6);

  // a 1-sparse spectrum from most of a 32-point transform's rows is easy
  for (const auto& row : rep.rows)
    if (row.trial < 0 && row.metric_name == "success_rate")
      CHECK(row.metric_value >= 2.0 / 3.0);

  ExperimentReport rerun = run_phase_transition(spec);
  CHECK(rows_identical(rep, rerun));
}

TEST_CASE("exposure sweeps emit both arms with scaled noise levels") {
  ExposureSweepSpec spec;
  spec.scheme = Scheme::ci;
  spec.volume = {64, 4, 2, {}, AbundanceSource::procedural, true, 7};
  spec.ratios = {0.5};
  spec.trials = 2;
  spec.noise_trials = 20;
  spec.seed = 31;
  spec.recon.max_iterations = 800;

  ExperimentReport rep = run_exposure_sweep(spec);
  REQUIRE(rep.rows.size() == 2 * (2 * 2 + 2));

  double sigma_unc = -1.0, sigma_con = -1.0;
  for (const auto& row : rep.rows) {
    CHECK(row.m == 32);
    CHECK(row.epsilon > 0.0);
    if (row.constrained)
      sigma_con = row.sigma;
    else
      sigma_unc = row.sigma;
    if (row.trial < 0)
      CHECK((row.metric_name == "rsnr_cs_mean" || row.metric_name == "rsnr_me_mean"));
    else
      CHECK((row.metric_name == "rsnr_cs" || row.metric_name == "rsnr_me"));
  }
  // doubling every retained sample's exposure halves the effective noise
  CHECK(sigma_con == doctest::Approx(sigma_unc / 2.0));

  // aggregates equal the mean of their per-trial rows
  for (const auto& agg : rep.rows) {
    if (agg.trial >= 0) continue;
    const std::string base =
        agg.metric_name == "rsnr_cs_mean" ? "rsnr_cs" : "rsnr_me";
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : rep.rows)
      if (row.trial >= 0 && row.constrained == agg.constrained &&
          row.metric_name == base) {
        sum += row.metric_value;
        ++n;
      }
    REQUIRE(n == 2);
    CHECK(agg.metric_value == doctest::Approx(sum / 2.0));
  }

  ExposureSweepSpec bad = spec;
  bad.ratios = {1.5};
  CHECK_THROWS_AS(run_exposure_sweep(bad), std::invalid_argument);
  bad = spec;
  bad.run_constrained = bad.run_unconstrained = false;
  CHECK_THROWS_AS(run_exposure_sweep(bad), std::invalid_argument);
}

TEST_CASE("brighter illumination shrinks the retained row budget") {
  DedupPipelineSpec spec;
  spec.volume = {64, 4, 2, {}, AbundanceSource::procedural, true, 7};
  spec.intensities = {100, 200};
  spec.trials = 2;
  spec.seed = 8;
  spec.recon.max_iterations = 800;

  ExperimentReport rep = run_dedup_pipeline(spec);
  REQUIRE(rep.rows.size() == 2 * (3 * 2 + 2));

  for (const auto& row : rep.rows) {
    CHECK(row.constrained);
    if (row.ratio == 1.0)
      CHECK(row.m == 64);
    else
      CHECK(row.m == 32);
    if (row.metric_name == "m_eff_ratio")
      CHECK(row.metric_value ==
            doctest::Approx(static_cast<double>(row.m_eff) / 64.0));
    if (row.metric_name == "sigma_rm") {
      // the interferograms are noise-dominated at these settings
      CHECK(row.metric_value > 0.5 * row.sigma);
      CHECK(row.metric_value < 2.0 * row.sigma);
    }
  }

  DedupPipelineSpec bad = spec;
  bad.intensities = {50};
  CHECK_THROWS_AS(run_dedup_pipeline(bad), std::invalid_argument);
}
