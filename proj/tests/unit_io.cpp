#include "cfti/experiments.hpp"
#include "cfti/io.hpp"
#include "cfti/rng.hpp"

#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

using namespace cfti;
namespace fs = std::filesystem;

namespace {

std::string tmp_path(const char* name) {
  return (fs::temp_directory_path() / name).string();
}

HSVolume random_volume(std::size_t n_xi, std::size_t side, std::uint64_t seed) {
  HSVolume vol;
  vol.n_xi = n_xi;
  vol.side = side;
  vol.data.resize(static_cast<Eigen::Index>(n_xi),
                  static_cast<Eigen::Index>(side * side));
  SplitMix64 rng(seed);
  for (Eigen::Index i = 0; i < vol.data.size(); ++i) vol.data.data()[i] = rng.gaussian();
  return vol;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void check_same_plan(const MeasurementSet& a, const MeasurementSet& b) {
  CHECK(b.scheme == a.scheme);
  CHECK(b.n_xi == a.n_xi);
  CHECK(b.side == a.side);
  CHECK(b.sigma == a.sigma);
  CHECK(b.amplification == a.amplification);
  CHECK(b.deduplicated == a.deduplicated);
  CHECK(b.row_indices == a.row_indices);
  CHECK(b.plan.draws == a.plan.draws);
  CHECK(b.plan.rng_seed == a.plan.rng_seed);
  REQUIRE(b.plan.weights.size() == a.plan.weights.size());
  CHECK((b.plan.weights.array() == a.plan.weights.array()).all());
  REQUIRE(b.values.rows() == a.values.rows());
  REQUIRE(b.values.cols() == a.values.cols());
  CHECK((b.values.array() == a.values.array()).all());
}

}  // namespace

TEST_CASE("volume files round-trip bit for bit") {
  const std::string path = tmp_path("cfti_vol_roundtrip.hsv");
  HSVolume vol = random_volume(16, 4, 1);
  write_volume(vol, path);
  HSVolume back = read_volume(path);
  CHECK(back.n_xi == 16);
  CHECK(back.side == 4);
  CHECK((back.data.array() == vol.data.array()).all());
  CHECK_FALSE(back.symmetric);  // generic random data has no mirror symmetry

  SyntheticVolumeSpec spec;
  spec.n_xi = 32;
  spec.side = 2;
  write_volume(gen_synthetic_bio(spec), path);
  CHECK(read_volume(path).symmetric);  // re-derived from the samples
  fs::remove(path);
}

TEST_CASE("volume files reject dimension mismatches and bad headers") {
  HSVolume bad;
  bad.n_xi = 8;
  bad.side = 2;
  bad.data = MatD::Zero(8, 3);  // should be 8 x 4
  CHECK_THROWS_AS(write_volume(bad, tmp_path("cfti_vol_bad.hsv")),
                  std::invalid_argument);

  const std::string path = tmp_path("cfti_vol_header.hsv");
  auto write_header = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    std::ofstream out(path, std::ios::binary);
    out.write("HSV1", 4);
    out.write(reinterpret_cast<const char*>(&a), 4);
    out.write(reinterpret_cast<const char*>(&b), 4);
    out.write(reinterpret_cast<const char*>(&c), 4);
  };

  write_header(16, 2, 3);
  CHECK_THROWS_WITH_AS(read_volume(path),
                       doctest::Contains("non-square spatial dimensions"),
                       std::runtime_error);
  write_header(16, 3, 3);
  CHECK_THROWS_WITH_AS(read_volume(path),
                       doctest::Contains("powers of two"), std::runtime_error);
  {
    std::ofstream out(path, std::ios::binary);
    out.write("NOPE", 4);
  }
  CHECK_THROWS_WITH_AS(read_volume(path), doctest::Contains("bad magic"),
                       std::runtime_error);
  fs::remove(path);
}

TEST_CASE("truncated and padded volume files are reported with offsets") {
  const std::string path = tmp_path("cfti_vol_trunc.hsv");
  write_volume(random_volume(8, 2, 3), path);
  const auto full = fs::file_size(path);

  fs::resize_file(path, 20);  // mid-payload
  CHECK_THROWS_WITH_AS(read_volume(path),
                       doctest::Contains("truncated while reading"),
                       std::runtime_error);
  try {
    read_volume(path);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }

  write_volume(random_volume(8, 2, 3), path);
  {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    out.put('x');
  }
  CHECK(fs::file_size(path) == full + 1);
  CHECK_THROWS_WITH_AS(read_volume(path), doctest::Contains("trailing bytes"),
                       std::runtime_error);
  fs::remove(path);
}

TEST_CASE("measurement files round-trip every acquisition flavor") {
  const std::string path = tmp_path("cfti_meas_roundtrip.ftim");
  HSVolume vol = random_volume(16, 2, 7);

  SUBCASE("shared-OPD, power density, noisy") {
    SamplingPlan plan = draw_plan(build_pmf_ci(16, 1.0), 12, 5, Scheme::ci);
    MeasurementSet meas = ci_forward(vol, plan, 0.3, 77);
    write_measurements(meas, path);
    check_same_plan(meas, read_measurements(path));
  }
  SUBCASE("per-pixel, uniform density") {
    SamplingPlan plan = draw_plan(build_pmf_si(16, 4, 0.0), 10, 9, Scheme::si);
    MeasurementSet meas = si_forward(vol, plan, 0.1, 3);
    write_measurements(meas, path);
    check_same_plan(meas, read_measurements(path));
  }
  SUBCASE("shared-OPD, coherence-optimal density") {
    Pmf pmf = build_pmf_optimal(kappa_ci_exact(16), 16, 1);
    SamplingPlan plan = draw_plan(pmf, 12, 13, Scheme::ci);
    MeasurementSet meas = ci_forward(vol, plan, 0.0, 0);
    write_measurements(meas, path);
    check_same_plan(meas, read_measurements(path));
  }
  SUBCASE("deduplicated shared-OPD") {
    SamplingPlan plan = draw_plan(build_pmf_ci(16, 1.0), 24, 21, Scheme::ci);
    MatC nyq = nyquist_forward(vol, 0.2, 55);
    MeasurementSet meas = dedup_ci_forward(nyq, vol, plan, 0.2);
    write_measurements(meas, path);
    MeasurementSet back = read_measurements(path);
    CHECK(back.deduplicated);
    check_same_plan(meas, back);
  }
  fs::remove(path);
}

TEST_CASE("measurement files validate the header against the stored plan") {
  const std::string path = tmp_path("cfti_meas_corrupt.ftim");
  HSVolume vol = random_volume(16, 2, 7);
  SamplingPlan plan = draw_plan(build_pmf_ci(16, 1.0), 12, 5, Scheme::ci);
  write_measurements(ci_forward(vol, plan, 0.0, 0), path);

  {
    // bump the stored draw count (u64 at byte 32): the redrawn plan then
    // implies a different value-block shape
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(32);
    const std::uint64_t m = 13;
    f.write(reinterpret_cast<const char*>(&m), 8);
  }
  CHECK_THROWS_WITH_AS(read_measurements(path),
                       doctest::Contains("the plan implies"), std::runtime_error);

  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(4);
    const std::uint8_t version = 9;
    f.write(reinterpret_cast<const char*>(&version), 1);
  }
  CHECK_THROWS_WITH_AS(read_measurements(path),
                       doctest::Contains("unsupported version"),
                       std::runtime_error);
  fs::remove(path);

  const std::string missing = tmp_path("cfti_meas_missing.ftim");
  fs::remove(missing);
  CHECK_THROWS_WITH_AS(read_measurements(missing), doctest::Contains("cannot open"),
                       std::runtime_error);
}

TEST_CASE("report rows serialize with pinned formatting") {
  ReportRow row;
  row.scheme = "ci";
  row.alpha = 1.0;
  row.ratio = 0.5;
  row.m = 64;
  row.m_eff = 50;
  row.sigma = 0.25;
  row.epsilon = 12.345678901234;
  row.constrained = true;
  row.metric_name = "rsnr_cs";
  row.metric_value = -3.5;
  row.trial = 7;
  row.seed = 123456789;
  row.wall_ms = 12.5;
  ExperimentReport rep;
  rep.rows.push_back(row);

  const std::string expected_zeroed =
      std::string(kReportHeader) +
      "\nci,1,0.5,64,50,0.25,12.3456789,1,rsnr_cs,-3.5,7,123456789,0.000\n";
  CHECK(format_report(rep, true) == expected_zeroed);
  const std::string timed = format_report(rep, false);
  CHECK(timed.substr(timed.rfind(',') + 1) == "12.500\n");

  const std::string path = tmp_path("cfti_report.csv");
  write_report(rep, path, true);
  CHECK(slurp(path) == expected_zeroed);
  fs::remove(path);
}

TEST_CASE("zeroed wall clocks make reports reproducible across reruns") {
  PhaseTransitionSpec spec;
  spec.n_xi = 16;
  spec.side = 2;
  spec.k_xi = 1;
  spec.k_p = 1;
  spec.alphas = {1.0};
  spec.include_optimal = false;
  spec.ratios = {0.5};
  spec.trials = 2;
  spec.seed = 4;
  spec.max_iterations = 1200;

  const std::string a = format_report(run_phase_transition(spec), true);
  const std::string b = format_report(run_phase_transition(spec), true);
  CHECK(a == b);
  CHECK(a.rfind(std::string(kReportHeader) + "\n", 0) == 0);
}
