#pragma once

#include "cfti/experiments.hpp"
#include "cfti/sensing.hpp"

#include <string>

// File formats.
//
// Volume (.hsv): magic "HSV1"; three little-endian u32 {n_xi, side, side};
// then n_xi*side*side little-endian f64, spectral index fastest, pixels in
// column-major order (the byte stream is exactly vec(X)). The symmetry flag
// is re-derived on read by checking the spectral mirror identity.
//
// Measurements (.ftim): magic "FTIM"; u8 version; u8 scheme (0 shared-OPD,
// 1 per-pixel); u8 dedup flag; u8 density family (0 uniform, 1 power,
// 2 optimal); u32 n_xi; u32 side; f64 alpha; u64 plan seed; u64 draw count M;
// f64 sigma; f64 amplification; u64 value rows; u64 value cols; then
// rows*cols little-endian (re, im) f64 pairs, column-major. The plan itself
// is reproduced on read by rebuilding the density and redrawing at the stored
// seed, which the seeded generator guarantees is exact.
//
// Report (.csv): fixed header
//   scheme,alpha,ratio,M,M_eff,sigma,epsilon,constrained,metric_name,metric_value,trial,seed,wall_ms
// one row per ReportRow; aggregate rows carry trial = -1.

namespace cfti {

inline constexpr const char* kReportHeader =
    "scheme,alpha,ratio,M,M_eff,sigma,epsilon,constrained,metric_name,metric_value,"
    "trial,seed,wall_ms";

void write_volume(const HSVolume& vol, const std::string& path);
HSVolume read_volume(const std::string& path);

void write_measurements(const MeasurementSet& meas, const std::string& path);
MeasurementSet read_measurements(const std::string& path);

// zero_wall_ms replaces wall-clock values with 0 so reruns at the same seed
// serialize byte-identically.
void write_report(const ExperimentReport& report, const std::string& path,
                  bool zero_wall_ms);

std::string format_report(const ExperimentReport& report, bool zero_wall_ms);

}  // namespace cfti
