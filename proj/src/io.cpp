#include "cfti/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts need byte swaps");

namespace cfti {

namespace {

class Reader {
 public:
  Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open " + path + " for reading");
  }

  void raw(void* dst, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got != n)
      throw std::runtime_error(path_ + ": truncated while reading " + what +
                               ": expected " + std::to_string(n) + " bytes at offset " +
                               std::to_string(offset_) + ", got " + std::to_string(got));
    offset_ += n;
  }

  template <typename T>
  T scalar(const char* what) {
    T v;
    raw(&v, sizeof(T), what);
    return v;
  }

  std::size_t offset() const { return offset_; }

  void expect_eof() {
    char c;
    in_.read(&c, 1);
    if (!in_.eof())
      throw std::runtime_error(path_ + ": trailing bytes after offset " +
                               std::to_string(offset_));
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t offset_ = 0;
};

class Writer {
 public:
  Writer(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  }

  void raw(const void* src, std::size_t n) {
    out_.write(static_cast<const char*>(src), static_cast<std::streamsize>(n));
    if (!out_) throw std::runtime_error("write failure on " + path_);
  }

  template <typename T>
  void scalar(T v) {
    raw(&v, sizeof(T));
  }

 private:
  std::string path_;
  std::ofstream out_;
};

constexpr char kVolumeMagic[4] = {'H', 'S', 'V', '1'};
constexpr char kMeasMagic[4] = {'F', 'T', 'I', 'M'};

}  // namespace

void write_volume(const HSVolume& vol, const std::string& path) {
  if (vol.data.rows() != static_cast<Eigen::Index>(vol.n_xi) ||
      vol.data.cols() != static_cast<Eigen::Index>(vol.n_p()))
    throw std::invalid_argument("volume dimensions disagree with its data matrix");
  Writer w(path);
  w.raw(kVolumeMagic, 4);
  w.scalar<std::uint32_t>(static_cast<std::uint32_t>(vol.n_xi));
  w.scalar<std::uint32_t>(static_cast<std::uint32_t>(vol.side));
  w.scalar<std::uint32_t>(static_cast<std::uint32_t>(vol.side));
  w.raw(vol.data.data(), sizeof(double) * static_cast<std::size_t>(vol.data.size()));
}

HSVolume read_volume(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.raw(magic, 4, "magic");
  if (std::memcmp(magic, kVolumeMagic, 4) != 0)
    throw std::runtime_error(path + ": not a volume file (bad magic at offset 0)");
  const auto n_xi = r.scalar<std::uint32_t>("spectral length");
  const auto side_a = r.scalar<std::uint32_t>("side");
  const auto side_b = r.scalar<std::uint32_t>("side");
  if (side_a != side_b)
    throw std::runtime_error(path + ": non-square spatial dimensions " +
                             std::to_string(side_a) + "x" + std::to_string(side_b));
  if (n_xi == 0 || side_a == 0 || !is_pow2(n_xi) || !is_pow2(side_a))
    throw std::runtime_error(path + ": dimensions must be nonzero powers of two");
  HSVolume vol;
  vol.n_xi = n_xi;
  vol.side = side_a;
  vol.data.resize(static_cast<Eigen::Index>(n_xi),
                  static_cast<Eigen::Index>(vol.n_p()));
  r.raw(vol.data.data(), sizeof(double) * static_cast<std::size_t>(vol.data.size()),
        "volume samples");
  r.expect_eof();
  vol.symmetric = volume_is_symmetric(vol.data);
  return vol;
}

void write_measurements(const MeasurementSet& meas, const std::string& path) {
  Writer w(path);
  w.raw(kMeasMagic, 4);
  w.scalar<std::uint8_t>(1);  // version
  w.scalar<std::uint8_t>(meas.scheme == Scheme::ci ? 0 : 1);
  w.scalar<std::uint8_t>(meas.deduplicated ? 1 : 0);
  std::uint8_t family = 0;
  switch (meas.plan.pmf.family) {
    case PmfFamily::uniform: family = 0; break;
    case PmfFamily::power: family = 1; break;
    case PmfFamily::optimal: family = 2; break;
  }
  w.scalar<std::uint8_t>(family);
  w.scalar<std::uint32_t>(static_cast<std::uint32_t>(meas.n_xi));
  w.scalar<std::uint32_t>(static_cast<std::uint32_t>(meas.side));
  w.scalar<double>(meas.plan.pmf.alpha);
  w.scalar<std::uint64_t>(meas.plan.rng_seed);
  w.scalar<std::uint64_t>(static_cast<std::uint64_t>(meas.plan.draws.size()));
  w.scalar<double>(meas.sigma);
  w.scalar<double>(meas.amplification);
  w.scalar<std::uint64_t>(static_cast<std::uint64_t>(meas.values.rows()));
  w.scalar<std::uint64_t>(static_cast<std::uint64_t>(meas.values.cols()));
  w.raw(meas.values.data(),
        sizeof(cxd) * static_cast<std::size_t>(meas.values.size()));
}

MeasurementSet read_measurements(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.raw(magic, 4, "magic");
  if (std::memcmp(magic, kMeasMagic, 4) != 0)
    throw std::runtime_error(path + ": not a measurement file (bad magic at offset 0)");
  const auto version = r.scalar<std::uint8_t>("version");
  if (version != 1)
    throw std::runtime_error(path + ": unsupported version " + std::to_string(version));
  const auto scheme_byte = r.scalar<std::uint8_t>("scheme");
  if (scheme_byte > 1)
    throw std::runtime_error(path + ": unknown scheme byte at offset 5");
  const auto dedup_flag = r.scalar<std::uint8_t>("dedup flag");
  const auto family_byte = r.scalar<std::uint8_t>("density family");
  if (family_byte > 2)
    throw std::runtime_error(path + ": unknown density family at offset 7");
  const auto n_xi = r.scalar<std::uint32_t>("spectral length");
  const auto side = r.scalar<std::uint32_t>("side");
  const auto alpha = r.scalar<double>("alpha");
  const auto plan_seed = r.scalar<std::uint64_t>("plan seed");
  const auto m = r.scalar<std::uint64_t>("draw count");
  const auto sigma = r.scalar<double>("sigma");
  const auto amplification = r.scalar<double>("amplification");
  const auto rows = r.scalar<std::uint64_t>("value rows");
  const auto cols = r.scalar<std::uint64_t>("value cols");
  if (!is_pow2(n_xi) || !is_pow2(side))
    throw std::runtime_error(path + ": dimensions must be powers of two");

  MeasurementSet meas;
  meas.scheme = scheme_byte == 0 ? Scheme::ci : Scheme::si;
  meas.deduplicated = dedup_flag != 0;
  meas.n_xi = n_xi;
  meas.side = side;
  meas.sigma = sigma;
  meas.amplification = amplification;

  const std::size_t n_p = meas.n_p();
  Pmf pmf;
  switch (family_byte) {
    case 0:
    case 1:
      pmf = meas.scheme == Scheme::ci ? build_pmf_ci(n_xi, alpha)
                                      : build_pmf_si(n_xi, n_p, alpha);
      break;
    case 2: {
      CoherenceProfile prof = meas.scheme == Scheme::ci
                                  ? kappa_ci_exact(n_xi)
                                  : kappa_si_exact(n_xi, n_p);
      pmf = build_pmf_optimal(prof, n_xi, meas.scheme == Scheme::ci ? 1 : n_p);
      break;
    }
  }
  meas.plan = draw_plan(pmf, static_cast<std::size_t>(m), plan_seed, meas.scheme);
  if (meas.deduplicated) {
    meas.row_indices = dedup(meas.plan).indices;
  } else {
    meas.row_indices.assign(meas.plan.draws.begin(), meas.plan.draws.end());
  }

  const std::uint64_t want_rows = meas.deduplicated
                                      ? meas.row_indices.size()
                                      : static_cast<std::uint64_t>(m);
  const std::uint64_t want_cols = meas.scheme == Scheme::ci ? n_p : 1;
  if (rows != want_rows || cols != want_cols)
    throw std::runtime_error(path + ": value block is " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " but the plan implies " +
                             std::to_string(want_rows) + "x" +
                             std::to_string(want_cols));
  meas.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  r.raw(meas.values.data(),
        sizeof(cxd) * static_cast<std::size_t>(meas.values.size()), "values");
  r.expect_eof();
  return meas;
}

namespace {

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  out += buf;
}

}  // namespace

std::string format_report(const ExperimentReport& report, bool zero_wall_ms) {
  std::string out(kReportHeader);
  out += '\n';
  for (const auto& row : report.rows) {
    out += row.scheme;
    out += ',';
    append_num(out, row.alpha);
    out += ',';
    append_num(out, row.ratio);
    out += ',';
    out += std::to_string(row.m);
    out += ',';
    out += std::to_string(row.m_eff);
    out += ',';
    append_num(out, row.sigma);
    out += ',';
    append_num(out, row.epsilon);
    out += ',';
    out += row.constrained ? '1' : '0';
    out += ',';
    out += row.metric_name;
    out += ',';
    append_num(out, row.metric_value);
    out += ',';
    out += std::to_string(row.trial);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", zero_wall_ms ? 0.0 : row.wall_ms);
    out += buf;
    out += '\n';
  }
  return out;
}

void write_report(const ExperimentReport& report, const std::string& path,
                  bool zero_wall_ms) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::string text = format_report(report, zero_wall_ms);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace cfti
