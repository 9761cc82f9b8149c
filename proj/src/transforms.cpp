#include "cfti/transforms.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfti {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n, const char* what) {
  if (!is_pow2(n))
    throw std::invalid_argument(std::string(what) + " must be a power of two, got " +
                                std::to_string(n));
  std::size_t l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

// ---- FFT plumbing --------------------------------------------------------
// FFTW plan creation is not thread-safe; execution through fftw_execute_dft
// is. Plans are cached per (length, direction) and reused with caller-owned
// buffers (FFTW_UNALIGNED keeps that legal for any allocation).

namespace {

std::mutex g_plan_mutex;

fftw_plan plan_for(std::size_t n, int sign) {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  std::scoped_lock lock(g_plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cxd> in(n), out(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n),
                                 reinterpret_cast<fftw_complex*>(in.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(key, p);
  return p;
}

void fft_pow2(const cxd* in, cxd* out, std::size_t n, int sign) {
  fftw_plan p = plan_for(n, sign);
  fftw_execute_dft(p, const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

// The centered basis column for frequency k = r + 1 - n/2 is
// phi_r(t) = exp(2 pi i (r + 1 - n/2) t / n) / sqrt(n). Against FFTW's
// unnormalized FFT_fwd(x)[m] = sum_t x_t exp(-2 pi i m t / n) this gives
//   (F^* x)[r] = FFT_fwd(x)[(r + n/2 + 1) mod n] / sqrt(n),
// because conj(phi_r) matches FFTW bin m = (n/2 - 1 - r) mod n reversed,
// i.e. bin (r + n/2 + 1) mod n. The adjoint scatters back and runs the
// backward FFT with the same 1/sqrt(n) normalization.
VecC dft_forward(const VecC& x) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  log2_exact(n, "dft length");
  VecC bins(x.size());
  fft_pow2(x.data(), bins.data(), n, FFTW_FORWARD);
  VecC y(x.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const std::size_t shift = n / 2 + 1, mask = n - 1;
  for (std::size_t r = 0; r < n; ++r) y[r] = scale * bins[(r + shift) & mask];
  return y;
}

VecC dft_forward(const VecD& x) { return dft_forward(VecC(x.cast<cxd>())); }

VecC dft_adjoint(const VecC& y) {
  const std::size_t n = static_cast<std::size_t>(y.size());
  log2_exact(n, "dft length");
  VecC bins = VecC::Zero(y.size());
  const std::size_t shift = n / 2 + 1, mask = n - 1;
  for (std::size_t r = 0; r < n; ++r) bins[(r + shift) & mask] = y[r];
  VecC x(y.size());
  fft_pow2(bins.data(), x.data(), n, FFTW_BACKWARD);
  x *= 1.0 / std::sqrt(static_cast<double>(n));
  return x;
}

// ---- Haar kernels ---------------------------------------------------------

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

template <typename Vec>
Vec haar1d_analysis_t(const Vec& x) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  log2_exact(n, "haar length");
  Vec a = x;
  Vec tmp(x.size());
  for (std::size_t m = n; m >= 2; m /= 2) {
    for (std::size_t i = 0; i < m / 2; ++i) {
      tmp[i] = kInvSqrt2 * (a[2 * i] + a[2 * i + 1]);
      tmp[m / 2 + i] = kInvSqrt2 * (a[2 * i] - a[2 * i + 1]);
    }
    a.head(m) = tmp.head(m);
  }
  return a;
}

template <typename Vec>
Vec haar1d_synthesis_t(const Vec& coeffs) {
  const std::size_t n = static_cast<std::size_t>(coeffs.size());
  log2_exact(n, "haar length");
  Vec a = coeffs;
  Vec tmp(coeffs.size());
  for (std::size_t m = 2; m <= n; m *= 2) {
    for (std::size_t i = 0; i < m / 2; ++i) {
      tmp[2 * i] = kInvSqrt2 * (a[i] + a[m / 2 + i]);
      tmp[2 * i + 1] = kInvSqrt2 * (a[i] - a[m / 2 + i]);
    }
    a.head(m) = tmp.head(m);
  }
  return a;
}

// One pairwise averaging/differencing pass over the first m entries of a
// column or row expression.
template <typename Block, typename Scratch>
void pair_analyze(Block seg, Scratch& tmp, std::size_t m) {
  for (std::size_t i = 0; i < m / 2; ++i) {
    tmp[i] = kInvSqrt2 * (seg[2 * i] + seg[2 * i + 1]);
    tmp[m / 2 + i] = kInvSqrt2 * (seg[2 * i] - seg[2 * i + 1]);
  }
  for (std::size_t i = 0; i < m; ++i) seg[i] = tmp[i];
}

template <typename Block, typename Scratch>
void pair_synthesize(Block seg, Scratch& tmp, std::size_t m) {
  for (std::size_t i = 0; i < m / 2; ++i) {
    tmp[2 * i] = kInvSqrt2 * (seg[i] + seg[m / 2 + i]);
    tmp[2 * i + 1] = kInvSqrt2 * (seg[i] - seg[m / 2 + i]);
  }
  for (std::size_t i = 0; i < m; ++i) seg[i] = tmp[i];
}

template <typename Mat>
Mat haar2d_analysis_t(const Mat& image, Haar2DMode mode) {
  const std::size_t side = static_cast<std::size_t>(image.rows());
  if (image.rows() != image.cols())
    throw std::invalid_argument("haar2d expects a square image");
  log2_exact(side, "haar2d side");
  Mat b = image;
  using Col = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
  if (mode == Haar2DMode::anisotropic) {
    for (std::size_t j = 0; j < side; ++j)
      b.col(j) = haar1d_analysis_t(Col(b.col(j)));
    for (std::size_t i = 0; i < side; ++i)
      b.row(i) = haar1d_analysis_t(Col(b.row(i).transpose())).transpose();
    return b;
  }
  std::vector<typename Mat::Scalar> tmp(side);
  for (std::size_t m = side; m >= 2; m /= 2) {
    for (std::size_t j = 0; j < m; ++j) pair_analyze(b.col(j), tmp, m);
    for (std::size_t i = 0; i < m; ++i) pair_analyze(b.row(i), tmp, m);
  }
  return b;
}

template <typename Mat>
Mat haar2d_synthesis_t(const Mat& coeffs, Haar2DMode mode) {
  const std::size_t side = static_cast<std::size_t>(coeffs.rows());
  if (coeffs.rows() != coeffs.cols())
    throw std::invalid_argument("haar2d expects a square coefficient block");
  log2_exact(side, "haar2d side");
  Mat b = coeffs;
  using Col = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
  if (mode == Haar2DMode::anisotropic) {
    for (std::size_t i = 0; i < side; ++i)
      b.row(i) = haar1d_synthesis_t(Col(b.row(i).transpose())).transpose();
    for (std::size_t j = 0; j < side; ++j)
      b.col(j) = haar1d_synthesis_t(Col(b.col(j)));
    return b;
  }
  std::vector<typename Mat::Scalar> tmp(side);
  for (std::size_t m = 2; m <= side; m *= 2) {
    for (std::size_t i = 0; i < m; ++i) pair_synthesize(b.row(i), tmp, m);
    for (std::size_t j = 0; j < m; ++j) pair_synthesize(b.col(j), tmp, m);
  }
  return b;
}

}  // namespace

VecD haar1d_analysis(const VecD& x) { return haar1d_analysis_t(x); }
VecD haar1d_synthesis(const VecD& c) { return haar1d_synthesis_t(c); }
VecC haar1d_analysis(const VecC& x) { return haar1d_analysis_t(x); }
VecC haar1d_synthesis(const VecC& c) { return haar1d_synthesis_t(c); }

MatD haar2d_analysis(const MatD& image, Haar2DMode mode) {
  return haar2d_analysis_t(image, mode);
}
MatD haar2d_synthesis(const MatD& coeffs, Haar2DMode mode) {
  return haar2d_synthesis_t(coeffs, mode);
}
MatC haar2d_analysis(const MatC& image, Haar2DMode mode) {
  return haar2d_analysis_t(image, mode);
}
MatC haar2d_synthesis(const MatC& coeffs, Haar2DMode mode) {
  return haar2d_synthesis_t(coeffs, mode);
}

// ---- Kronecker factors ----------------------------------------------------

KronFactor KronFactor::identity(std::size_t n) { return {FactorKind::identity, n, 0, {}}; }

KronFactor KronFactor::dft(std::size_t n) {
  log2_exact(n, "dft length");
  return {FactorKind::dft, n, 0, {}};
}

KronFactor KronFactor::haar1d(std::size_t n) {
  log2_exact(n, "haar length");
  return {FactorKind::haar1d, n, 0, {}};
}

KronFactor KronFactor::haar2d(std::size_t side, Haar2DMode mode) {
  log2_exact(side, "haar2d side");
  return {FactorKind::haar2d, side * side, side, mode};
}

VecC KronFactor::apply(const VecC& x) const {
  if (static_cast<std::size_t>(x.size()) != dim)
    throw std::invalid_argument("kron factor: operand length mismatch");
  switch (kind) {
    case FactorKind::identity:
      return x;
    case FactorKind::dft:
      // the factor matrix is F itself, so "apply" is synthesis
      return dft_adjoint(x);
    case FactorKind::haar1d:
      return haar1d_synthesis(x);
    case FactorKind::haar2d: {
      MatC img = haar2d_synthesis(
          MatC(Eigen::Map<const MatC>(x.data(), side, side)), mode);
      return VecC(Eigen::Map<const VecC>(img.data(), img.size()));
    }
  }
  throw std::logic_error("unreachable");
}

VecC KronFactor::adjoint(const VecC& x) const {
  if (static_cast<std::size_t>(x.size()) != dim)
    throw std::invalid_argument("kron factor: operand length mismatch");
  switch (kind) {
    case FactorKind::identity:
      return x;
    case FactorKind::dft:
      return dft_forward(x);
    case FactorKind::haar1d:
      return haar1d_analysis(x);
    case FactorKind::haar2d: {
      MatC cf = haar2d_analysis(
          MatC(Eigen::Map<const MatC>(x.data(), side, side)), mode);
      return VecC(Eigen::Map<const VecC>(cf.data(), cf.size()));
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

// (L (x) R) vec(X) = vec(R X L^T): apply R down each column, then L across
// each row. For the adjoint, each factor action is replaced by its adjoint
// (conj(L)^T rows become L^* actions; no extra conjugation needed since the
// factor's adjoint() already conjugates).
VecC kron_act(const KronOperator& op, const VecC& x, bool adjoint) {
  if (static_cast<std::size_t>(x.size()) != op.dim())
    throw std::invalid_argument("kron operator: operand length mismatch");
  const std::size_t nr = op.right.dim, nc = op.left.dim;
  MatC m = Eigen::Map<const MatC>(x.data(), nr, nc);
  if (op.right.kind != FactorKind::identity) {
    for (std::size_t j = 0; j < nc; ++j)
      m.col(j) = adjoint ? op.right.adjoint(m.col(j)) : op.right.apply(m.col(j));
  }
  if (op.left.kind != FactorKind::identity) {
    for (std::size_t i = 0; i < nr; ++i) {
      VecC row = m.row(i).transpose();
      m.row(i) = (adjoint ? op.left.adjoint(row) : op.left.apply(row)).transpose();
    }
  }
  return VecC(Eigen::Map<const VecC>(m.data(), m.size()));
}

}  // namespace

VecC kron_apply(const KronOperator& op, const VecC& x) { return kron_act(op, x, false); }
VecC kron_adjoint(const KronOperator& op, const VecC& y) { return kron_act(op, y, true); }

// ---- dense oracles ---------------------------------------------------------

namespace {
void check_dense_budget(std::size_t n) {
  if (n > 4096)
    throw std::invalid_argument("dense transform matrices are capped at dimension 4096");
}
}  // namespace

MatC dense_dft(std::size_t n) {
  check_dense_budget(n);
  log2_exact(n, "dft length");
  MatC f(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const double k = static_cast<double>(r) + 1.0 - static_cast<double>(n) / 2.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = 2.0 * 3.14159265358979323846 * k * static_cast<double>(t) /
                         static_cast<double>(n);
      f(t, r) = s * cxd(std::cos(ang), std::sin(ang));
    }
  }
  return f;
}

MatD dense_haar1d(std::size_t n) {
  check_dense_budget(n);
  MatD psi(n, n);
  VecD e = VecD::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    psi.col(j) = haar1d_synthesis(e);
    e[j] = 0.0;
  }
  return psi;
}

MatD dense_haar2d(std::size_t side, Haar2DMode mode) {
  check_dense_budget(side * side);
  const std::size_t n = side * side;
  MatD psi(n, n);
  MatD c = MatD::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t j = 0; j < n; ++j) {
    c.data()[j] = 1.0;
    MatD img = haar2d_synthesis(c, mode);
    psi.col(j) = Eigen::Map<const VecD>(img.data(), img.size());
    c.data()[j] = 0.0;
  }
  return psi;
}

MatC dense_factor(const KronFactor& f) {
  check_dense_budget(f.dim);
  switch (f.kind) {
    case FactorKind::identity:
      return MatC::Identity(static_cast<Eigen::Index>(f.dim),
                            static_cast<Eigen::Index>(f.dim));
    case FactorKind::dft:
      return dense_dft(f.dim);
    case FactorKind::haar1d:
      return dense_haar1d(f.dim).cast<cxd>();
    case FactorKind::haar2d:
      return dense_haar2d(f.side, f.mode).cast<cxd>();
  }
  throw std::logic_error("unreachable");
}

}  // namespace cfti
