#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

// Orthonormal transform kernels shared by the whole library.
//
// Index conventions (fixed here, relied on everywhere else):
//  * Centered DFT of even length N: entry r (0-based) of a spectrum/
//    interferogram carries frequency k = r + 1 - N/2, so the DC row sits at
//    r = N/2 - 1. dft_forward computes y = F^* x (analysis: interferogram
//    samples from a spectrum); dft_adjoint computes x = F y, its exact
//    inverse.
//  * 1-D Haar coefficients of length N = 2^nbar are laid out as
//    [scaling | detail level 0 | level 1 | ... | level nbar-1], i.e. the
//    coarsest detail at index 1 and the finest N/2 details in the upper half.
//    Level n occupies indices [2^n, 2^{n+1}). Signs: a pair (a, b) maps to
//    detail (a - b)/sqrt(2).
//  * 2-D Haar on a side x side image: "isotropic" recurses on the top-left
//    approximation block (per level: one pairwise pass down each leading
//    column, then across each leading row); "anisotropic" is the separable
//    tensor transform (full 1-D analysis of every column, then of every row).
//  * Kronecker products act on vec(X) with X stored column-major, X having
//    right.dim rows and left.dim columns:  (L (x) R) vec(X) = vec(R X L^T).

namespace cfti {

using cxd = std::complex<double>;
using VecD = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;
using MatD = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;

bool is_pow2(std::size_t n);
// log2 of a power of two; throws std::invalid_argument otherwise
std::size_t log2_exact(std::size_t n, const char* what);

// ---- centered DFT -----------------------------------------------------

VecC dft_forward(const VecC& x);
VecC dft_forward(const VecD& x);
VecC dft_adjoint(const VecC& y);

// ---- 1-D Haar ----------------------------------------------------------

VecD haar1d_analysis(const VecD& x);
VecD haar1d_synthesis(const VecD& coeffs);
VecC haar1d_analysis(const VecC& x);
VecC haar1d_synthesis(const VecC& coeffs);

// ---- 2-D Haar ----------------------------------------------------------

enum class Haar2DMode { isotropic, anisotropic };

MatD haar2d_analysis(const MatD& image, Haar2DMode mode);
MatD haar2d_synthesis(const MatD& coeffs, Haar2DMode mode);
MatC haar2d_analysis(const MatC& image, Haar2DMode mode);
MatC haar2d_synthesis(const MatC& coeffs, Haar2DMode mode);

// ---- Kronecker structure ------------------------------------------------

enum class FactorKind { identity, dft, haar1d, haar2d };

// One orthonormal factor of a Kronecker product. `dim` is the vector length
// the factor acts on (side*side for haar2d, where the vector is a column-major
// flattening of a side x side image).
struct KronFactor {
  FactorKind kind = FactorKind::identity;
  std::size_t dim = 0;
  std::size_t side = 0;  // haar2d only
  Haar2DMode mode = Haar2DMode::isotropic;

  static KronFactor identity(std::size_t n);
  static KronFactor dft(std::size_t n);
  static KronFactor haar1d(std::size_t n);
  static KronFactor haar2d(std::size_t side, Haar2DMode mode);

  // y = U x (synthesis direction) and y = U^* x, without materializing U
  VecC apply(const VecC& x) const;
  VecC adjoint(const VecC& x) const;
};

struct KronOperator {
  KronFactor left;   // acts across columns of the reshaped operand
  KronFactor right;  // acts down each column
  std::size_t dim() const { return left.dim * right.dim; }
};

VecC kron_apply(const KronOperator& op, const VecC& x);
VecC kron_adjoint(const KronOperator& op, const VecC& y);

// ---- dense realizations (oracles and brute-force coherence) -------------
// Guarded: these refuse dimensions above 4096 because they exist for
// verification, not production paths.

MatC dense_dft(std::size_t n);
MatD dense_haar1d(std::size_t n);
MatD dense_haar2d(std::size_t side, Haar2DMode mode);
MatC dense_factor(const KronFactor& f);

}  // namespace cfti
