#include "cfti/recon.hpp"

#include "cfti/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace cfti {

namespace {

double l1norm(const VecC& v) { return v.cwiseAbs().sum(); }

double inf_norm(const VecC& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Euclidean projection onto the complex l1 ball of radius tau: the moduli are
// projected onto the real simplex (sorted-prefix threshold), phases kept.
VecC project_l1(const VecC& v, double tau) {
  if (tau <= 0.0) return VecC::Zero(v.size());
  VecD mod = v.cwiseAbs();
  if (mod.sum() <= tau) return v;
  std::vector<double> w(mod.data(), mod.data() + mod.size());
  std::sort(w.begin(), w.end(), std::greater<double>());
  double prefix = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    prefix += w[k];
    const double t = (prefix - tau) / static_cast<double>(k + 1);
    if (w[k] > t)
      theta = t;
    else
      break;
  }
  VecC out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = mod[i];
    out[i] = a > theta ? v[i] * ((a - theta) / a) : cxd(0.0, 0.0);
  }
  return out;
}

constexpr double kStepMin = 1e-16, kStepMax = 1e16;
constexpr std::size_t kLineSearchMax = 24;
constexpr std::size_t kFMemory = 10;
constexpr std::size_t kStallWindow = 300;
constexpr double kStallRelImprove = 1e-9;
constexpr double kSuffDecrease = 1e-4;

}  // namespace

BpdnResult bpdn_weighted(const VecC& y, const VecD& weights, const LinOp& a,
                         const LinOp& synth, double epsilon, const ReconConfig& cfg) {
  const Eigen::Index m = y.size();
  if (a.rows != m || weights.size() != m)
    throw std::invalid_argument("bpdn: measurement/weight/operator sizes disagree");
  if (a.cols != synth.rows)
    throw std::invalid_argument("bpdn: sensing and synthesis operators do not compose");
  if (epsilon < 0.0) throw std::invalid_argument("bpdn: negative fidelity radius");
  if (!(cfg.feasibility_tol > 0.0) || !(cfg.objective_tol > 0.0) ||
      cfg.max_iterations == 0)
    throw std::invalid_argument("bpdn: tolerances must be positive");

  const Eigen::Index n = synth.cols;
  const VecC wc = weights.cast<cxd>();
  auto G = [&](const VecC& s) -> VecC {
    return a.apply(synth.apply(s)).cwiseProduct(wc);
  };
  auto Gt = [&](const VecC& r) -> VecC {
    return synth.adjoint(a.adjoint(r.cwiseProduct(wc)));
  };

  const VecC b = y.cwiseProduct(wc);
  const double bnorm = b.norm();
  const double target = epsilon * std::sqrt(static_cast<double>(m));
  const double slack = cfg.feasibility_tol * std::max(target, bnorm);

  BpdnResult out;
  out.coeffs = VecC::Zero(n);
  out.status.target = target;
  if (bnorm <= target + slack) {
    out.signal = VecC::Zero(a.cols);
    out.status.converged = true;
    out.status.residual_norm = bnorm;
    out.status.message = "zero solution is feasible";
    return out;
  }

  VecC x = VecC::Zero(n);
  VecC r = b;
  double f = 0.5 * r.squaredNorm();
  VecC g = -Gt(r);
  double rnorm = bnorm;
  double lambda = inf_norm(g);

  const double wmax = weights.maxCoeff();
  const double grad_floor = 1e-13 * wmax * std::sqrt(static_cast<double>(m));

  if (lambda <= grad_floor * rnorm) {
    out.signal = VecC::Zero(a.cols);
    out.status.residual_norm = rnorm;
    out.status.message =
        "fidelity ball unreachable: weighted data orthogonal to the operator range";
    return out;
  }

  // root-finding start: the l1 radius solving the first Newton step from 0
  double tau = rnorm * (rnorm - target) / lambda;
  double step = std::clamp(1.0 / lambda, kStepMin, kStepMax);
  std::vector<double> fmem(kFMemory, f);
  double f_prev = std::numeric_limits<double>::infinity();
  std::size_t last_tau_iter = 0, last_improve_iter = 0;
  double best_window_rnorm = rnorm;

  VecC xbest = x;
  double best_infeas = std::numeric_limits<double>::infinity();
  double best_l1 = std::numeric_limits<double>::infinity();

  bool conv = false;
  std::string exit_msg;
  std::size_t ls_fail_streak = 0, stationary_streak = 0;
  std::size_t it = 0;

  for (it = 1; it <= cfg.max_iterations; ++it) {
    rnorm = r.norm();
    lambda = inf_norm(g);
    const double xl1 = l1norm(x);
    const double gap =
        std::abs(r.squaredNorm() - r.dot(b).real() + tau * lambda);
    const double rgap = gap / std::max(1.0, f);

    const double infeas = std::max(rnorm - target, 0.0);
    if (infeas < best_infeas - 1e-15 ||
        (infeas <= best_infeas + 1e-15 && xl1 < best_l1)) {
      best_infeas = infeas;
      best_l1 = xl1;
      xbest = x;
    }

    if (rnorm <= target + slack && rgap <= cfg.objective_tol) {
      // re-verify against incremental-update drift before declaring success
      VecC rx = b - G(x);
      const double rn = rx.norm();
      if (rn <= target + slack) {
        conv = true;
        rnorm = rn;
        exit_msg = "feasible with certified duality gap";
        break;
      }
      r = rx;
      f = 0.5 * r.squaredNorm();
      g = -Gt(r);
      continue;
    }

    if (lambda <= grad_floor * std::max(rnorm, 1e-300) && rnorm > target + slack) {
      exit_msg = "fidelity ball unreachable: gradient vanished at residual " +
                 std::to_string(rnorm) + " > target " + std::to_string(target);
      break;
    }

    if (rnorm < best_window_rnorm * (1.0 - kStallRelImprove)) {
      best_window_rnorm = rnorm;
      last_improve_iter = it;
    }
    if (it >= std::max(last_improve_iter, last_tau_iter) + kStallWindow &&
        rnorm > target + slack) {
      exit_msg = "stalled before reaching the fidelity ball (residual " +
                 std::to_string(rnorm) + " > target " + std::to_string(target) + ")";
      break;
    }

    // Newton update of the l1 radius when the subproblem value stagnates
    const double fstag_tol = rnorm > 2.0 * target
                                 ? 1e-4 * std::max(f, 1e-30)
                                 : 1e-1 * std::max(f, 1e-30) *
                                       (std::abs(rnorm - target) / std::max(1.0, rnorm));
    const bool want_update =
        std::abs(f - f_prev) <= fstag_tol && it > last_tau_iter + 1 && lambda > 0.0;
    f_prev = f;
    if (want_update) {
      const double tau_new = std::max(0.0, tau + rnorm * (rnorm - target) / lambda);
      if (std::abs(tau_new - tau) > 1e-12 * std::max(1.0, tau)) {
        const bool shrink = tau_new < tau;
        tau = tau_new;
        last_tau_iter = it;
        if (shrink) {
          x = project_l1(x, tau);
          r = b - G(x);
          f = 0.5 * r.squaredNorm();
          g = -Gt(r);
        }
        std::fill(fmem.begin(), fmem.end(), f);
        best_window_rnorm = r.norm();
        last_improve_iter = it;
        f_prev = std::numeric_limits<double>::infinity();
        continue;
      }
    }

    // spectral projected-gradient step with nonmonotone backtracking; the
    // whole backtrack reuses a single operator application on dx
    const double fmax = *std::max_element(fmem.begin(), fmem.end());
    VecC dx = project_l1(x - step * g, tau) - x;
    const double dxnorm = dx.norm();
    if (dxnorm <= 1e-15 * std::max(1.0, x.norm())) {
      if (rnorm <= target + slack) {
        VecC rx = b - G(x);
        const double rn = rx.norm();
        if (rn <= target + slack) {
          conv = true;
          rnorm = rn;
          exit_msg = "feasible projected-gradient fixed point";
          break;
        }
        r = rx;
        f = 0.5 * r.squaredNorm();
        g = -Gt(r);
        continue;
      }
      if (++stationary_streak > 10) {
        exit_msg = "stationary but infeasible (radius root-finding exhausted)";
        break;
      }
      continue;
    }
    stationary_streak = 0;
    const double gtd = g.dot(dx).real();
    if (gtd >= 0.0) {
      step = std::max(step * 0.1, kStepMin);
      continue;
    }
    VecC gdx = G(dx);
    const double rg = r.dot(gdx).real();
    const double gdx2 = gdx.squaredNorm();
    double s = 1.0;
    bool accepted = false;
    double fnew = f;
    for (std::size_t ls = 0; ls < kLineSearchMax; ++ls) {
      fnew = f - s * rg + 0.5 * s * s * gdx2;
      if (fnew <= fmax + kSuffDecrease * s * gtd) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) {
      if (++ls_fail_streak >= 5) {
        exit_msg = "line search failed repeatedly";
        break;
      }
      step = std::max(kStepMin, step * 0.01);
      continue;
    }
    ls_fail_streak = 0;

    x += s * dx;
    r -= s * gdx;
    f = fnew;
    VecC gnew = -Gt(r);
    VecC dg = gnew - g;
    const double sty = (s * dx).dot(dg).real();
    const double sts = s * s * dxnorm * dxnorm;
    step = sty > 0.0 ? std::clamp(sts / sty, kStepMin, kStepMax) : kStepMax;
    g.swap(gnew);
    fmem[it % kFMemory] = f;
    if (it % 64 == 0) {  // cap incremental-update drift
      r = b - G(x);
      f = 0.5 * r.squaredNorm();
    }
  }

  if (!conv) {
    x = xbest;
    rnorm = (b - G(x)).norm();
    if (exit_msg.empty()) exit_msg = "iteration limit reached";
    exit_msg += " [best residual " + std::to_string(rnorm) + ", target " +
                std::to_string(target) + "]";
  }
  out.coeffs = x;
  out.signal = synth.apply(x);
  out.status.converged = conv;
  out.status.iterations = std::min<std::size_t>(it, cfg.max_iterations);
  out.status.residual_norm = rnorm;
  out.status.objective_l1 = l1norm(x);
  out.status.message = exit_msg;
  return out;
}

// ---- scheme-specific operators ---------------------------------------------

namespace {

LinOp make_row_restricted_dft(std::size_t n_xi, std::vector<std::uint32_t> rows) {
  LinOp op;
  op.rows = static_cast<Eigen::Index>(rows.size());
  op.cols = static_cast<Eigen::Index>(n_xi);
  op.apply = [rows](const VecC& u) {
    VecC yf = dft_forward(u);
    VecC out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) out[r] = yf[rows[r]];
    return out;
  };
  op.adjoint = [rows, n_xi](const VecC& res) {
    VecC z = VecC::Zero(static_cast<Eigen::Index>(n_xi));
    for (std::size_t r = 0; r < rows.size(); ++r) z[rows[r]] += res[r];
    return dft_adjoint(z);
  };
  return op;
}

LinOp make_haar1d_synth(std::size_t n) {
  LinOp op;
  op.rows = op.cols = static_cast<Eigen::Index>(n);
  op.apply = [](const VecC& s) { return haar1d_synthesis(s); };
  op.adjoint = [](const VecC& u) { return haar1d_analysis(u); };
  return op;
}

LinOp make_kron_synth(std::size_t n_xi, std::size_t side, Haar2DMode mode) {
  KronOperator k{KronFactor::haar2d(side, mode), KronFactor::haar1d(n_xi)};
  LinOp op;
  op.rows = op.cols = static_cast<Eigen::Index>(k.dim());
  op.apply = [k](const VecC& s) { return kron_apply(k, s); };
  op.adjoint = [k](const VecC& u) { return kron_adjoint(k, u); };
  return op;
}

// shared-OPD rows replicated over all pixels, acting on the flattened cube
LinOp make_ci_joint_op(std::size_t n_xi, std::size_t n_p,
                       std::vector<std::uint32_t> rows) {
  const std::size_t mx = rows.size();
  LinOp op;
  op.rows = static_cast<Eigen::Index>(mx * n_p);
  op.cols = static_cast<Eigen::Index>(n_xi * n_p);
  op.apply = [rows, n_xi, n_p, mx](const VecC& u) {
    VecC out(static_cast<Eigen::Index>(mx * n_p));
    for (std::size_t j = 0; j < n_p; ++j) {
      VecC yf = dft_forward(
          VecC(u.segment(static_cast<Eigen::Index>(j * n_xi),
                         static_cast<Eigen::Index>(n_xi))));
      for (std::size_t r = 0; r < mx; ++r)
        out[static_cast<Eigen::Index>(j * mx + r)] = yf[rows[r]];
    }
    return out;
  };
  op.adjoint = [rows, n_xi, n_p, mx](const VecC& res) {
    VecC out(static_cast<Eigen::Index>(n_xi * n_p));
    for (std::size_t j = 0; j < n_p; ++j) {
      VecC z = VecC::Zero(static_cast<Eigen::Index>(n_xi));
      for (std::size_t r = 0; r < mx; ++r)
        z[rows[r]] += res[static_cast<Eigen::Index>(j * mx + r)];
      out.segment(static_cast<Eigen::Index>(j * n_xi),
                  static_cast<Eigen::Index>(n_xi)) = dft_adjoint(z);
    }
    return out;
  };
  return op;
}

// per-pixel acquisition on the flattened cube: draw k = n_xi*j + l
LinOp make_si_op(std::size_t n_xi, std::size_t n_p,
                 std::vector<std::uint32_t> draws) {
  // pixels that actually carry samples; the rest stay zero in both directions
  std::vector<std::uint8_t> sampled(n_p, 0);
  for (auto k : draws) sampled[k / n_xi] = 1;
  LinOp op;
  op.rows = static_cast<Eigen::Index>(draws.size());
  op.cols = static_cast<Eigen::Index>(n_xi * n_p);
  op.apply = [draws, sampled, n_xi, n_p](const VecC& u) {
    MatC yf(static_cast<Eigen::Index>(n_xi), static_cast<Eigen::Index>(n_p));
    for (std::size_t j = 0; j < n_p; ++j)
      if (sampled[j])
        yf.col(static_cast<Eigen::Index>(j)) = dft_forward(
            VecC(u.segment(static_cast<Eigen::Index>(j * n_xi),
                           static_cast<Eigen::Index>(n_xi))));
    VecC out(static_cast<Eigen::Index>(draws.size()));
    for (std::size_t r = 0; r < draws.size(); ++r) {
      const std::size_t j = draws[r] / n_xi, l = draws[r] % n_xi;
      out[static_cast<Eigen::Index>(r)] =
          yf(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
    }
    return out;
  };
  op.adjoint = [draws, sampled, n_xi, n_p](const VecC& res) {
    MatC z = MatC::Zero(static_cast<Eigen::Index>(n_xi),
                        static_cast<Eigen::Index>(n_p));
    for (std::size_t r = 0; r < draws.size(); ++r) {
      const std::size_t j = draws[r] / n_xi, l = draws[r] % n_xi;
      z(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) +=
          res[static_cast<Eigen::Index>(r)];
    }
    VecC out = VecC::Zero(static_cast<Eigen::Index>(n_xi * n_p));
    for (std::size_t j = 0; j < n_p; ++j)
      if (sampled[j])
        out.segment(static_cast<Eigen::Index>(j * n_xi),
                    static_cast<Eigen::Index>(n_xi)) =
            dft_adjoint(VecC(z.col(static_cast<Eigen::Index>(j))));
    return out;
  };
  return op;
}

void finalize_volume(HSVolume& vol, const ReconConfig& cfg) {
  // enforce_real is implicit (the volume stores the real part); the optional
  // nonnegativity projection clips below zero
  if (cfg.enforce_nonneg) vol.data = vol.data.cwiseMax(0.0);
}

}  // namespace

ReconResult reconstruct_ci(const MeasurementSet& meas, double epsilon,
                           const ReconConfig& cfg) {
  if (meas.scheme != Scheme::ci)
    throw std::invalid_argument("shared-OPD reconstruction expects a shared-OPD set");
  if (meas.deduplicated)
    throw std::invalid_argument("deduplicated sets go through reconstruct_dedup_ci");
  const std::size_t n_xi = meas.n_xi, n_p = meas.n_p();
  const auto mx = static_cast<std::size_t>(meas.values.rows());
  if (meas.row_indices.size() != mx ||
      meas.values.cols() != static_cast<Eigen::Index>(n_p))
    throw std::invalid_argument("measurement set dimensions are inconsistent");

  ReconResult result;
  result.volume.n_xi = n_xi;
  result.volume.side = meas.side;
  result.volume.data.resize(static_cast<Eigen::Index>(n_xi),
                            static_cast<Eigen::Index>(n_p));

  if (cfg.prior == SparsityPrior::spectral_1d) {
    LinOp a = make_row_restricted_dft(n_xi, meas.row_indices);
    LinOp psi = make_haar1d_synth(n_xi);
    result.statuses.resize(n_p);
    std::vector<double> imag_parts(n_p, 0.0);
    parallel_for(n_p, cfg.threads, [&](std::size_t j) {
      VecC yj = meas.values.col(static_cast<Eigen::Index>(j));
      BpdnResult res = bpdn_weighted(yj, meas.plan.weights, a, psi, epsilon, cfg);
      result.volume.data.col(static_cast<Eigen::Index>(j)) = res.signal.real();
      imag_parts[j] = res.signal.imag().squaredNorm();
      if (!res.status.converged)
        res.status.message = "pixel " + std::to_string(j) + ": " + res.status.message;
      result.statuses[j] = std::move(res.status);
    });
    for (double v : imag_parts) result.imag_sq_norm += v;
  } else {
    // volumetric prior: one joint ball over all pixels, shared-OPD weights
    // replicated per pixel
    VecC y(static_cast<Eigen::Index>(mx * n_p));
    for (std::size_t j = 0; j < n_p; ++j)
      y.segment(static_cast<Eigen::Index>(j * mx), static_cast<Eigen::Index>(mx)) =
          meas.values.col(static_cast<Eigen::Index>(j));
    VecD w(static_cast<Eigen::Index>(mx * n_p));
    for (std::size_t j = 0; j < n_p; ++j)
      w.segment(static_cast<Eigen::Index>(j * mx), static_cast<Eigen::Index>(mx)) =
          meas.plan.weights;
    LinOp a = make_ci_joint_op(n_xi, n_p, meas.row_indices);
    LinOp psi = make_kron_synth(n_xi, meas.side, cfg.mode2d);
    BpdnResult res = bpdn_weighted(y, w, a, psi, epsilon, cfg);
    result.volume.data =
        Eigen::Map<const MatC>(res.signal.data(), static_cast<Eigen::Index>(n_xi),
                               static_cast<Eigen::Index>(n_p))
            .real();
    result.imag_sq_norm = res.signal.imag().squaredNorm();
    result.statuses.push_back(std::move(res.status));
  }
  result.all_converged = std::all_of(result.statuses.begin(), result.statuses.end(),
                                     [](const SolverStatus& s) { return s.converged; });
  finalize_volume(result.volume, cfg);
  return result;
}

ReconResult reconstruct_si(const MeasurementSet& meas, double epsilon,
                           const ReconConfig& cfg) {
  if (meas.scheme != Scheme::si)
    throw std::invalid_argument("per-pixel reconstruction expects a per-pixel set");
  const std::size_t n_xi = meas.n_xi, n_p = meas.n_p();
  LinOp a = make_si_op(n_xi, n_p, meas.row_indices);
  LinOp psi = make_kron_synth(n_xi, meas.side, cfg.mode2d);
  VecC y = meas.values.col(0);
  BpdnResult res = bpdn_weighted(y, meas.plan.weights, a, psi, epsilon, cfg);

  ReconResult result;
  result.volume.n_xi = n_xi;
  result.volume.side = meas.side;
  result.volume.data =
      Eigen::Map<const MatC>(res.signal.data(), static_cast<Eigen::Index>(n_xi),
                             static_cast<Eigen::Index>(n_p))
          .real();
  result.imag_sq_norm = res.signal.imag().squaredNorm();
  result.all_converged = res.status.converged;
  result.statuses.push_back(std::move(res.status));
  finalize_volume(result.volume, cfg);
  return result;
}

ReconResult reconstruct_dedup_ci(const MeasurementSet& meas, double epsilon,
                                 const ReconConfig& cfg) {
  if (meas.scheme != Scheme::ci || !meas.deduplicated)
    throw std::invalid_argument("expected a deduplicated shared-OPD measurement set");
  const std::size_t n_xi = meas.n_xi, n_p = meas.n_p();
  const auto meff = static_cast<std::size_t>(meas.values.rows());
  LinOp a = make_row_restricted_dft(n_xi, meas.row_indices);
  LinOp psi = make_haar1d_synth(n_xi);
  VecD unit = VecD::Ones(static_cast<Eigen::Index>(meff));

  ReconResult result;
  result.volume.n_xi = n_xi;
  result.volume.side = meas.side;
  result.volume.data.resize(static_cast<Eigen::Index>(n_xi),
                            static_cast<Eigen::Index>(n_p));
  result.statuses.resize(n_p);
  std::vector<double> imag_parts(n_p, 0.0);
  parallel_for(n_p, cfg.threads, [&](std::size_t j) {
    VecC yj = meas.values.col(static_cast<Eigen::Index>(j));
    BpdnResult res = bpdn_weighted(yj, unit, a, psi, epsilon, cfg);
    result.volume.data.col(static_cast<Eigen::Index>(j)) = res.signal.real();
    imag_parts[j] = res.signal.imag().squaredNorm();
    if (!res.status.converged)
      res.status.message = "pixel " + std::to_string(j) + ": " + res.status.message;
    result.statuses[j] = std::move(res.status);
  });
  for (double v : imag_parts) result.imag_sq_norm += v;
  result.all_converged = std::all_of(result.statuses.begin(), result.statuses.end(),
                                     [](const SolverStatus& s) { return s.converged; });
  finalize_volume(result.volume, cfg);
  return result;
}

HSVolume minimal_energy(const MeasurementSet& meas) {
  const std::size_t n_xi = meas.n_xi, n_p = meas.n_p();
  HSVolume vol;
  vol.n_xi = n_xi;
  vol.side = meas.side;
  vol.data.resize(static_cast<Eigen::Index>(n_xi), static_cast<Eigen::Index>(n_p));

  if (meas.scheme == Scheme::ci) {
    // average duplicate rows (the least-squares value for repeated orthonormal
    // rows), zero-fill the rest, invert
    std::map<std::uint32_t, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < meas.row_indices.size(); ++r)
      groups[meas.row_indices[r]].push_back(r);
    for (std::size_t j = 0; j < n_p; ++j) {
      VecC z = VecC::Zero(static_cast<Eigen::Index>(n_xi));
      for (const auto& [idx, rows] : groups) {
        cxd acc(0.0, 0.0);
        for (auto r : rows)
          acc += meas.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
        z[idx] = acc / static_cast<double>(rows.size());
      }
      vol.data.col(static_cast<Eigen::Index>(j)) = dft_adjoint(z).real();
    }
  } else {
    MatC z = MatC::Zero(static_cast<Eigen::Index>(n_xi), static_cast<Eigen::Index>(n_p));
    MatD counts =
        MatD::Zero(static_cast<Eigen::Index>(n_xi), static_cast<Eigen::Index>(n_p));
    for (std::size_t r = 0; r < meas.row_indices.size(); ++r) {
      const std::size_t k = meas.row_indices[r];
      const auto l = static_cast<Eigen::Index>(k % n_xi);
      const auto j = static_cast<Eigen::Index>(k / n_xi);
      z(l, j) += meas.values(static_cast<Eigen::Index>(r), 0);
      counts(l, j) += 1.0;
    }
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      for (Eigen::Index l = 0; l < z.rows(); ++l)
        if (counts(l, j) > 0.0) z(l, j) /= counts(l, j);
      vol.data.col(j) = dft_adjoint(VecC(z.col(j))).real();
    }
  }
  return vol;
}

double rsnr(const MatD& reference, const MatD& estimate, bool normalized) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols())
    throw std::invalid_argument("rsnr: dimension mismatch");
  MatD a = reference, b = estimate;
  if (normalized) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double na = a.col(j).norm();
      if (na > 0.0) a.col(j) /= na;
      const double nb = b.col(j).norm();
      if (nb > 0.0) b.col(j) /= nb;
    }
  }
  const double ref_sq = a.squaredNorm();
  if (ref_sq <= 0.0) throw std::invalid_argument("rsnr: zero reference");
  const double err_sq = (a - b).squaredNorm();
  if (err_sq == 0.0) return 300.0;
  return std::min(300.0, -10.0 * std::log10(err_sq / ref_sq));
}

}  // namespace cfti
