// Command-line front end for the compressive interferometry library.
//
// Subcommands: gen-volume, pmf, coherence, noise-bound, simulate, reconstruct,
// phase-transition, exposure-sweep, dedup-pipeline. Global flags --seed,
// --threads, --out apply to every subcommand; --config loads the same options
// from a key=value file ([subcommand] sections select the command's options).
// Report-style CSV output zeroes the wall_ms column unless --timings is given,
// so reruns at a fixed seed are byte-identical.

#include "cfti/experiments.hpp"
#include "cfti/io.hpp"
#include "cfti/noise.hpp"
#include "cfti/recon.hpp"
#include "cfti/rng.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

using namespace cfti;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
  bool timings = false;
};

std::string require_out(const GlobalOpts& g) {
  if (g.out.empty())
    throw CLI::ValidationError("--out", "this subcommand writes a file; pass --out");
  return g.out;
}

// CSV-ish text output to --out or stdout.
void emit_text(const GlobalOpts& g, const std::string& text) {
  if (g.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + g.out + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void append_g(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  s += buf;
}

Scheme parse_scheme(const std::string& s) {
  if (s == "ci") return Scheme::ci;
  if (s == "si") return Scheme::si;
  throw CLI::ValidationError("--scheme", "expected ci or si");
}

// alpha < 0 selects the coherence-optimal density.
Pmf make_density(Scheme scheme, std::size_t n_xi, std::size_t n_p, double alpha) {
  if (alpha < 0.0) {
    CoherenceProfile prof =
        scheme == Scheme::ci ? kappa_ci_exact(n_xi) : kappa_si_exact(n_xi, n_p);
    return build_pmf_optimal(prof, n_xi, scheme == Scheme::ci ? 1 : n_p);
  }
  return scheme == Scheme::ci ? build_pmf_ci(n_xi, alpha)
                              : build_pmf_si(n_xi, n_p, alpha);
}

void print_statuses(const ReconResult& res) {
  std::size_t converged = 0;
  std::size_t iters = 0;
  for (const auto& st : res.statuses) {
    converged += st.converged ? 1 : 0;
    iters += st.iterations;
  }
  std::cerr << "solves: " << res.statuses.size() << ", converged: " << converged
            << ", total iterations: " << iters
            << ", discarded imaginary energy: " << res.imag_sq_norm << "\n";
  if (!res.all_converged) {
    for (const auto& st : res.statuses)
      if (!st.converged) {
        std::cerr << "first nonconverged solve: " << st.message << "\n";
        break;
      }
  }
}

int run_gen_volume(const GlobalOpts& g, const SyntheticVolumeSpec& spec_in) {
  SyntheticVolumeSpec spec = spec_in;
  spec.seed = g.seed;
  HSVolume vol = gen_synthetic_bio(spec);
  write_volume(vol, require_out(g));
  std::cerr << "wrote " << vol.n_xi << "x" << vol.side << "x" << vol.side
            << " volume (symmetric: " << (vol.symmetric ? "yes" : "no") << ")\n";
  return 0;
}

int run_pmf(const GlobalOpts& g, const std::string& scheme_str, std::size_t n_xi,
            std::size_t n_p, double alpha, bool optimal) {
  const Scheme scheme = parse_scheme(scheme_str);
  Pmf pmf = make_density(scheme, n_xi, n_p, optimal ? -1.0 : alpha);
  std::string out = "index,probability\n";
  for (Eigen::Index i = 0; i < pmf.probs.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    append_g(out, pmf.probs[i]);
    out += '\n';
  }
  emit_text(g, out);
  return 0;
}

int run_coherence(const GlobalOpts& g, const std::string& scheme_str, std::size_t n_xi,
                  std::size_t n_p, bool exact) {
  const Scheme scheme = parse_scheme(scheme_str);
  CoherenceProfile analytic =
      scheme == Scheme::ci ? kappa_ci(n_xi) : kappa_si(n_xi, n_p);
  CoherenceProfile exact_prof;
  if (exact)
    exact_prof = scheme == Scheme::ci ? kappa_ci_exact(n_xi) : kappa_si_exact(n_xi, n_p);
  std::string out = "# kappa_sq_norm = ";
  append_g(out, analytic.kappa.squaredNorm());
  if (exact) {
    out += ", exact_mu_sq_norm = ";
    append_g(out, exact_prof.kappa.squaredNorm());
  }
  out += '\n';
  out += exact ? "index,kappa,exact_mu\n" : "index,kappa\n";
  for (Eigen::Index i = 0; i < analytic.kappa.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    append_g(out, analytic.kappa[i]);
    if (exact) {
      out += ',';
      append_g(out, exact_prof.kappa[i]);
    }
    out += '\n';
  }
  emit_text(g, out);
  return 0;
}

int run_noise_bound(const GlobalOpts& g, const std::string& scheme_str,
                    std::size_t n_xi, std::size_t n_p, double alpha, double sigma,
                    double s, const std::vector<std::size_t>& m_grid,
                    std::size_t trials, double quantile) {
  const Scheme scheme = parse_scheme(scheme_str);
  Pmf pmf = make_density(scheme, n_xi, n_p, alpha);
  const double rho = rho_for_pmf(pmf);
  const std::size_t n = scheme == Scheme::ci ? n_xi : n_xi * n_p;
  std::vector<EmpiricalNoisePoint> emp;
  if (trials > 0)
    emp = epsilon_empirical(pmf, m_grid, sigma, trials, quantile, g.seed, scheme,
                            g.threads);
  std::string out = "M,epsilon_analytic,epsilon_empirical\n";
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    const std::size_t m = m_grid[i];
    const double analytic = pmf.family == PmfFamily::uniform
                                ? epsilon_uds(sigma, n, m, s)
                                : epsilon_vds(sigma, n, m, s, rho);
    out += std::to_string(m);
    out += ',';
    append_g(out, analytic);
    out += ',';
    if (!emp.empty()) append_g(out, emp[i].epsilon);
    out += '\n';
  }
  emit_text(g, out);
  return 0;
}

int run_simulate(const GlobalOpts& g, const std::string& scheme_str,
                 const std::string& vol_path, std::size_t m, double alpha,
                 bool optimal, double sigma, bool constrained, bool do_dedup,
                 double zeta) {
  const Scheme scheme = parse_scheme(scheme_str);
  HSVolume vol = read_volume(vol_path);
  Pmf pmf = make_density(scheme, vol.n_xi, vol.n_p(), optimal ? -1.0 : alpha);
  SamplingPlan plan = draw_plan(pmf, m, g.seed, scheme);

  double amplification = 1.0;
  double sigma_eff = sigma;
  if (constrained) {
    if (scheme == Scheme::ci) {
      amplification = constrained_ci_scale(m, vol.n_xi);
    } else {
      const double cap = si_exposure_cap(m, vol.n_p(), zeta);
      amplification = static_cast<double>(vol.n_xi) / cap;
    }
    sigma_eff = sigma / amplification;
  }

  MeasurementSet meas;
  const std::uint64_t noise_seed = derive_seed(g.seed, 1);
  if (do_dedup) {
    if (scheme != Scheme::ci)
      throw CLI::ValidationError("--dedup", "dedup acquisition is shared-OPD only");
    MatC nyq = nyquist_forward(vol, sigma_eff, noise_seed);
    meas = dedup_ci_forward(nyq, vol, plan, sigma_eff);
  } else if (scheme == Scheme::ci) {
    meas = ci_forward(vol, plan, sigma_eff, noise_seed);
  } else {
    meas = si_forward(vol, plan, sigma_eff, noise_seed);
  }
  meas.amplification = amplification;
  write_measurements(meas, require_out(g));
  std::cerr << "wrote " << meas.values.rows() << "x" << meas.values.cols()
            << " measurement block (sigma_eff = " << sigma_eff
            << ", amplification = " << amplification << ")\n";
  return 0;
}

int run_reconstruct(const GlobalOpts& g, const std::string& meas_path,
                    const std::string& method, const std::string& prior,
                    const std::string& mode2d, const std::string& epsilon_str,
                    double s, std::size_t max_iter, double feas_tol, double obj_tol,
                    bool nonneg, const std::string& reference_path) {
  MeasurementSet meas = read_measurements(meas_path);
  HSVolume vol;
  if (method == "me") {
    vol = minimal_energy(meas);
  } else if (method == "cs") {
    ReconConfig cfg;
    cfg.prior = prior == "3d" ? SparsityPrior::spatiospectral_3d
                              : SparsityPrior::spectral_1d;
    if (prior != "1d" && prior != "3d")
      throw CLI::ValidationError("--prior", "expected 1d or 3d");
    if (mode2d == "isotropic") {
      cfg.mode2d = Haar2DMode::isotropic;
    } else if (mode2d == "anisotropic") {
      cfg.mode2d = Haar2DMode::anisotropic;
    } else {
      throw CLI::ValidationError("--mode2d", "expected isotropic or anisotropic");
    }
    cfg.max_iterations = max_iter;
    cfg.feasibility_tol = feas_tol;
    cfg.objective_tol = obj_tol;
    cfg.enforce_nonneg = nonneg;
    cfg.threads = g.threads;

    double epsilon = 0.0;
    if (epsilon_str == "auto") {
      if (meas.deduplicated) {
        // unweighted residual on unique rows: the closed-form radius is tight
        epsilon = epsilon_uds(meas.sigma, 1, meas.row_indices.size(), s);
      } else {
        // calibrate the radius empirically at the stored noise level: the
        // closed-form preconditioned bounds hold but their log/rho slack can
        // exceed the signal energy at practical sizes
        const std::vector<std::size_t> mg{meas.plan.draws.size()};
        const auto curve =
            epsilon_empirical(meas.plan.pmf, mg, meas.sigma, 200, 0.95,
                              derive_seed(g.seed, 0xEB5), meas.scheme, g.threads);
        epsilon = curve[0].epsilon;
      }
      std::cerr << "auto fidelity radius: " << epsilon << "\n";
    } else {
      epsilon = std::stod(epsilon_str);
    }

    ReconResult res;
    if (meas.deduplicated) {
      res = reconstruct_dedup_ci(meas, epsilon, cfg);
    } else if (meas.scheme == Scheme::ci) {
      res = reconstruct_ci(meas, epsilon, cfg);
    } else {
      res = reconstruct_si(meas, epsilon, cfg);
    }
    print_statuses(res);
    vol = res.volume;
  } else {
    throw CLI::ValidationError("--method", "expected cs or me");
  }
  if (!reference_path.empty()) {
    HSVolume ref = read_volume(reference_path);
    std::cerr << "rsnr vs reference: " << rsnr(ref.data, vol.data) << " dB\n";
  }
  write_volume(vol, require_out(g));
  return 0;
}

int run_phase_transition_cmd(const GlobalOpts& g, PhaseTransitionSpec spec) {
  spec.seed = g.seed;
  spec.threads = g.threads;
  ExperimentReport report = run_phase_transition(spec);
  emit_text(g, format_report(report, !g.timings));
  return 0;
}

int run_exposure_sweep_cmd(const GlobalOpts& g, ExposureSweepSpec spec) {
  spec.seed = g.seed;
  spec.recon.threads = g.threads;
  ExperimentReport report = run_exposure_sweep(spec);
  emit_text(g, format_report(report, !g.timings));
  return 0;
}

int run_dedup_pipeline_cmd(const GlobalOpts& g, DedupPipelineSpec spec) {
  spec.seed = g.seed;
  spec.recon.threads = g.threads;
  ExperimentReport report = run_dedup_pipeline(spec);
  emit_text(g, format_report(report, !g.timings));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressive Fourier-transform interferometry toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value option file ([subcommand] sections)");

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads")->capture_default_str();
  app.add_option("--out", g.out, "output path (CSV subcommands default to stdout)");
  app.add_flag("--timings", g.timings, "keep real wall_ms values in reports");

  // gen-volume
  auto* gen = app.add_subcommand("gen-volume", "write a synthetic hyperspectral volume");
  SyntheticVolumeSpec vol_spec;
  std::string abundance = "procedural";
  bool asymmetric = false;
  gen->add_option("--n-xi", vol_spec.n_xi, "spectral length (power of two)")
      ->capture_default_str();
  gen->add_option("--side", vol_spec.side, "spatial side (power of two)")
      ->capture_default_str();
  gen->add_option("--endmembers", vol_spec.endmembers, "number of mixed spectra")
      ->capture_default_str();
  gen->add_option("--abundance", abundance, "procedural|uniform")
      ->capture_default_str();
  gen->add_flag("--asymmetric", asymmetric, "skip the spectral mirror symmetry");

  // pmf
  auto* pmf_cmd = app.add_subcommand("pmf", "emit a sampling density as CSV");
  std::string pmf_scheme = "ci";
  std::size_t pmf_nxi = 512, pmf_np = 1;
  double pmf_alpha = 1.0;
  bool pmf_optimal = false;
  pmf_cmd->add_option("--scheme", pmf_scheme, "ci|si")->capture_default_str();
  pmf_cmd->add_option("--n-xi", pmf_nxi, "spectral length")->capture_default_str();
  pmf_cmd->add_option("--n-p", pmf_np, "pixel count (si)")->capture_default_str();
  pmf_cmd->add_option("--alpha", pmf_alpha, "power-family decay")->capture_default_str();
  pmf_cmd->add_flag("--optimal", pmf_optimal, "coherence-optimal density");

  // coherence
  auto* coh = app.add_subcommand("coherence", "emit local-coherence profiles as CSV");
  std::string coh_scheme = "ci";
  std::size_t coh_nxi = 512, coh_np = 1;
  bool coh_exact = false;
  coh->add_option("--scheme", coh_scheme, "ci|si")->capture_default_str();
  coh->add_option("--n-xi", coh_nxi, "spectral length")->capture_default_str();
  coh->add_option("--n-p", coh_np, "pixel count (si)")->capture_default_str();
  coh->add_flag("--exact", coh_exact, "also compute the exact profile");

  // noise-bound
  auto* nb = app.add_subcommand("noise-bound", "analytic vs empirical fidelity radii");
  std::string nb_scheme = "ci";
  std::size_t nb_nxi = 512, nb_np = 1, nb_trials = 100;
  double nb_alpha = 0.0, nb_sigma = 1.0, nb_s = 6.0, nb_q = 0.95;
  std::vector<std::size_t> nb_m = {64, 128, 256};
  nb->add_option("--scheme", nb_scheme, "ci|si")->capture_default_str();
  nb->add_option("--n-xi", nb_nxi, "spectral length")->capture_default_str();
  nb->add_option("--n-p", nb_np, "pixel count (si)")->capture_default_str();
  nb->add_option("--alpha", nb_alpha, "density decay (0 = uniform)")
      ->capture_default_str();
  nb->add_option("--sigma", nb_sigma, "noise level")->capture_default_str();
  nb->add_option("--s", nb_s, "concentration parameter")->capture_default_str();
  nb->add_option("--m", nb_m, "measurement counts")->capture_default_str();
  nb->add_option("--trials", nb_trials, "empirical trials (0 = analytic only)")
      ->capture_default_str();
  nb->add_option("--quantile", nb_q, "empirical percentile")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "acquire measurements from a volume");
  std::string sim_scheme = "ci", sim_vol;
  std::size_t sim_m = 256;
  double sim_alpha = 1.0, sim_sigma = 0.0, sim_zeta = 0.01;
  bool sim_optimal = false, sim_constrained = false, sim_dedup = false;
  sim->add_option("--scheme", sim_scheme, "ci|si")->capture_default_str();
  sim->add_option("--vol", sim_vol, "input volume file")->required();
  sim->add_option("--m", sim_m, "number of index draws")->capture_default_str();
  sim->add_option("--alpha", sim_alpha, "density decay")->capture_default_str();
  sim->add_flag("--optimal", sim_optimal, "coherence-optimal density");
  sim->add_option("--sigma", sim_sigma, "noise level before amplification")
      ->capture_default_str();
  sim->add_flag("--constrained", sim_constrained,
                "fixed light budget: amplify exposure, divide sigma");
  sim->add_flag("--dedup", sim_dedup, "store unique OPD rows only (ci)");
  sim->add_option("--zeta", sim_zeta, "per-pixel cap failure probability (si)")
      ->capture_default_str();

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "recover a volume from measurements");
  std::string rec_meas, rec_method = "cs", rec_prior = "1d",
              rec_mode2d = "isotropic", rec_eps = "auto", rec_ref;
  double rec_s = 6.0, rec_feas = 1e-6, rec_obj = 1e-6;
  std::size_t rec_maxit = 10000;
  bool rec_nonneg = false;
  rec->add_option("--meas", rec_meas, "input measurement file")->required();
  rec->add_option("--method", rec_method, "cs|me")->capture_default_str();
  rec->add_option("--prior", rec_prior, "1d|3d sparsity prior")->capture_default_str();
  rec->add_option("--mode2d", rec_mode2d, "isotropic|anisotropic spatial wavelets")
      ->capture_default_str();
  rec->add_option("--epsilon", rec_eps, "fidelity radius, or auto")
      ->capture_default_str();
  rec->add_option("--s", rec_s, "concentration parameter (deduplicated auto radius)")
      ->capture_default_str();
  rec->add_option("--max-iter", rec_maxit, "solver iteration cap")
      ->capture_default_str();
  rec->add_option("--feas-tol", rec_feas, "relative feasibility slack")
      ->capture_default_str();
  rec->add_option("--obj-tol", rec_obj, "duality-gap tolerance")
      ->capture_default_str();
  rec->add_flag("--nonneg", rec_nonneg, "clip the recovered volume at zero");
  rec->add_option("--reference", rec_ref, "volume to score RSNR against");

  // phase-transition
  auto* pt = app.add_subcommand("phase-transition",
                                "noiseless recovery-probability sweep");
  PhaseTransitionSpec pt_spec;
  std::string pt_scheme = "ci", pt_mode2d = "isotropic";
  bool pt_no_optimal = false;
  pt->add_option("--scheme", pt_scheme, "ci|si")->capture_default_str();
  pt->add_option("--n-xi", pt_spec.n_xi, "spectral length")->capture_default_str();
  pt->add_option("--side", pt_spec.side, "spatial side")->capture_default_str();
  pt->add_option("--k-xi", pt_spec.k_xi, "spectral sparsity")->capture_default_str();
  pt->add_option("--k-p", pt_spec.k_p, "spatial sparsity")->capture_default_str();
  pt->add_option("--alphas", pt_spec.alphas, "density decays to sweep")
      ->capture_default_str();
  pt->add_flag("--no-optimal", pt_no_optimal, "skip the optimal-density curve");
  pt->add_option("--ratios", pt_spec.ratios, "measurement ratios M/N")
      ->capture_default_str();
  pt->add_option("--trials", pt_spec.trials, "Monte-Carlo trials per point")
      ->capture_default_str();
  pt->add_option("--threshold", pt_spec.success_threshold,
                 "relative squared-error success threshold")
      ->capture_default_str();
  pt->add_option("--max-iter", pt_spec.max_iterations, "solver iteration cap")
      ->capture_default_str();
  pt->add_option("--mode2d", pt_mode2d, "isotropic|anisotropic")
      ->capture_default_str();

  // exposure-sweep
  auto* es = app.add_subcommand("exposure-sweep",
                                "constrained/unconstrained RSNR vs ratio");
  ExposureSweepSpec es_spec;
  std::string es_scheme = "ci";
  bool es_no_unconstrained = false, es_no_constrained = false;
  es->add_option("--scheme", es_scheme, "ci|si")->capture_default_str();
  es->add_option("--n-xi", es_spec.volume.n_xi, "spectral length")
      ->capture_default_str();
  es->add_option("--side", es_spec.volume.side, "spatial side")
      ->capture_default_str();
  es->add_option("--snr-db", es_spec.snr_db, "full-acquisition input SNR")
      ->capture_default_str();
  es->add_option("--ratios", es_spec.ratios, "measurement ratios")
      ->capture_default_str();
  es->add_option("--trials", es_spec.trials, "trials per ratio")
      ->capture_default_str();
  es->add_option("--alpha", es_spec.alpha, "density decay")->capture_default_str();
  es->add_option("--zeta", es_spec.zeta, "per-pixel cap failure probability (si)")
      ->capture_default_str();
  es->add_option("--quantile", es_spec.quantile, "empirical radius percentile")
      ->capture_default_str();
  es->add_option("--noise-trials", es_spec.noise_trials,
                 "empirical radius calibration trials")
      ->capture_default_str();
  es->add_option("--max-iter", es_spec.recon.max_iterations, "solver iteration cap")
      ->capture_default_str();
  es->add_flag("--no-unconstrained", es_no_unconstrained, "skip the fixed-sigma arm");
  es->add_flag("--no-constrained", es_no_constrained, "skip the fixed-budget arm");

  // dedup-pipeline
  auto* dp = app.add_subcommand("dedup-pipeline",
                                "intensity sweep with acquisition-time dedup");
  DedupPipelineSpec dp_spec;
  dp->add_option("--n-xi", dp_spec.volume.n_xi, "spectral length")
      ->capture_default_str();
  dp->add_option("--side", dp_spec.volume.side, "spatial side")
      ->capture_default_str();
  dp->add_option("--i-ref", dp_spec.i_ref, "reference illumination intensity")
      ->capture_default_str();
  dp->add_option("--intensities", dp_spec.intensities, "intensity sweep values")
      ->capture_default_str();
  dp->add_option("--sigma-a", dp_spec.sigma_a, "noise model slope")
      ->capture_default_str();
  dp->add_option("--sigma-b", dp_spec.sigma_b, "noise model intercept")
      ->capture_default_str();
  dp->add_option("--trials", dp_spec.trials, "trials per intensity")
      ->capture_default_str();
  dp->add_option("--s", dp_spec.concentration_s, "concentration parameter")
      ->capture_default_str();
  dp->add_option("--max-iter", dp_spec.recon.max_iterations, "solver iteration cap")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      vol_spec.symmetric = !asymmetric;
      if (abundance == "procedural") {
        vol_spec.abundance = AbundanceSource::procedural;
      } else if (abundance == "uniform") {
        vol_spec.abundance = AbundanceSource::uniform;
      } else {
        throw CLI::ValidationError("--abundance", "expected procedural or uniform");
      }
      return run_gen_volume(g, vol_spec);
    }
    if (pmf_cmd->parsed())
      return run_pmf(g, pmf_scheme, pmf_nxi, pmf_np, pmf_alpha, pmf_optimal);
    if (coh->parsed()) return run_coherence(g, coh_scheme, coh_nxi, coh_np, coh_exact);
    if (nb->parsed())
      return run_noise_bound(g, nb_scheme, nb_nxi, nb_np, nb_alpha, nb_sigma, nb_s,
                             nb_m, nb_trials, nb_q);
    if (sim->parsed())
      return run_simulate(g, sim_scheme, sim_vol, sim_m, sim_alpha, sim_optimal,
                          sim_sigma, sim_constrained, sim_dedup, sim_zeta);
    if (rec->parsed())
      return run_reconstruct(g, rec_meas, rec_method, rec_prior, rec_mode2d, rec_eps,
                             rec_s, rec_maxit, rec_feas, rec_obj, rec_nonneg, rec_ref);
    if (pt->parsed()) {
      pt_spec.scheme = parse_scheme(pt_scheme);
      pt_spec.include_optimal = !pt_no_optimal;
      pt_spec.mode2d = pt_mode2d == "anisotropic" ? Haar2DMode::anisotropic
                                                  : Haar2DMode::isotropic;
      return run_phase_transition_cmd(g, pt_spec);
    }
    if (es->parsed()) {
      es_spec.scheme = parse_scheme(es_scheme);
      es_spec.run_unconstrained = !es_no_unconstrained;
      es_spec.run_constrained = !es_no_constrained;
      return run_exposure_sweep_cmd(g, es_spec);
    }
    if (dp->parsed()) return run_dedup_pipeline_cmd(g, dp_spec);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
