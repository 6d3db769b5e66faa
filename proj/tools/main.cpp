// beliaev: Bogoliubov quasiparticle damping toolkit.
//
// Subcommands
//   dispersion     dispersion curve, n-quasiparticle spectrum bottoms and the
//                  critical-velocity line
//   damping-scan   on-shell Im Sigma(e_k + i0) against k with the k^5 law fit
//   renorm-scan    cutoff ladder for Sigma^L(z) - Sigma^L(0) and the
//                  k -> 0 divergence diagnostic of Sigma^L(0)
//   friedrichs-sim finite-volume survival amplitude and golden-rule rates
//   selfcheck      built-in oracle suite (closed forms, scheme agreement,
//                  dense-solve identities, series remainders)
//
// Exit codes: 0 ok, 2 validation error, 3 numerical non-convergence,
// 4 selfcheck failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "beliaev/dispersion.hpp"
#include "beliaev/emit.hpp"
#include "beliaev/friedrichs.hpp"
#include "beliaev/parallel.hpp"
#include "beliaev/selfcheck.hpp"
#include "beliaev/self_energy.hpp"
#include "beliaev/version.hpp"

namespace {

using namespace beliaev;

struct CommonOpts {
  double mu = 1.0;
  double vhat0 = 1.0;
  std::string format = "csv";
  std::string out = "-";
  std::string svg;
  int threads = 1;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--mu", o.mu, "chemical potential (default 1)");
  cmd->add_option("--vhat0", o.vhat0, "interaction scale vhat(0) (default 1)");
  cmd->add_option("--format", o.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output path ('-' for stdout)");
  cmd->add_option("--svg", o.svg, "optional SVG plot path");
  cmd->add_option("--threads", o.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
  cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

RatioTable load_ratio_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open ratio table: " + path);
  std::vector<double> ks, rs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::stringstream ss(line);
    double k, r;
    if (ss >> k >> r) {
      ks.push_back(k);
      rs.push_back(r);
    }
  }
  return RatioTable(std::move(ks), std::move(rs));
}

void stamp_meta(ScanResult& table, const std::string& command,
                const CommonOpts& o, const std::string& extra_args) {
  table.add_meta("tool", "beliaev");
  table.add_meta("version", kVersion);
  table.add_meta("command", command);
  const std::string canon = command + "|mu=" + format17(o.mu) +
                            "|vhat0=" + format17(o.vhat0) + "|" + extra_args;
  table.add_meta("params_hash", fnv1a_hex(canon));
  table.add_meta("mu", format17(o.mu));
  table.add_meta("vhat0", format17(o.vhat0));
  table.add_meta("abs_tol", format17(o.abs_tol));
  table.add_meta("rel_tol", format17(o.rel_tol));
}

void emit(const ScanResult& table, const CommonOpts& o, bool svg_logx,
          bool svg_logy, std::size_t svg_x = 0, std::size_t svg_y = 1) {
  auto write_payload = [&](std::ostream& os) {
    if (o.format == "json") {
      write_json(table, os);
    } else {
      write_csv(table, os);
    }
  };
  if (o.out == "-" || o.out.empty()) {
    write_payload(std::cout);
  } else {
    std::ofstream os(o.out, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output: " + o.out);
    write_payload(os);
  }
  if (!o.svg.empty()) {
    std::ofstream os(o.svg, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open svg output: " + o.svg);
    write_svg(table, svg_x, svg_y, svg_logx, svg_logy, os);
  }
}

ModelParams make_params(const CommonOpts& o, const std::string& ratio_file) {
  if (ratio_file.empty()) return ModelParams::contact(o.mu, o.vhat0);
  RatioTable table = load_ratio_table(ratio_file);
  return ModelParams::with_ratio(o.mu, o.vhat0, table);
}

// ---------------------------------------------------------------------------

int cmd_dispersion(const CommonOpts& o, const std::string& ratio_file,
                   double kmin, double kmax, int points, int nmax) {
  if (points < 2 || kmax <= kmin || kmin < 0.0 || nmax < 2) {
    throw std::invalid_argument("dispersion: bad grid or nmax");
  }
  const ModelParams params = make_params(o, ratio_file);
  const double c_crit = critical_velocity(params);

  ScanResult table;
  table.columns = {"k", "e_k"};
  for (int n = 2; n <= nmax; ++n) {
    table.columns.push_back("bottom" + std::to_string(n));
  }
  table.columns.push_back("ck");
  table.rows.assign(points, {});
  parallel_for(points, o.threads, [&](std::size_t i) {
    const double k = kmin + (kmax - kmin) * double(i) / (points - 1);
    std::vector<double> row{k, dispersion(params, k)};
    for (int n = 2; n <= nmax; ++n) {
      row.push_back(n_qp_bottom(params, k, n));
    }
    row.push_back(c_crit * k);
    table.rows[i] = std::move(row);
  });

  std::ostringstream extra;
  extra << "kmin=" << format17(kmin) << "|kmax=" << format17(kmax)
        << "|points=" << points << "|nmax=" << nmax
        << "|ratio=" << (ratio_file.empty() ? "contact" : ratio_file);
  stamp_meta(table, "dispersion", o, extra.str());
  table.add_meta("kmin", format17(kmin));
  table.add_meta("kmax", format17(kmax));
  table.add_meta("points", std::to_string(points));
  table.add_meta("nmax", std::to_string(nmax));
  table.add_meta("ratio", ratio_file.empty() ? "contact" : ratio_file);
  table.add_meta("c_crit", format17(c_crit));
  emit(table, o, false, false);
  return 0;
}

int cmd_damping_scan(const CommonOpts& o, double kmin, double kmax, int points,
                     double lambda_cutoff) {
  if (points < 2 || !(kmin > 0.0) || kmax <= kmin) {
    throw std::invalid_argument("damping-scan: bad k grid");
  }
  const ModelParams params = ModelParams::contact(o.mu, o.vhat0);
  const BeliaevConstant cb = beliaev_constant(params);
  const quad::Tol tol{o.abs_tol * 1e-3, o.rel_tol * 1e-3, 40000, 1};

  struct Row {
    double k, e, im, err;
    bool converged;
  };
  std::vector<Row> rows(points);
  parallel_for(points, o.threads, [&](std::size_t i) {
    const double k = kmin * std::pow(kmax / kmin, double(i) / (points - 1));
    auto r = im_sigma_on_shell_result(params, k, lambda_cutoff, tol);
    rows[i] = {k, dispersion(params, k), r.value, r.error, r.converged};
  });

  bool all_converged = true;
  ScanResult table;
  table.columns = {"k",       "e_k",   "im_sigma", "err_estimate",
                   "leading", "ratio", "local_slope"};
  for (int i = 0; i < points; ++i) {
    const Row& r = rows[i];
    all_converged = all_converged && r.converged;
    const double lead = -cb.value * std::pow(r.e, 6) / r.k;
    const int a = std::max(0, i - 1), b = std::min(points - 1, i + 1);
    const double slope = (std::log(std::fabs(rows[b].im)) -
                          std::log(std::fabs(rows[a].im))) /
                         (std::log(rows[b].k) - std::log(rows[a].k));
    table.rows.push_back({r.k, r.e, r.im, r.err, lead, r.im / lead, slope});
  }
  // global least-squares slope of log|Im Sigma| against log k
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const Row& r : rows) {
    const double x = std::log(r.k), y = std::log(std::fabs(r.im));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(points);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  // constant extrapolation of |Im| k / e^6 from the two smallest k (even
  // error term, so a k^2 Richardson step)
  const double r0 = std::fabs(rows[0].im) * rows[0].k / std::pow(rows[0].e, 6);
  const double r1 = std::fabs(rows[1].im) * rows[1].k / std::pow(rows[1].e, 6);
  const double w = (rows[1].k * rows[1].k) /
                   (rows[1].k * rows[1].k - rows[0].k * rows[0].k);
  const double extrap = w * r0 + (1.0 - w) * r1;

  std::ostringstream extra;
  extra << "kmin=" << format17(kmin) << "|kmax=" << format17(kmax)
        << "|points=" << points << "|Lambda=" << format17(lambda_cutoff);
  stamp_meta(table, "damping-scan", o, extra.str());
  table.add_meta("kmin", format17(kmin));
  table.add_meta("kmax", format17(kmax));
  table.add_meta("points", std::to_string(points));
  table.add_meta("lambda_cutoff", format17(lambda_cutoff));
  table.add_meta("fitted_slope", format17(slope));
  table.add_meta("extrapolated_constant", format17(extrap));
  table.add_meta("resolved_constant", format17(cb.value));
  table.add_meta("candidate_320pi_320pi", format17(cb.candidate_320pi));
  table.add_meta("candidate_640pi2_640pi2", format17(cb.candidate_640pi2));
  emit(table, o, true, true, 0, 2);
  if (!all_converged) {
    throw NonConvergence("damping-scan: quadrature tolerance not reached");
  }
  return 0;
}

int cmd_renorm_scan(const CommonOpts& o, const std::string& k_list,
                    double z_re, double z_im, const std::string& ladder_list) {
  const std::vector<double> ks = parse_list(k_list);
  const std::vector<double> ladder = parse_list(ladder_list);
  if (ks.empty() || ladder.size() < 2) {
    throw std::invalid_argument("renorm-scan: need k list and ladder >= 2");
  }
  const ModelParams params = ModelParams::contact(o.mu, o.vhat0);
  const quad::Tol tol{o.abs_tol, o.rel_tol, 40000, o.threads};
  const std::complex<double> z{z_re, z_im};

  ScanResult table;
  table.columns = {"k",          "lambda",  "sigma_z_re", "sigma_z_im",
                   "sigma0",     "err_sigma0", "diff_re", "diff_im",
                   "k_sigma0"};
  std::ostringstream notes;
  for (double k : ks) {
    for (double lam : ladder) {
      auto s0 = sigma_at_zero(params, k, lam, tol);
      std::complex<double> sz, diff;
      if (z == std::complex<double>(0.0, 0.0)) {
        sz = {s0.value, 0.0};
        diff = {0.0, 0.0};
      } else {
        QuadratureSpec qs;
        qs.abs_tol = tol.abs_tol;
        qs.rel_tol = tol.rel_tol;
        qs.threads = o.threads;
        sz = sigma_cutoff(params, k, ComplexEnergy::regular(z), lam, qs).value;
        diff = sz - s0.value;
      }
      table.rows.push_back({k, lam, sz.real(), sz.imag(), s0.value, s0.error,
                            diff.real(), diff.imag(), k * s0.value});
    }
    if (z != std::complex<double>(0.0, 0.0)) {
      auto ren =
          sigma_renormalized(params, k, ComplexEnergy::regular(z), ladder, tol);
      notes << "k=" << format17(k)
            << " richardson_re=" << format17(ren.value.real())
            << " richardson_im=" << format17(ren.value.imag())
            << " residual=" << format17(ren.residual)
            << " converged=" << (ren.converged ? 1 : 0) << ";";
    }
  }
  std::ostringstream extra;
  extra << "k=" << k_list << "|z=" << format17(z_re) << "+" << format17(z_im)
        << "i|ladder=" << ladder_list;
  stamp_meta(table, "renorm-scan", o, extra.str());
  table.add_meta("k_list", k_list);
  table.add_meta("lambda_ladder", ladder_list);
  table.add_meta("z_re", format17(z_re));
  table.add_meta("z_im", format17(z_im));
  table.add_meta("richardson", notes.str());
  emit(table, o, false, false, 1, 6);
  return 0;
}

int cmd_friedrichs_sim(const CommonOpts& o, double box, double lambda_cutoff,
                       double coupling, const std::string& k_index_str,
                       double t_max, int t_points) {
  const std::vector<double> idx_raw = parse_list(k_index_str);
  if (idx_raw.size() != 3) {
    throw std::invalid_argument("friedrichs-sim: --k-index needs i,j,l");
  }
  if (t_points < 2 || !(t_max > 0.0)) {
    throw std::invalid_argument("friedrichs-sim: bad time grid");
  }
  const std::array<int, 3> k_index{int(std::lround(idx_raw[0])),
                                   int(std::lround(idx_raw[1])),
                                   int(std::lround(idx_raw[2]))};
  const ModelParams params = ModelParams::contact(o.mu, o.vhat0);
  const FriedrichsModel model =
      build_model(params, k_index, box, lambda_cutoff, coupling);
  const ArrowheadSpectrum spec = model_spectrum(model);

  ScanResult table;
  table.columns = {"t", "re_a", "im_a", "abs2"};
  table.rows.assign(t_points, {});
  parallel_for(t_points, o.threads, [&](std::size_t i) {
    const double t = t_max * double(i) / (t_points - 1);
    const std::complex<double> a = spec.amplitude(t);
    table.rows[i] = {t, a.real(), a.imag(), std::norm(a)};
  });

  std::ostringstream extra;
  extra << "L=" << format17(box) << "|Lambda=" << format17(lambda_cutoff)
        << "|coupling=" << format17(coupling) << "|k_index=" << k_index_str
        << "|tmax=" << format17(t_max) << "|tpoints=" << t_points;
  stamp_meta(table, "friedrichs-sim", o, extra.str());
  table.add_meta("box_size", format17(box));
  table.add_meta("lambda_cutoff", format17(lambda_cutoff));
  table.add_meta("coupling", format17(coupling));
  table.add_meta("k_index", k_index_str);
  table.add_meta("t_max", format17(t_max));
  table.add_meta("t_points", std::to_string(t_points));
  table.add_meta("dim", std::to_string(model.dim()));
  table.add_meta("head_energy", format17(model.head_energy));
  if (coupling != 0.0) {
    const quad::Tol tol{o.abs_tol, o.rel_tol, 40000, 1};
    const DecayRates rates = fgr_decay_rate(model, tol);
    table.add_meta("gamma_fgr_discrete", format17(rates.gamma_fgr));
    table.add_meta("gamma_fgr_continuum", format17(rates.gamma_continuum));
    table.add_meta("gamma_fit", format17(rates.gamma_fit));
    table.add_meta("fit_window_t0", format17(rates.fit.fit_t0));
    table.add_meta("fit_window_t1", format17(rates.fit.fit_t1));
    table.add_meta("level_spacing", format17(rates.level_spacing));
    table.add_meta("recurrence_time", format17(rates.recurrence_time));
    table.add_meta("under_resolved", rates.under_resolved ? "1" : "0");
  } else {
    table.add_meta("gamma_fgr_discrete", format17(0.0));
    table.add_meta("gamma_fit", format17(0.0));
  }
  emit(table, o, false, false, 0, 3);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bogoliubov quasiparticle damping toolkit"};
  app.require_subcommand(1);

  CommonOpts o_disp, o_damp, o_ren, o_fried, o_check;

  auto* cd =
      app.add_subcommand("dispersion", "dispersion curve and spectrum bottoms");
  std::string ratio_file;
  double kmin = 0.0, kmax = 3.0;
  int points = 301, nmax = 2;
  bool contact_flag = false;
  add_common(cd, o_disp);
  cd->add_flag("--contact", contact_flag, "contact interaction (default)");
  cd->add_option("--ratio-table", ratio_file,
                 "CSV file of k,r(k) samples (linear interpolation, flat "
                 "extrapolation; overrides --contact)");
  cd->add_option("--kmin", kmin);
  cd->add_option("--kmax", kmax);
  cd->add_option("--points", points);
  cd->add_option("--nmax", nmax, "largest n-quasiparticle bottom column");

  auto* cs =
      app.add_subcommand("damping-scan", "on-shell Im Sigma scan with k^5 fit");
  double d_kmin = 0.02, d_kmax = 0.2, d_lambda = 5.0;
  int d_points = 12;
  add_common(cs, o_damp);
  cs->add_option("--kmin", d_kmin);
  cs->add_option("--kmax", d_kmax);
  cs->add_option("--points", d_points);
  cs->add_option("--lambda-cutoff", d_lambda);

  auto* cr = app.add_subcommand("renorm-scan", "cutoff renormalization study");
  std::string k_list = "0.5", ladder_list = "5,10,20,40";
  double z_re = 0.0, z_im = 0.2;
  add_common(cr, o_ren);
  cr->add_option("--k-list", k_list, "comma-separated k values");
  cr->add_option("--z-re", z_re);
  cr->add_option("--z-im", z_im);
  cr->add_option("--lambda-ladder", ladder_list, "comma-separated cutoffs");

  auto* cf = app.add_subcommand("friedrichs-sim",
                                "finite-volume survival amplitude");
  double box = 30.0, f_lambda = 3.0, coupling = 0.1, t_max = 1000.0;
  int t_points = 2001;
  std::string k_index_str = "10,2,1";
  add_common(cf, o_fried);
  cf->add_option("--box-size", box);
  cf->add_option("--lambda-cutoff", f_lambda);
  cf->add_option("--coupling", coupling);
  cf->add_option("--k-index", k_index_str, "lattice index i,j,l");
  cf->add_option("--t-max", t_max);
  cf->add_option("--t-points", t_points);

  auto* ck = app.add_subcommand("selfcheck", "run the built-in oracle suite");
  std::string tamper;
  add_common(ck, o_check);
  ck->add_option("--tamper", tamper,
                 "perturb a named check constant (negative control)")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (cd->parsed()) {
      rc = cmd_dispersion(o_disp, ratio_file, kmin, kmax, points, nmax);
    } else if (cs->parsed()) {
      rc = cmd_damping_scan(o_damp, d_kmin, d_kmax, d_points, d_lambda);
    } else if (cr->parsed()) {
      rc = cmd_renorm_scan(o_ren, k_list, z_re, z_im, ladder_list);
    } else if (cf->parsed()) {
      rc = cmd_friedrichs_sim(o_fried, box, f_lambda, coupling, k_index_str,
                              t_max, t_points);
    } else if (ck->parsed()) {
      const SelfcheckReport report =
          beliaev::run_selfcheck(o_check.threads, tamper);
      print_selfcheck(report, std::cout);
      rc = report.all_pass() ? 0 : 4;
    }
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::cerr << "wall_time_s="
            << std::chrono::duration<double>(t1 - t0).count() << "\n";
  return rc;
}
