#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "beliaev/arrowhead.hpp"
#include "beliaev/params.hpp"
#include "beliaev/quadrature.hpp"

namespace beliaev {

using Vec3 = std::array<double, 3>;

// Finite-volume effective Friedrichs Hamiltonian for a quasiparticle of
// lattice momentum k coupled to the 2-quasiparticle band:
//   head      e_k,
//   lattice   p in (2 pi/L) Z^3, p != 0, p != k, |p| + |k-p| < Lambda,
//   diagonal  e_p + e_{k-p},
//   row       (coupling / L^{3/2}) h_k(p).
// Each lattice p is its own basis label (ordered-pair convention: p and k-p
// both appear), so the Feshbach sum over the row reproduces the discrete
// self-energy (1/L^3) sum h^2/(z - e_p - e_{k-p}) verbatim at coupling 1.
// The p = k/2 point, when on the lattice, is one ordinary label like any
// other.  Lattice order is lexicographic in the integer indices.
struct FriedrichsModel {
  ModelParams params;
  Vec3 k_vec{};
  std::array<int, 3> k_index{};
  double box_length = 0.0;  // L
  double cutoff = 0.0;      // Lambda
  double coupling = 0.0;    // lambda = sqrt(kappa)
  double head_energy = 0.0; // e_k
  std::vector<std::array<int, 3>> lattice;
  std::vector<double> diagonal;
  std::vector<double> row;

  std::size_t dim() const { return 1 + diagonal.size(); }
  Vec3 momentum_of(const std::array<int, 3>& n) const;
};

FriedrichsModel build_model(const ModelParams& params,
                            const std::array<int, 3>& k_index, double L,
                            double lambda_cutoff, double coupling);

// Nearest admissible lattice index to a requested momentum vector (never the
// zero vector).
std::array<int, 3> nearest_lattice_index(const Vec3& k_target, double L);

// Distinct values of an energy list, merged at the resolution the arrowhead
// deflation uses.  Symmetry-degenerate lattice points couple through a single
// combination, so counting decay channels or level spacings must run over
// distinct energies, not basis labels.
std::vector<double> distinct_levels(const std::vector<double>& values);

// Feshbach-Schur self-energy of the head vector,
//   Sigma(z) = -sum_p row_p^2/(diagonal_p - z)
//            = (coupling^2/L^3) sum_p h^2/(z - e_p - e_{k-p}).
// z exactly on a diagonal entry is a pole and is rejected.
std::complex<double> feshbach_sigma(const FriedrichsModel& model,
                                    std::complex<double> z);

// Head matrix element of the resolvent, 1/(e_k + Sigma(z) - z).
std::complex<double> resolvent_head(const FriedrichsModel& model,
                                    std::complex<double> z);

// Survival amplitude a(t) = <Psi| exp(-i t H) |Psi> of the head vector from
// the arrowhead eigendecomposition.  a(0) = 1 and |a(t)| <= 1.
ArrowheadSpectrum model_spectrum(const FriedrichsModel& model);
std::vector<std::complex<double>> survival_amplitude(
    const FriedrichsModel& model, const std::vector<double>& t_grid);

// Discrete-vs-continuum Riemann convergence of the self-energy at fixed
// Im z > 0: per box size L the requested momentum is snapped to the nearest
// lattice vector, the coupling-1 Feshbach sum is compared against the
// continuum cutoff integral at the same |k|.
struct RiemannRow {
  double L = 0.0;
  std::array<int, 3> k_index{};
  double k_mag = 0.0;
  std::complex<double> sigma_discrete{};
  std::complex<double> sigma_continuum{};
  double gap = 0.0;
};
std::vector<RiemannRow> riemann_convergence(const ModelParams& params,
                                            const Vec3& k_target,
                                            double lambda_cutoff,
                                            std::complex<double> z,
                                            const std::vector<double>& L_list,
                                            const quad::Tol& tol = {});

// Resonance parameters of the head level.
struct ResonanceEstimate {
  double shift_re = 0.0;
  double shift_im = 0.0;  // <= 0 for a decaying level
  std::string method;     // "feshbach_eps" or "decay_fit"
  double epsilon = 0.0;   // feshbach_eps: offset used
  double fit_t0 = 0.0;    // decay_fit: window
  double fit_t1 = 0.0;
  double fit_residual = 0.0;
};

struct DecayRates {
  ResonanceEstimate feshbach;   // from Im Sigma(e_k + i eps)
  ResonanceEstimate fit;        // from the log |a|^2 slope
  double gamma_fgr = 0.0;       // 2 |Im Sigma_discrete|
  double gamma_fit = 0.0;       // fitted decay rate of |a(t)|^2
  double gamma_continuum = 0.0; // 2 coupling^2 |Im Sigma_cont(e_k + i0)|
  double level_spacing = 0.0;   // local spacing of the diagonal near e_k
  double recurrence_time = 0.0; // 2 pi / spacing
  double bandwidth = 0.0;       // spread of the diagonal band
  bool under_resolved = false;  // fit window could not be established
};

// Golden-rule decay rate of the head level by both routes.  feshbach_eps ties
// epsilon to the local level spacing (epsilon = 3 * spacing); decay_fit
// least-squares the log of |a(t)|^2 over a window cut after the quadratic
// transient (t >= 5/bandwidth) and before half the recurrence time, keeping
// samples with |a|^2 in [0.2, 0.9].  An unusable window is reported through
// under_resolved, never replaced by a silent answer.
DecayRates fgr_decay_rate(const FriedrichsModel& model,
                          const quad::Tol& tol = {});

// Minimum of e_{p1}+e_{p2}+e_{p3} over random zero-sum triples; nonnegative,
// vanishing only in the p -> 0 limit.  Justifies dropping the
// triple-creation coupling of the head state.
struct FourQpFloor {
  double min_excess = 0.0;
  bool ok = false;
};
FourQpFloor four_qp_floor_check(const ModelParams& params, double k,
                                int samples = 10000, unsigned long seed = 1);

}  // namespace beliaev
