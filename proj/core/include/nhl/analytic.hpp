#pragma once

// Closed-form results for the semi-infinite CP/CC models and the finite
// PT chains H1/H2: reflection amplitudes, bound states, phase regions,
// exceptional-point waves, critical functions and the EP/root finders.
//
// Reflection amplitudes follow the lead ansatz f(j) = A e^{ikj} + B e^{-ikj}
// with R = B/A. For k in (0, pi) the e^{ikj} term moves away from the
// cluster, so R = 0 means a purely outgoing wave; a packet arriving with
// momentum k0 < 0 is reflected with probability |R(k0)|^2.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nhl/lattice.hpp"

namespace nhl {

cplx reflection_cp(double k, cplx theta);
cplx reflection_cc(double k, cplx kappa);

// Dispatches on CP/CC (H1/H2 map to their semi-infinite halves).
cplx reflection(Family family, double k, cplx param);

struct BoundState {
  cplx k;       // Im k > 0, Re k in [0, 2 pi)
  cplx energy;  // -2 J cos k
};

std::optional<BoundState> bound_state_cp(cplx theta, double hopping = 1.0);
// Empty when |kappa|^4 - 2 Re(kappa^2) <= 1e-12 (unbroken or on the boundary).
std::vector<BoundState> bound_states_cc(cplx kappa, double hopping = 1.0);

enum class Region { Unbroken, Broken, Boundary };
enum class BoundaryKind { Circle, Lemniscate };
std::string_view to_string(Region region);
std::string_view to_string(BoundaryKind kind);

struct PhaseReport {
  Region region;
  double indicator;  // CP: Im(theta); CC: |kappa|^4 - 2 Re(kappa^2)
  BoundaryKind boundary_kind;
};

// CP: BROKEN iff Im(theta) < -tol. CC: BROKEN iff |k|^4 - 2 Re k^2 > tol.
// H1/H2 are classified through their large-N equivalence with CP/CC.
PhaseReport phase_classify(const ModelSpec& spec, double boundary_tol = 1e-12);
double phase_indicator(Family family, cplx param);

struct EpBranch {
  double k_c;      // in [0, 2 pi)
  double energy;   // -2 J cos k_c
  double current;  // 2 J sin k_c
};

// Unidirectional plane wave at an exceptional point. CP has one branch,
// CC two (k_c = phi/2 and phi/2 + pi).
struct EpReport {
  Family family;
  cplx param_c;
  double hopping;
  double phi;  // CC only; NaN for CP
  std::vector<EpBranch> branches;
};

// Throws InvalidArgument unless phase_classify(spec) is BOUNDARY.
// CC: phi is fixed by exp(i phi) = 1/(kappa^2 - 1), which is the branch of
// tan phi = i (kappa^2 - kappa*^2)/(|kappa|^4 - 2) that satisfies the
// boundary equations at the dimer.
EpReport ep_wave(const ModelSpec& spec, double boundary_tol = 1e-9);

// f^{k_c}(j) for j = 1..sites: e^{i k_c j}, and for CC kappa^{-1} e^{i k_c}
// on the dimer site j = 1.
Eigen::VectorXcd ep_profile(const EpReport& report, int branch, int sites);

struct CriticalEqCoeffs {
  cplx chi1;  // kappa^2 + kappa*^2 - 2
  cplx chi2;  // chi1 - |kappa|^4 + 1
};
CriticalEqCoeffs critical_coeffs(cplx kappa);

// Gamma(k) = e^{i(theta - theta*)} sin k(N-1) + sin k(N+1) + 2 Re(e^{i theta}) sin kN.
cplx gamma_h1(double k, cplx theta, int sites);
// Delta(k) = chi2 sin k(N-3) + chi1 sin k(N-1) - sin k(N+1).
cplx delta_h2(double k, cplx kappa, int sites);

// Both critical functions are real for real k; the real part is returned.
double critical_function(Family family, double k, cplx param, int sites);

struct Interval {
  double lo, hi;
};

// Grid scan with grid_n cells followed by bisection to 1e-12. Grid nodes
// that hit an exact zero are reported as roots. Use grid_n >= 20 N for the
// critical functions.
std::vector<double> find_real_roots(const std::function<double(double)>& f, Interval interval,
                                    int grid_n);

// Roots of the H1/H2 critical function on (0, pi). Both functions vanish
// identically at k = 0 and k = pi (every term carries a sin(m k) factor);
// those trivial zeros are dropped. grid_n defaults to 40 N.
std::vector<double> critical_roots(const ModelSpec& spec, int grid_n = 0);

// One-parameter family param = map(t) along which an EP is sought.
struct ParameterLine {
  std::string name;
  std::function<cplx(double)> map;

  static ParameterLine theta_real();                // theta = t
  static ParameterLine kappa_ray(double phase);     // kappa = t e^{i phase}
  static ParameterLine kappa_real() { return kappa_ray(0.0); }
};

struct EpSearchOptions {
  double fd_step = 1e-6;  // relative central-difference step for dF/dk
  double tol = 1e-10;
  int max_iterations = 200;
};

struct FiniteEp {
  double k_c;
  double t_c;
  cplx param_c;
  double residual;
  int iterations;
};

// Simultaneous zero of F = (G, dG/dk) for G the H1/H2 critical function, by
// damped Gauss-Newton (Levenberg-Marquardt) over (k, t). dG/dk is a central
// difference. The residual is max(|G|/S, |dG/dk|/((N+1) S)) with S the sum
// of the coefficient magnitudes of G, which puts both components on the
// scale of their own rounding noise.
FiniteEp find_exceptional_point(Family family, int sites, const ParameterLine& line,
                                double k_start, double t_start,
                                const EpSearchOptions& opts = {});

struct ReflectionlessPoint {
  Family family;
  cplx param;          // theta (CP) or kappa (CC, principal root)
  cplx param_squared;  // kappa^2 for CC, theta^2 for CP
  double k_c;
  double abs_r;       // |R(k_c)|
  double d_abs_r_dk;  // central difference of |R| at k_c
};

// CP: theta = pi/2, k_c = pi/2. CC: kappa^2 = 1 - i, k_c = pi/4.
// Throws NumericalError if |R| >= 1e-12 or |d|R|/dk| >= 1e-8 there.
ReflectionlessPoint optimal_reflectionless(Family family);

// |1/R(k) - R(-k)| / max(1, |R(-k)|). Throws PoleError if either side is a pole.
double check_reciprocity(Family family, cplx param, double k);

}  // namespace nhl
