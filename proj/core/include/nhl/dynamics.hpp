#pragma once

// Wavepackets, time propagation of i d psi/dt = H psi, probability
// currents, and the two scattering protocols (reflectionless absorption
// and self-sustained emission).

#include <optional>
#include <utility>
#include <vector>

#include "nhl/lattice.hpp"
#include "nhl/spectra.hpp"

namespace nhl {

// psi_j = exp(-(alpha^2/2)(j - center)^2 + i k0 j) / sqrt(Omega_0),
// Omega_0 = sum_j exp(-alpha^2 (j - center)^2).
struct WavepacketSpec {
  double k0;
  double center;  // N_A, site units
  double alpha;

  double half_width() const;  // 2 sqrt(ln 2) / alpha
};

// Throws InvalidArgument unless 2 <= half-width <= N/4.
State gaussian_wavepacket(const WavepacketSpec& spec, int sites);

// Normalization Omega_0 over sites 1..N.
double wavepacket_normalization(const WavepacketSpec& spec, int sites);

// True if |psi_1| or |psi_N| exceeds 1e-8 (packet clipped by the lattice ends).
bool wavepacket_clipped(const WavepacketSpec& spec, int sites);

enum class Propagator { Eigen, Rk4 };
std::string_view to_string(Propagator method);

struct PropagateOptions {
  Propagator method = Propagator::Rk4;
  double dt = 0.02;  // RK4 step, units of 1/J; must be <= 0.05/J
  // Absolute times at which to record states. The final time is always
  // recorded last.
  std::vector<double> snapshot_times;
  // EIGEN refuses when ||V||_1 ||V^-1||_1 exceeds this.
  double condition_limit = 1e12;
};

// Snapshots ordered by time; the last one is at t_final.
std::vector<State> propagate(const HamiltonianMatrix& h, const State& initial, double t_final,
                             const PropagateOptions& opts = {});

// Max |psi_dt - psi_{dt/2}| at t_final for the RK4 integrator.
double rk4_step_halving_error(const HamiltonianMatrix& h, const State& initial, double t_final,
                              double dt);

// 2 J Im(conj(psi_j) psi_{j+1}) for 1 <= j < N.
double local_current(const State& s, int site, double hopping = 1.0);
double local_current(const Eigen::VectorXcd& psi, int site, double hopping = 1.0);

struct LevelCurrent {
  cplx energy;
  double current;
};

// Current at j_probe for every eigenvector, each rescaled to max |amplitude| = 1.
std::vector<LevelCurrent> eigenstate_currents(const EigenSystem& es, int j_probe,
                                              double hopping = 1.0);

struct ReflectionOptions {
  Propagator method = Propagator::Rk4;
  double dt = 0.02;
  double settle_time = 20.0;        // added after the packet reaches the cluster
  std::optional<double> duration;   // overrides the default interaction time
  int tail_sites = 10;              // far-wall sites watched for the wavefront
  double tail_tol = 1e-6;
  std::vector<double> snapshot_times;
};

struct ReflectionReport {
  double reflection;    // surviving norm after the interaction
  double k_out;         // mean momentum of the reflected packet, incident frame
  double norm_initial;
  double norm_final;
  double duration;
  double tail_norm;
  bool clipped;
  std::vector<State> snapshots;  // lattice frame
};

// Launch a packet at the non-Hermitian end and record the surviving norm.
// The packet (center, k0) is given in the incident frame: center = distance
// from the cluster end, k0 < 0 moves toward it.
//   CP: the cluster is site 1 (potential J e^{i theta}); lattice frame = incident frame.
//   H1: the cluster is site N (potential J e^{-i theta*}), so the packet is
//       mirrored onto site N + 1 - center with momentum -k0.
// Default duration (center + 3 half-width)/(2 J |sin k0|) + settle_time.
// Throws InvalidRunError if the tail norm at the far wall exceeds tail_tol.
ReflectionReport measure_reflection(const ModelSpec& spec, const WavepacketSpec& packet,
                                    const ReflectionOptions& opts = {});

// |R|^2 predicted for a plane wave with the packet's central momentum, in
// the same incident-frame convention as measure_reflection.
double predicted_reflection(const ModelSpec& spec, double k0);

struct EmissionWindows {
  double t_start = 60.0;
  double t_end = 80.0;
  double t_step = 0.5;
  double delta = 0.5;          // lag for the frequency fit
  int cluster_margin = 10;     // sites skipped next to the cluster
  int front_margin = 20;       // sites kept clear of the wavefront
  double fill_fraction = 0.8;  // fraction of 2J|sin k_c| t_start treated as filled lead
  double front_threshold = 1e-6;
  double min_transient = 20.0;
};

struct EmissionReport {
  double k_est;
  double omega_est;  // -d arg(psi_j)/dt at the window center
  double phase_velocity;
  double amplitude_drift;  // (max - min)/mean of the window-mean |psi| over time
  double correlation;      // min over snapshots of corr(Re psi, cos(k_c j - E_c t + phi0))
  SiteRange window;
  int front_site;
  std::vector<State> snapshots;
};

// Propagate an initial state on a CP/H1 chain at its exceptional point and
// fit the emitted plane wave inside the filled lead.
EmissionReport measure_emission(const ModelSpec& spec, const State& initial,
                                const EmissionWindows& windows = {},
                                const PropagateOptions& propagation = {});

// Outermost site with |psi|^2 > threshold * max |psi|^2.
int wavefront_site(const State& s, double threshold = 1e-6);

}  // namespace nhl
