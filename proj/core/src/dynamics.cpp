#include "nhl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nhl/analytic.hpp"
#include "nhl/errors.hpp"

namespace nhl {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kTimeEps = 1e-9;

void check_packet(const WavepacketSpec& spec, int sites) {
  if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha))
    throw InvalidArgument("wavepacket alpha must be positive");
  if (!std::isfinite(spec.k0) || !std::isfinite(spec.center))
    throw InvalidArgument("wavepacket momentum and center must be finite");
  const double hw = spec.half_width();
  if (hw < 2.0 || hw > sites / 4.0)
    throw InvalidArgument("wavepacket half-width " + std::to_string(hw) +
                          " must lie in [2, N/4] sites");
}

// One classical RK4 step of y' = -i H y.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(const HamiltonianMatrix& h)
      : h_(h), k1_(h.dimension()), k2_(h.dimension()), k3_(h.dimension()),
        k4_(h.dimension()), tmp_(h.dimension()) {}

  void step(Eigen::VectorXcd& y, double dt) {
    deriv(y, k1_);
    tmp_ = y + (0.5 * dt) * k1_;
    deriv(tmp_, k2_);
    tmp_ = y + (0.5 * dt) * k2_;
    deriv(tmp_, k3_);
    tmp_ = y + dt * k3_;
    deriv(tmp_, k4_);
    y += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  void deriv(const Eigen::VectorXcd& y, Eigen::VectorXcd& out) {
    apply_hamiltonian(h_, std::span<const cplx>(y.data(), y.size()),
                      std::span<cplx>(out.data(), out.size()));
    out *= -kI;
  }

  const HamiltonianMatrix& h_;
  Eigen::VectorXcd k1_, k2_, k3_, k4_, tmp_;
};

std::vector<double> schedule(const State& initial, double t_final, std::vector<double> times) {
  if (!(t_final > initial.time)) throw InvalidArgument("t_final must exceed the initial time");
  std::sort(times.begin(), times.end());
  std::vector<double> out;
  for (double t : times) {
    if (t < initial.time - kTimeEps || t > t_final + kTimeEps)
      throw InvalidArgument("snapshot time " + std::to_string(t) + " outside the propagation span");
    if (out.empty() || t - out.back() > kTimeEps) out.push_back(t);
  }
  if (out.empty() || t_final - out.back() > kTimeEps)
    out.push_back(t_final);
  else
    out.back() = t_final;
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double WavepacketSpec::half_width() const { return 2.0 * std::sqrt(std::log(2.0)) / alpha; }

double wavepacket_normalization(const WavepacketSpec& spec, int sites) {
  double omega = 0.0;
  for (int j = 1; j <= sites; ++j) {
    const double d = j - spec.center;
    omega += std::exp(-spec.alpha * spec.alpha * d * d);
  }
  return omega;
}

State gaussian_wavepacket(const WavepacketSpec& spec, int sites) {
  check_packet(spec, sites);
  const double omega = wavepacket_normalization(spec, sites);
  if (!(omega > 0.0)) throw InvalidArgument("wavepacket lies entirely outside the lattice");
  const double scale = 1.0 / std::sqrt(omega);
  State s{Eigen::VectorXcd(sites), 0.0};
  for (int j = 1; j <= sites; ++j) {
    const double d = j - spec.center;
    s.amplitudes(j - 1) =
        scale * std::exp(-0.5 * spec.alpha * spec.alpha * d * d) * std::exp(kI * (spec.k0 * j));
  }
  return s;
}

bool wavepacket_clipped(const WavepacketSpec& spec, int sites) {
  const double omega = wavepacket_normalization(spec, sites);
  auto amp = [&](int j) {
    const double d = j - spec.center;
    return std::exp(-0.5 * spec.alpha * spec.alpha * d * d) / std::sqrt(omega);
  };
  return amp(1) > 1e-8 || amp(sites) > 1e-8;
}

std::string_view to_string(Propagator method) {
  return method == Propagator::Eigen ? "eigen" : "rk4";
}

std::vector<State> propagate(const HamiltonianMatrix& h, const State& initial, double t_final,
                             const PropagateOptions& opts) {
  if (initial.sites() != h.dimension())
    throw InvalidArgument("state dimension does not match the Hamiltonian");
  if (!initial.amplitudes.allFinite()) throw InvalidArgument("initial state has non-finite entries");
  const std::vector<double> times = schedule(initial, t_final, opts.snapshot_times);
  std::vector<State> out;
  out.reserve(times.size());

  if (opts.method == Propagator::Rk4) {
    const double J = h.spec().hopping();
    if (!(opts.dt > 0.0) || opts.dt > 0.05 / J + 1e-15)
      throw InvalidArgument("RK4 step must satisfy 0 < dt <= 0.05/J");
    Rk4Stepper stepper(h);
    Eigen::VectorXcd y = initial.amplitudes;
    double t = initial.time;
    for (double target : times) {
      // Whole steps on the global grid, then a short final step if needed.
      while (target - t > kTimeEps) {
        const double step = std::min(opts.dt, target - t);
        stepper.step(y, step);
        t += step;
      }
      t = target;
      out.push_back({y, target});
    }
    return out;
  }

  const EigenSystem es = eigendecompose(h);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(es.vectors);
  const Eigen::MatrixXcd inv = lu.inverse();
  const double cond = es.vectors.cwiseAbs().colwise().sum().maxCoeff() *
                      inv.cwiseAbs().colwise().sum().maxCoeff();
  if (!(cond <= opts.condition_limit))
    throw InvalidRunError("eigenvector basis is ill-conditioned (estimate " +
                              std::to_string(cond) + "); use RK4 near an exceptional point",
                          cond);
  const Eigen::VectorXcd coeffs = inv * initial.amplitudes;
  for (double target : times) {
    const double dt = target - initial.time;
    Eigen::VectorXcd phased(coeffs.size());
    for (Eigen::Index m = 0; m < coeffs.size(); ++m)
      phased(m) = std::exp(-kI * es.values(m) * dt) * coeffs(m);
    out.push_back({es.vectors * phased, target});
  }
  return out;
}

double rk4_step_halving_error(const HamiltonianMatrix& h, const State& initial, double t_final,
                              double dt) {
  PropagateOptions coarse{Propagator::Rk4, dt, {}, 1e12};
  PropagateOptions fine{Propagator::Rk4, 0.5 * dt, {}, 1e12};
  const State a = propagate(h, initial, t_final, coarse).back();
  const State b = propagate(h, initial, t_final, fine).back();
  return (a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff();
}

double local_current(const Eigen::VectorXcd& psi, int site, double hopping) {
  if (site < 1 || site >= psi.size())
    throw InvalidArgument("current site must satisfy 1 <= j < N");
  return 2.0 * hopping * (std::conj(psi(site - 1)) * psi(site)).imag();
}

double local_current(const State& s, int site, double hopping) {
  return local_current(s.amplitudes, site, hopping);
}

std::vector<LevelCurrent> eigenstate_currents(const EigenSystem& es, int j_probe,
                                              double hopping) {
  std::vector<LevelCurrent> out;
  out.reserve(es.size());
  for (int m = 0; m < es.size(); ++m) {
    Eigen::VectorXcd v = es.vectors.col(m);
    v /= v.cwiseAbs().maxCoeff();
    out.push_back({es.values(m), local_current(v, j_probe, hopping)});
  }
  return out;
}

double predicted_reflection(const ModelSpec& spec, double k0) {
  switch (spec.family()) {
    case Family::CP: return std::norm(reflection_cp(k0, spec.param()));
    case Family::H1: return std::norm(reflection_cp(k0, -std::conj(spec.param())));
    default: throw InvalidArgument("reflection protocol is defined for CP and H1 chains");
  }
}

ReflectionReport measure_reflection(const ModelSpec& spec, const WavepacketSpec& packet,
                                    const ReflectionOptions& opts) {
  if (spec.family() != Family::CP && spec.family() != Family::H1)
    throw InvalidArgument("reflection protocol is defined for CP and H1 chains");
  if (!(packet.k0 < 0.0 && packet.k0 > -std::numbers::pi))
    throw InvalidArgument("incident momentum must lie in (-pi, 0) so the packet moves toward the cluster");

  const int n = spec.sites();
  const double J = spec.hopping();
  const bool mirrored = spec.family() == Family::H1;
  const WavepacketSpec lattice_packet =
      mirrored ? WavepacketSpec{-packet.k0, n + 1.0 - packet.center, packet.alpha} : packet;

  const HamiltonianMatrix h = build_model(spec);
  const State initial = gaussian_wavepacket(lattice_packet, n);

  ReflectionReport report{};
  report.clipped = wavepacket_clipped(lattice_packet, n);
  report.norm_initial = initial.norm2();
  report.duration = opts.duration.value_or(
      (packet.center + 3.0 * packet.half_width()) / (2.0 * J * std::abs(std::sin(packet.k0))) +
      opts.settle_time);

  PropagateOptions prop{opts.method, opts.dt, opts.snapshot_times, 1e12};
  report.snapshots = propagate(h, initial, report.duration, prop);
  const Eigen::VectorXcd& psi = report.snapshots.back().amplitudes;
  report.norm_final = psi.squaredNorm();
  report.reflection = report.norm_final / report.norm_initial;

  const int tail = std::min(opts.tail_sites, n);
  report.tail_norm =
      mirrored ? psi.head(tail).squaredNorm() : psi.tail(tail).squaredNorm();
  if (report.tail_norm > opts.tail_tol)
    throw InvalidRunError("wavefront reached the far boundary before the run ended; enlarge N",
                          report.tail_norm);

  cplx hop{};
  for (int j = 0; j + 1 < n; ++j) hop += std::conj(psi(j)) * psi(j + 1);
  const double k_lattice = std::arg(hop);
  report.k_out = mirrored ? -k_lattice : k_lattice;
  return report;
}

int wavefront_site(const State& s, double threshold) {
  const Eigen::VectorXd p = s.amplitudes.cwiseAbs2();
  const double cut = threshold * p.maxCoeff();
  for (Eigen::Index j = p.size() - 1; j >= 0; --j)
    if (p(j) > cut) return static_cast<int>(j) + 1;
  return 0;
}

EmissionReport measure_emission(const ModelSpec& spec, const State& initial,
                                const EmissionWindows& w, const PropagateOptions& propagation) {
  if (spec.family() != Family::CP && spec.family() != Family::H1)
    throw InvalidArgument("emission protocol is defined for CP and H1 chains");
  const EpReport ep = ep_wave(spec);
  const double k_c = ep.branches.front().k_c;
  const double e_c = ep.branches.front().energy;
  const double J = spec.hopping();
  if (w.t_start < w.min_transient)
    throw InvalidArgument("emission analysis must start after the transient (t >= " +
                          std::to_string(w.min_transient) + "/J)");
  if (!(w.t_end > w.t_start) || !(w.t_step > 0.0) || !(w.delta > 0.0))
    throw InvalidArgument("emission time window is empty");

  std::vector<double> grid;
  const int steps = static_cast<int>(std::floor((w.t_end - w.t_start) / w.t_step + kTimeEps));
  for (int i = 0; i <= steps; ++i) grid.push_back(w.t_start + i * w.t_step);
  std::vector<double> wanted = grid;
  for (double t : grid) wanted.push_back(t + w.delta);
  const double t_final = grid.back() + w.delta;

  const HamiltonianMatrix h = build_model(spec);
  PropagateOptions prop = propagation;
  prop.snapshot_times = wanted;
  EmissionReport report{};
  report.snapshots = propagate(h, initial, t_final, prop);
  auto at = [&](double t) -> const Eigen::VectorXcd& {
    for (const auto& s : report.snapshots)
      if (std::abs(s.time - t) <= kTimeEps) return s.amplitudes;
    throw NumericalError("missing snapshot at t=" + std::to_string(t));
  };

  const int n = spec.sites();
  report.front_site = wavefront_site({at(w.t_start), w.t_start}, w.front_threshold);
  const double filled = 1.0 + w.fill_fraction * 2.0 * J * std::abs(std::sin(k_c)) * w.t_start;
  const int first = 1 + w.cluster_margin;
  const int last = std::min({report.front_site - w.front_margin,
                             static_cast<int>(std::floor(filled)), n - 1});
  if (last - first + 1 < 8)
    throw InvalidRunError("emission window overlaps the wavefront; run longer or use a larger N",
                          last - first + 1);
  report.window = {first, last};

  const int centre = (first + last) / 2;
  cplx hop{}, lag{};
  std::vector<double> amps;
  report.correlation = 1.0;
  for (double t : grid) {
    const Eigen::VectorXcd& psi = at(t);
    const Eigen::VectorXcd& later = at(t + w.delta);
    double amp = 0.0;
    cplx proj{};
    for (int j = first; j <= last; ++j) {
      amp += std::abs(psi(j - 1));
      if (j < last) hop += std::conj(psi(j - 1)) * psi(j);
      proj += psi(j - 1) * std::exp(-kI * (k_c * j - e_c * t));
    }
    amps.push_back(amp / (last - first + 1));
    lag += std::conj(psi(centre - 1)) * later(centre - 1);

    const double phi0 = std::arg(proj);
    std::vector<double> re, model;
    for (int j = first; j <= last; ++j) {
      re.push_back(psi(j - 1).real());
      model.push_back(std::cos(k_c * j - e_c * t + phi0));
    }
    report.correlation = std::min(report.correlation, pearson(re, model));
  }
  report.k_est = std::arg(hop);
  if (report.k_est < 0.0) report.k_est += 2.0 * std::numbers::pi;
  report.omega_est = -std::arg(lag) / w.delta;
  report.phase_velocity = std::abs(report.omega_est / report.k_est);
  const auto [lo, hi] = std::minmax_element(amps.begin(), amps.end());
  double mean = 0.0;
  for (double a : amps) mean += a;
  mean /= amps.size();
  report.amplitude_drift = (*hi - *lo) / mean;
  return report;
}

}  // namespace nhl
