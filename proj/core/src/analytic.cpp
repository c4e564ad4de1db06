#include "nhl/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nhl/errors.hpp"

namespace nhl {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr double kPoleTol = 1e-14;
constexpr double kBoundaryTol = 1e-12;

double wrap_2pi(double k) {
  double r = std::fmod(k, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r -= 2.0 * kPi;
  return r;
}

cplx checked_ratio(cplx num, cplx den, double k, const char* model) {
  if (std::abs(den) < kPoleTol)
    throw PoleError(std::string(model) + " reflection amplitude has a pole at k=" +
                        std::to_string(k),
                    k, std::abs(den));
  return num / den;
}

Family semi_infinite(Family family) {
  switch (family) {
    case Family::H1: return Family::CP;
    case Family::H2: return Family::CC;
    default: return family;
  }
}

}  // namespace

cplx reflection_cp(double k, cplx theta) {
  const cplx num = -(1.0 + std::exp(kI * (theta + k)));
  const cplx den = 1.0 + std::exp(kI * (theta - k));
  return checked_ratio(num, den, k, "CP");
}

cplx reflection_cc(double k, cplx kappa) {
  const cplx g = kappa * kappa - 1.0;
  const cplx num = -(g * std::exp(2.0 * kI * k) - 1.0);
  const cplx den = g * std::exp(-2.0 * kI * k) - 1.0;
  return checked_ratio(num, den, k, "CC");
}

cplx reflection(Family family, double k, cplx param) {
  return semi_infinite(family) == Family::CP ? reflection_cp(k, param) : reflection_cc(k, param);
}

std::optional<BoundState> bound_state_cp(cplx theta, double hopping) {
  if (!(theta.imag() < 0.0)) return std::nullopt;
  const cplx k = kPi - theta;
  return BoundState{{wrap_2pi(k.real()), k.imag()}, 2.0 * hopping * std::cos(theta)};
}

std::vector<BoundState> bound_states_cc(cplx kappa, double hopping) {
  const cplx g = kappa * kappa - 1.0;
  if (std::abs(g) < kPoleTol)
    throw NumericalError("kappa^2 = 1 puts the bound-state momentum on the log branch point",
                         std::abs(g));
  std::vector<BoundState> out;
  // On the lemniscate |kappa^2 - 1| = 1 and Im k vanishes; rounding must not
  // turn a boundary point into a bound state.
  if (phase_indicator(Family::CC, kappa) <= kBoundaryTol) return out;
  const cplx base = 0.5 * kI * std::log(g);
  for (double shift : {0.0, kPi}) {
    const cplx k = base + shift;
    if (k.imag() > 0.0)
      out.push_back({{wrap_2pi(k.real()), k.imag()}, -2.0 * hopping * std::cos(k)});
  }
  return out;
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Unbroken: return "UNBROKEN";
    case Region::Broken: return "BROKEN";
    case Region::Boundary: return "BOUNDARY";
  }
  return "?";
}

std::string_view to_string(BoundaryKind kind) {
  return kind == BoundaryKind::Circle ? "CIRCLE" : "LEMNISCATE";
}

double phase_indicator(Family family, cplx param) {
  if (semi_infinite(family) == Family::CP) return param.imag();
  return std::pow(std::norm(param), 2) - 2.0 * (param * param).real();
}

PhaseReport phase_classify(const ModelSpec& spec, double boundary_tol) {
  const Family fam = semi_infinite(spec.family());
  const double ind = phase_indicator(fam, spec.param());
  PhaseReport out{Region::Boundary, ind,
                  fam == Family::CP ? BoundaryKind::Circle : BoundaryKind::Lemniscate};
  // Broken side: Im(theta) < 0 for CP, indicator > 0 for CC.
  const double broken_side = fam == Family::CP ? -ind : ind;
  if (broken_side > boundary_tol)
    out.region = Region::Broken;
  else if (broken_side < -boundary_tol)
    out.region = Region::Unbroken;
  return out;
}

EpReport ep_wave(const ModelSpec& spec, double boundary_tol) {
  const PhaseReport phase = phase_classify(spec, boundary_tol);
  if (phase.region != Region::Boundary)
    throw InvalidArgument("ep_wave requires a parameter on the phase boundary (indicator " +
                          std::to_string(phase.indicator) + ")");
  const double J = spec.hopping();
  EpReport out{spec.family(), spec.param(), J, std::numeric_limits<double>::quiet_NaN(), {}};
  auto branch = [J](double k) {
    const double kc = wrap_2pi(k);
    return EpBranch{kc, -2.0 * J * std::cos(kc), 2.0 * J * std::sin(kc)};
  };
  if (semi_infinite(spec.family()) == Family::CP) {
    out.branches.push_back(branch(kPi - spec.param().real()));
    return out;
  }
  const cplx kappa = spec.param();
  const cplx g = kappa * kappa - 1.0;
  out.phi = std::arg(1.0 / g);
  out.branches.push_back(branch(0.5 * out.phi));
  out.branches.push_back(branch(0.5 * out.phi + kPi));
  return out;
}

Eigen::VectorXcd ep_profile(const EpReport& report, int branch, int sites) {
  if (branch < 0 || branch >= static_cast<int>(report.branches.size()))
    throw InvalidArgument("EP branch index out of range");
  const double k = report.branches[branch].k_c;
  Eigen::VectorXcd f(sites);
  for (int j = 1; j <= sites; ++j) f(j - 1) = std::exp(kI * (k * j));
  if (semi_infinite(report.family) == Family::CC) f(0) /= report.param_c;
  return f;
}

CriticalEqCoeffs critical_coeffs(cplx kappa) {
  const cplx chi1 = kappa * kappa + std::conj(kappa) * std::conj(kappa) - 2.0;
  const cplx chi2 = chi1 - std::pow(std::norm(kappa), 2) + 1.0;
  return {chi1, chi2};
}

cplx gamma_h1(double k, cplx theta, int sites) {
  if (sites < 2) throw InvalidArgument("gamma_h1 needs N >= 2");
  const double n = sites;
  const cplx lead = std::exp(kI * (theta - std::conj(theta)));
  const double re_pot = std::exp(kI * theta).real();
  return lead * std::sin(k * (n - 1.0)) + std::sin(k * (n + 1.0)) +
         2.0 * re_pot * std::sin(k * n);
}

cplx delta_h2(double k, cplx kappa, int sites) {
  if (sites < 4) throw InvalidArgument("delta_h2 needs N >= 4");
  const double n = sites;
  const auto [chi1, chi2] = critical_coeffs(kappa);
  return chi2 * std::sin(k * (n - 3.0)) + chi1 * std::sin(k * (n - 1.0)) -
         std::sin(k * (n + 1.0));
}

double critical_function(Family family, double k, cplx param, int sites) {
  switch (family) {
    case Family::H1: return gamma_h1(k, param, sites).real();
    case Family::H2: return delta_h2(k, param, sites).real();
    default: throw InvalidArgument("critical functions exist for the finite H1/H2 chains only");
  }
}

ReflectionlessPoint optimal_reflectionless(Family family) {
  const Family fam = semi_infinite(family);
  ReflectionlessPoint out{};
  out.family = fam;
  if (fam == Family::CP) {
    out.param = kPi / 2.0;
    out.param_squared = out.param * out.param;
    out.k_c = kPi / 2.0;
  } else {
    out.param_squared = {1.0, -1.0};
    out.param = std::sqrt(out.param_squared);
    out.k_c = kPi / 4.0;
  }
  auto abs_r = [&](double k) { return std::abs(reflection(fam, k, out.param)); };
  const double h = 1e-6 * out.k_c;
  out.abs_r = abs_r(out.k_c);
  out.d_abs_r_dk = (abs_r(out.k_c + h) - abs_r(out.k_c - h)) / (2.0 * h);
  if (!(out.abs_r < 1e-12) || !(std::abs(out.d_abs_r_dk) < 1e-8))
    throw NumericalError("reflectionless conditions not met at the optimal point",
                         std::max(out.abs_r, std::abs(out.d_abs_r_dk)));
  return out;
}

double check_reciprocity(Family family, cplx param, double k) {
  const cplx forward = reflection(family, k, param);
  const cplx backward = reflection(family, -k, param);
  if (std::abs(forward) < kPoleTol)
    throw PoleError("1/R(k) has a pole (R(k) = 0)", k, std::abs(forward));
  return std::abs(1.0 / forward - backward) / std::max(1.0, std::abs(backward));
}

}  // namespace nhl
