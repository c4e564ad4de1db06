#include <algorithm>
#include <cmath>
#include <numbers>

#include "nhl/analytic.hpp"
#include "nhl/errors.hpp"

namespace nhl {

namespace {

constexpr double kRootTol = 1e-12;

double sign(double x) { return (x > 0.0) - (x < 0.0); }

double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int it = 0; it < 200 && b - a > kRootTol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (sign(fm) == sign(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Sum of coefficient magnitudes of the critical function; the size of G
// itself and the rounding floor of its evaluation both scale with it.
double coefficient_scale(Family family, cplx param) {
  if (family == Family::H1) {
    const double lead = std::abs(std::exp(cplx(0.0, 1.0) * (param - std::conj(param))));
    return lead + 1.0 + 2.0 * std::abs(std::exp(cplx(0.0, 1.0) * param).real());
  }
  const auto [chi1, chi2] = critical_coeffs(param);
  return std::abs(chi1) + std::abs(chi2) + 1.0;
}

}  // namespace

std::vector<double> find_real_roots(const std::function<double(double)>& f, Interval interval,
                                    int grid_n) {
  if (!(interval.hi > interval.lo)) throw InvalidArgument("root interval must have lo < hi");
  if (grid_n < 1) throw InvalidArgument("root grid needs at least one cell");
  const double width = interval.hi - interval.lo;
  std::vector<double> roots;
  double x_prev = interval.lo;
  double f_prev = f(x_prev);
  for (int i = 1; i <= grid_n; ++i) {
    const double x = i == grid_n ? interval.hi : interval.lo + width * i / grid_n;
    const double fx = f(x);
    if (fx == 0.0) {
      if (i < grid_n) roots.push_back(x);  // open interval: skip the end points
    } else if (f_prev != 0.0 && sign(fx) != sign(f_prev)) {
      roots.push_back(bisect(f, x_prev, x, f_prev));
    }
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

std::vector<double> critical_roots(const ModelSpec& spec, int grid_n) {
  if (!is_pt_family(spec.family()))
    throw InvalidArgument("critical roots exist for the finite H1/H2 chains only");
  const int n = spec.sites();
  const double pi = std::numbers::pi;
  auto f = [&](double k) { return critical_function(spec.family(), k, spec.param(), n); };
  auto roots = find_real_roots(f, {0.0, pi}, grid_n > 0 ? grid_n : 40 * n);
  // Rounding can turn the identically-zero end points into a sign change in
  // the first or last cell.
  constexpr double kEdge = 1e-9;
  std::erase_if(roots, [&](double k) { return k < kEdge || k > pi - kEdge; });
  return roots;
}

ParameterLine ParameterLine::theta_real() {
  return {"theta_real", [](double t) { return cplx(t, 0.0); }};
}

ParameterLine ParameterLine::kappa_ray(double phase) {
  const cplx dir = std::polar(1.0, phase);
  return {phase == 0.0 ? "kappa_real" : "kappa_ray", [dir](double t) { return t * dir; }};
}

FiniteEp find_exceptional_point(Family family, int sites, const ParameterLine& line,
                                double k_start, double t_start, const EpSearchOptions& opts) {
  if (!is_pt_family(family))
    throw InvalidArgument("the finite-chain EP finder works on H1/H2 only");
  if (sites < 4) throw InvalidArgument("EP finder needs N >= 4");

  const double n1 = sites + 1.0;
  auto g = [&](double k, double t) { return critical_function(family, k, line.map(t), sites); };
  auto dg = [&](double k, double t) {
    const double h = opts.fd_step * std::max(1.0, std::abs(k));
    return (g(k + h, t) - g(k - h, t)) / (2.0 * h);
  };
  // Residual vector, each component divided by its natural scale.
  auto residual = [&](double k, double t, double& r0, double& r1) {
    const double s = coefficient_scale(family, line.map(t));
    r0 = g(k, t) / s;
    r1 = dg(k, t) / (n1 * s);
    return std::max(std::abs(r0), std::abs(r1));
  };

  double k = k_start, t = t_start;
  double r0, r1;
  double res = residual(k, t, r0, r1);
  double lambda = 1e-3;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (res <= opts.tol) return {k, t, line.map(t), res, it};

    const double s = coefficient_scale(family, line.map(t));
    const double hk = 1e-4 * std::max(1.0, std::abs(k));
    const double ht = 1e-5 * std::max(1.0, std::abs(t));
    const double j00 = dg(k, t) / s;
    const double j01 = (g(k, t + ht) - g(k, t - ht)) / (2.0 * ht) / s;
    const double j10 = (g(k + hk, t) - 2.0 * g(k, t) + g(k - hk, t)) / (hk * hk) / (n1 * s);
    const double j11 = (dg(k, t + ht) - dg(k, t - ht)) / (2.0 * ht) / (n1 * s);

    const double a00 = j00 * j00 + j10 * j10;
    const double a01 = j00 * j01 + j10 * j11;
    const double a11 = j01 * j01 + j11 * j11;
    const double b0 = -(j00 * r0 + j10 * r1);
    const double b1 = -(j01 * r0 + j11 * r1);

    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      const double m00 = a00 * (1.0 + lambda) + 1e-300;
      const double m11 = a11 * (1.0 + lambda) + 1e-300;
      const double det = m00 * m11 - a01 * a01;
      if (det == 0.0 || !std::isfinite(det)) {
        lambda *= 10.0;
        continue;
      }
      const double dk = (b0 * m11 - a01 * b1) / det;
      const double dt = (m00 * b1 - a01 * b0) / det;
      double q0, q1;
      const double trial = residual(k + dk, t + dt, q0, q1);
      if (trial < res) {
        k += dk;
        t += dt;
        r0 = q0;
        r1 = q1;
        res = trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) break;
  }
  if (res <= opts.tol) return {k, t, line.map(t), res, it};
  throw NotConvergedError("exceptional-point search did not converge", res, it);
}

}  // namespace nhl
