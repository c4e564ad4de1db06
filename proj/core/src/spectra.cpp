#include "nhl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "nhl/errors.hpp"

namespace nhl {

namespace {

bool level_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<int> level_order(const Eigen::VectorXcd& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return level_less(values(x), values(y)); });
  return order;
}

double wrap_2pi(double k) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(k, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

}  // namespace

void sort_levels(Eigen::VectorXcd& values) {
  std::sort(values.data(), values.data() + values.size(), level_less);
}

EigenSystem eigendecompose(const HamiltonianMatrix& h, const EigenOptions& opts) {
  const Eigen::MatrixXcd& a = h.dense();
  if (!a.allFinite()) throw InvalidArgument("Hamiltonian has non-finite entries");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("complex Schur iteration did not converge",
                         std::numeric_limits<double>::infinity());

  const Eigen::VectorXcd raw_values = solver.eigenvalues();
  const Eigen::MatrixXcd raw_vectors = solver.eigenvectors();
  const std::vector<int> order = level_order(raw_values);

  const int n = h.dimension();
  EigenSystem es;
  es.hopping = h.spec().hopping();
  es.values.resize(n);
  es.vectors.resize(n, n);
  es.residuals.resize(n);
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  double worst = 0.0;
  for (int m = 0; m < n; ++m) {
    const int src = order[m];
    Eigen::VectorXcd v = raw_vectors.col(src);
    v.normalize();
    es.values(m) = raw_values(src);
    es.vectors.col(m) = v;
    es.residuals(m) = (a * v - raw_values(src) * v).norm();
    worst = std::max(worst, es.residuals(m) / scale);
  }
  if (worst > opts.residual_tol)
    throw NumericalError("eigenpair residual " + std::to_string(worst) +
                             " exceeds the contract relative to ||H||_F",
                         worst);
  return es;
}

Eigen::MatrixXd pt_real_form(const HamiltonianMatrix& h) {
  const int n = h.dimension();
  const Eigen::VectorXd g = pt_parity_signs(h.spec());
  const Eigen::MatrixXcd& a = h.dense();
  // U = (1 + i P')/sqrt(2) with P'_{r, n-1-r} = g_r.
  // U^dagger A U = (A + P'AP' + i (A P' - P' A)) / 2.
  Eigen::MatrixXcd pap(n, n), ap(n, n), pa(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const int rr = n - 1 - r, cc = n - 1 - c;
      pap(r, c) = g(r) * g(c) * a(rr, cc);
      ap(r, c) = a(r, cc) * g(cc);
      pa(r, c) = g(r) * a(rr, c);
    }
  const Eigen::MatrixXcd u = 0.5 * (a + pap + cplx(0.0, 1.0) * (ap - pa));
  const double tol = 1e-12 * std::max(1.0, a.norm());
  if (u.imag().cwiseAbs().maxCoeff() > tol)
    throw InvalidArgument("matrix is not invariant under its generalized parity-conjugation");
  return u.real();
}

Eigen::VectorXcd eigenvalues(const HamiltonianMatrix& h) {
  if (!h.dense().allFinite()) throw InvalidArgument("Hamiltonian has non-finite entries");
  Eigen::VectorXcd values;
  if (is_pt_family(h.spec().family())) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(pt_real_form(h), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
      throw NumericalError("real Schur iteration did not converge",
                           std::numeric_limits<double>::infinity());
    values = solver.eigenvalues();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h.dense(), false);
    if (solver.info() != Eigen::Success)
      throw NumericalError("complex Schur iteration did not converge",
                           std::numeric_limits<double>::infinity());
    values = solver.eigenvalues();
  }
  sort_levels(values);
  return values;
}

SpectrumClass classify_levels(const Eigen::VectorXcd& values, double im_tol, double hopping) {
  SpectrumClass out;
  const double cut = im_tol * hopping;
  std::vector<int> upper, lower;
  for (int m = 0; m < values.size(); ++m) {
    const double im = values(m).imag();
    if (std::abs(im) <= cut) {
      ++out.n_real;
    } else {
      ++out.n_complex;
      (im > 0 ? upper : lower).push_back(m);
    }
  }
  // Nearest-conjugate matching, greedy on the globally closest pairs first.
  struct Candidate {
    double distance;
    int u, l;
  };
  std::vector<Candidate> candidates;
  for (int u : upper)
    for (int l : lower)
      candidates.push_back({std::abs(values(u) - std::conj(values(l))), u, l});
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    if (x.u != y.u) return x.u < y.u;
    return x.l < y.l;
  });
  std::vector<bool> used(values.size(), false);
  const double match_tol = 100.0 * cut;
  for (const auto& c : candidates) {
    if (c.distance > match_tol) break;
    if (used[c.u] || used[c.l]) continue;
    used[c.u] = used[c.l] = true;
    out.pairs.push_back({c.u, c.l, c.distance});
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const ConjugatePair& x, const ConjugatePair& y) { return x.upper < y.upper; });
  for (int m : upper)
    if (!used[m]) out.unmatched.push_back(m);
  for (int m : lower)
    if (!used[m]) out.unmatched.push_back(m);
  std::sort(out.unmatched.begin(), out.unmatched.end());
  return out;
}

SpectrumClass classify_levels(const EigenSystem& es, double im_tol) {
  return classify_levels(es.values, im_tol, es.hopping);
}

std::string_view to_string(LeadKind kind) {
  switch (kind) {
    case LeadKind::SS: return "SS";
    case LeadKind::MD: return "MD";
    case LeadKind::OD: return "OD";
  }
  return "?";
}

LeadWaveClass fit_lead_wave(std::span<const cplx> v, SiteRange window, const LeadFitOptions& opts) {
  const int n = static_cast<int>(v.size());
  if (window.first < 1 || window.last > n || window.size() < 8)
    throw InvalidArgument("lead fit window must lie inside the vector and span at least 8 sites");

  const auto f = v.subspan(window.first - 1, window.size());
  const int len = static_cast<int>(f.size());
  double peak = 0.0, global_peak = 0.0;
  for (cplx x : f) peak = std::max(peak, std::abs(x));
  for (cplx x : v) global_peak = std::max(global_peak, std::abs(x));
  if (peak == 0.0 || peak < 1e-12 * global_peak)
    throw NoSignalError("lead fit window carries no signal", peak);

  // Least squares for c in f(j+2) + f(j) = c f(j+1).
  cplx num{};
  double den = 0.0;
  for (int j = 0; j + 2 < len; ++j) {
    num += std::conj(f[j + 1]) * (f[j + 2] + f[j]);
    den += std::norm(f[j + 1]);
  }
  if (den == 0.0) throw NoSignalError("lead fit window carries no signal", 0.0);
  const cplx c = num / den;
  const cplx disc = std::sqrt(c * c - 4.0);
  cplx z1 = 0.5 * (c + disc);
  cplx z2 = 0.5 * (c - disc);

  // Amplitudes for a given root ordering, in window-local coordinates.
  auto amplitudes = [&](cplx z, cplx& a, cplx& b) {
    // Normal equations of the 2-column least-squares problem [z^j, z^-j].
    Eigen::MatrixXcd basis(len, 2);
    Eigen::VectorXcd rhs(len);
    cplx zp{1.0, 0.0}, zm{1.0, 0.0};
    const cplx zinv = 1.0 / z;
    for (int j = 0; j < len; ++j) {
      basis(j, 0) = zp;
      basis(j, 1) = zm;
      rhs(j) = f[j];
      zp *= z;
      zm *= zinv;
    }
    const Eigen::VectorXcd sol = basis.completeOrthogonalDecomposition().solve(rhs);
    a = sol(0);
    b = sol(1);
    return (basis * sol - rhs).norm() / rhs.norm();
  };

  if (std::abs(z2) < std::abs(z1)) std::swap(z1, z2);  // |z1| <= 1 <= |z2|
  LeadWaveClass out;
  out.beta = -std::abs(std::log(std::abs(z1)));
  const bool scattering = std::abs(out.beta) < opts.beta_tol;
  out.fit_residual = amplitudes(z1, out.a, out.b);
  if (scattering && std::abs(out.a) < std::abs(out.b)) {
    std::swap(z1, z2);
    out.fit_residual = amplitudes(z1, out.a, out.b);
  }
  out.k = wrap_2pi(std::arg(z1));

  if (scattering) {
    out.kind = LeadKind::SS;
  } else {
    const double pi = std::numbers::pi;
    const double to_zero = std::min(out.k, 2.0 * pi - out.k);
    const bool edge = to_zero < opts.k_tol || std::abs(out.k - pi) < opts.k_tol;
    out.kind = edge ? LeadKind::MD : LeadKind::OD;
  }
  return out;
}

LeadWaveClass fit_lead_wave(const Eigen::VectorXcd& v, SiteRange window,
                            const LeadFitOptions& opts) {
  return fit_lead_wave(std::span<const cplx>(v.data(), v.size()), window, opts);
}

double ipr(std::span<const cplx> v) {
  double s2 = 0.0, s4 = 0.0;
  for (cplx x : v) {
    const double p = std::norm(x);
    s2 += p;
    s4 += p * p;
  }
  if (s2 == 0.0) throw InvalidArgument("IPR of a zero vector is undefined");
  return s4 / (s2 * s2);
}

double ipr(const Eigen::VectorXcd& v) {
  return ipr(std::span<const cplx>(v.data(), v.size()));
}

}  // namespace nhl
