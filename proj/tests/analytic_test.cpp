#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nhl/analytic.hpp"
#include "nhl/errors.hpp"
#include "nhl/lattice.hpp"
#include "nhl/spectra.hpp"
#include "oracles.hpp"

using nhl::cplx;
using nhl::Family;
using nhl::ModelSpec;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// Scattering state with amplitude ratio r on a long truncated chain, checked
// against H site by site away from the far end. The CC dimer site amplitude
// follows from its own row of H.
double scattering_residual(const ModelSpec& spec, double k, cplx r) {
  const auto h = nhl::build_model(spec);
  const int n = spec.sites();
  const double J = spec.hopping();
  const cplx e = -2.0 * J * std::cos(k);
  Eigen::VectorXcd f(n);
  for (int j = 1; j <= n; ++j) f(j - 1) = std::exp(kI * (k * j)) + r * std::exp(-kI * (k * j));
  if (spec.family() == Family::CC) f(0) = h.at(1, 2) * f(1) / e;
  const Eigen::VectorXcd hf = oracle::naive_matvec(h.dense(), f);
  double worst = 0.0;
  for (int j = 0; j < n - 1; ++j) worst = std::max(worst, std::abs(hf(j) - e * f(j)));
  return worst;
}

}  // namespace

TEST_CASE("reflection_cp hand values") {
  CHECK(std::abs(nhl::reflection_cp(kPi / 2, kPi / 2)) < 1e-15);
  const cplx r = nhl::reflection_cp(kPi / 2, 0.0);
  CHECK(std::abs(r - cplx(0.0, -1.0)) < 1e-15);
}

TEST_CASE("reflection_cc hand values") {
  CHECK(std::abs(nhl::reflection_cc(kPi / 4, std::sqrt(cplx(1.0, -1.0)))) < 1e-15);
  for (double k : {0.2, 1.0, 2.5}) CHECK(std::abs(nhl::reflection_cc(k, 1.0) + 1.0) < 1e-15);
  CHECK_THROWS_AS(nhl::reflection_cc(kPi / 4, std::sqrt(cplx(1.0, 1.0))), nhl::PoleError);
  CHECK_THROWS_AS(nhl::reflection_cp(kPi / 2, -kPi / 2), nhl::PoleError);
}

TEST_CASE("reflection amplitudes solve the lattice equations") {
  for (const auto& [theta, k] : {std::pair{cplx(0.3, 0.2), 1.0}, std::pair{cplx(1.7, -0.4), 0.4},
                                 std::pair{cplx(-0.5, 0.9), 2.6}}) {
    const auto spec = ModelSpec::cp(theta, 40);
    CHECK(scattering_residual(spec, k, nhl::reflection_cp(k, theta)) < 1e-12);
    CHECK(scattering_residual(spec, k, -nhl::reflection_cp(k, theta)) > 1e-3);
  }
  for (const auto& [kappa, k] : {std::pair{cplx(0.7, 0.1), 0.8}, std::pair{cplx(1.3, -0.6), 2.1},
                                 std::pair{cplx(0.2, 0.5), 1.4}}) {
    const auto spec = ModelSpec::cc(kappa, 40);
    CHECK(scattering_residual(spec, k, nhl::reflection_cc(k, kappa)) < 1e-12);
  }
}

TEST_CASE("unitarity of reflection for Hermitian parameters") {
  // CP is Hermitian for Re(theta) in {0, pi}, CC for real kappa.
  int checked = 0;
  for (int a = 0; a < 100; ++a) {
    const double b = -2.0 + 4.0 * a / 99.0;
    const cplx theta{a % 2 ? kPi : 0.0, b};
    const double kappa = 0.05 + 2.5 * a / 99.0;
    for (int i = 0; i < 100; ++i) {
      const double k = kPi * (i + 0.5) / 100.0;
      CHECK(std::abs(std::abs(nhl::reflection_cp(k, theta)) - 1.0) < 1e-12);
      CHECK(std::abs(std::abs(nhl::reflection_cc(k, kappa)) - 1.0) < 1e-12);
      ++checked;
    }
  }
  CHECK(checked == 10000);
}

TEST_CASE("the two ends of H1 are flux-reciprocal") {
  // |R(k, theta)| |R(k, -theta*)| = 1 for any theta; real theta on its own
  // does not give |R| = 1 (theta = pi/2 absorbs completely at k = pi/2).
  for (cplx theta : {cplx(0.3, 0.2), cplx(1.2, 0.0), cplx(2.1, -0.6)}) {
    for (double k = 0.05; k < kPi; k += 0.2) {
      const double prod =
          std::abs(nhl::reflection_cp(k, theta)) * std::abs(nhl::reflection_cp(k, -std::conj(theta)));
      CHECK(std::abs(prod - 1.0) < 1e-12);
    }
  }
  CHECK(std::abs(nhl::reflection_cp(1.0, 1.2)) < 0.9);
}

TEST_CASE("reciprocity between R(k) and R(-k)") {
  CHECK(nhl::check_reciprocity(Family::CP, {0.3, 0.2}, 1.0) <= 1e-12);
  CHECK(nhl::check_reciprocity(Family::CC, {0.7, 0.1}, 0.8) <= 1e-12);
  CHECK(nhl::check_reciprocity(Family::CP, 0.0, kPi / 2) <= 1e-14);
  for (double k = 0.05; k < kPi; k += 0.1) {
    CHECK(nhl::check_reciprocity(Family::CP, {1.1, -0.3}, k) <= 1e-12);
    CHECK(nhl::check_reciprocity(Family::CC, {0.9, 0.4}, k) <= 1e-12);
  }
  CHECK_THROWS_AS(nhl::check_reciprocity(Family::CP, kPi / 2, kPi / 2), nhl::PoleError);
}

TEST_CASE("bound_state_cp") {
  const auto b = nhl::bound_state_cp({0.4, -0.4});
  REQUIRE(b.has_value());
  CHECK(std::abs(b->k - cplx(kPi - 0.4, 0.4)) < 1e-14);
  CHECK(std::abs(b->energy - cplx(1.9915, 0.3199)) < 1e-4);
  CHECK(std::abs(b->energy + 2.0 * std::cos(b->k)) < 1e-12);
  CHECK_FALSE(nhl::bound_state_cp({0.4, 0.4}).has_value());
  CHECK_FALSE(nhl::bound_state_cp(1.3).has_value());
}

TEST_CASE("bound_states_cc") {
  const cplx kappa{1.0, 1.0};
  const auto states = nhl::bound_states_cc(kappa);
  REQUIRE(states.size() == 2);
  std::vector<cplx> got;
  for (const auto& s : states) {
    CHECK(s.k.imag() > 0.0);
    CHECK(s.k.real() >= 0.0);
    CHECK(s.k.real() < 2.0 * kPi);
    CHECK(std::abs(s.energy + 2.0 * std::cos(s.k)) < 1e-12);
    got.push_back(s.energy);
  }
  const auto ref = oracle::cc_bound_energies(kappa);
  REQUIRE(ref.size() == 2);
  Eigen::VectorXcd gv(2);
  gv << got[0], got[1];
  CHECK(oracle::worst_match(ref, gv) < 1e-12);
  CHECK(oracle::worst_match({{-1.137, -0.703}, {1.137, 0.703}}, gv) < 1e-3);

  CHECK(nhl::bound_states_cc(std::sqrt(2.0)).empty());
  CHECK(nhl::bound_states_cc(0.5).empty());
  CHECK_THROWS_AS(nhl::bound_states_cc(1.0), nhl::NumericalError);
  CHECK_THROWS_AS(nhl::bound_states_cc(-1.0), nhl::NumericalError);
}

TEST_CASE("bound-state energies appear in the truncated spectra") {
  SUBCASE("CP") {
    const cplx theta{0.4, -0.4};
    const auto values = nhl::eigenvalues(nhl::build_model(ModelSpec::cp(theta, 400)));
    CHECK(oracle::worst_match({nhl::bound_state_cp(theta)->energy}, values) < 1e-3);
  }
  SUBCASE("CC") {
    const cplx kappa{1.0, 1.0};
    const auto values = nhl::eigenvalues(nhl::build_model(ModelSpec::cc(kappa, 400)));
    std::vector<cplx> e;
    for (const auto& s : nhl::bound_states_cc(kappa)) e.push_back(s.energy);
    CHECK(oracle::worst_match(e, values) < 1e-3);
  }
  SUBCASE("CC unbroken: no level leaves the real axis") {
    const auto values = nhl::eigenvalues(nhl::build_model(ModelSpec::cc(0.5, 400)));
    for (int m = 0; m < values.size(); ++m) CHECK(std::abs(values(m).imag()) < 1e-8);
  }
  // The PT chains pair each bound state with its mirror image, so the
  // complex-level count doubles.
  SUBCASE("complex-level counts on the PT chains") {
    const auto c1 =
        nhl::classify_levels(nhl::eigenvalues(nhl::build_model(ModelSpec::h1({0.4, -0.4}, 400))));
    CHECK(c1.n_complex == 2);
    const auto c2 =
        nhl::classify_levels(nhl::eigenvalues(nhl::build_model(ModelSpec::h2({1.0, 1.0}, 400))));
    CHECK(c2.n_complex == 4);
  }
}

TEST_CASE("phase_classify") {
  const auto cp = nhl::phase_classify(ModelSpec::cp(3.0 * kPi / 4.0, 50));
  CHECK(cp.region == nhl::Region::Boundary);
  CHECK(cp.boundary_kind == nhl::BoundaryKind::Circle);
  CHECK(nhl::phase_classify(ModelSpec::cp({0.4, -0.4}, 50)).region == nhl::Region::Broken);
  CHECK(nhl::phase_classify(ModelSpec::h1({0.4, 0.4}, 50)).region == nhl::Region::Unbroken);

  const auto cc = nhl::phase_classify(ModelSpec::cc({1.0, 1.0}, 50));
  CHECK(cc.region == nhl::Region::Broken);
  CHECK(cc.boundary_kind == nhl::BoundaryKind::Lemniscate);
  CHECK(std::abs(cc.indicator - 4.0) < 1e-14);
  const auto ep = nhl::phase_classify(ModelSpec::cc(std::sqrt(cplx(1.0, 1.0)), 50));
  CHECK(ep.region == nhl::Region::Boundary);
  CHECK(std::abs(ep.indicator) < 1e-12);
  CHECK(nhl::phase_classify(ModelSpec::h2(0.5, 50)).region == nhl::Region::Unbroken);
}

TEST_CASE("ep_wave values") {
  SUBCASE("CP theta = 3 pi/4") {
    const auto r = nhl::ep_wave(ModelSpec::cp(3.0 * kPi / 4.0, 50));
    REQUIRE(r.branches.size() == 1);
    CHECK(std::abs(r.branches[0].k_c - kPi / 4.0) < 1e-14);
    CHECK(std::abs(r.branches[0].energy + std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(r.branches[0].current - std::sqrt(2.0)) < 1e-14);
  }
  SUBCASE("CP theta = pi/2") {
    const auto r = nhl::ep_wave(ModelSpec::cp(kPi / 2.0, 50));
    CHECK(std::abs(r.branches[0].k_c - kPi / 2.0) < 1e-14);
    CHECK(std::abs(r.branches[0].energy) < 1e-14);
    CHECK(std::abs(r.branches[0].current - 2.0) < 1e-14);
  }
  SUBCASE("CC kappa^2 = 1 + i") {
    const auto r = nhl::ep_wave(ModelSpec::cc(std::sqrt(cplx(1.0, 1.0)), 50));
    CHECK(std::abs(r.phi + kPi / 2.0) < 1e-12);
    REQUIRE(r.branches.size() == 2);
    CHECK(std::abs(r.branches[0].k_c - 7.0 * kPi / 4.0) < 1e-12);
    CHECK(std::abs(r.branches[1].k_c - 3.0 * kPi / 4.0) < 1e-12);
    CHECK(std::abs(std::abs(r.branches[0].energy) - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(r.branches[0].energy + r.branches[1].energy) < 1e-12);
    CHECK(std::abs(r.branches[0].current + r.branches[1].current) < 1e-12);
    CHECK(std::abs(std::abs(r.branches[0].current) - std::sqrt(2.0)) < 1e-12);
  }
  SUBCASE("CC kappa^2 = 1 - i has k_c = pi/4") {
    const auto r = nhl::ep_wave(ModelSpec::cc(std::sqrt(cplx(1.0, -1.0)), 50));
    CHECK(std::abs(r.branches[0].k_c - kPi / 4.0) < 1e-12);
  }
  CHECK_THROWS_AS(nhl::ep_wave(ModelSpec::cp({0.4, -0.4}, 50)), nhl::InvalidArgument);
  CHECK_THROWS_AS(nhl::ep_wave(ModelSpec::cc(0.5, 50)), nhl::InvalidArgument);
}

TEST_CASE("ep_wave profiles solve the lattice equations") {
  const int n = 50;
  std::vector<ModelSpec> specs{ModelSpec::cp(3.0 * kPi / 4.0, n), ModelSpec::cp(kPi / 2.0, n),
                               ModelSpec::cp(0.3, n)};
  for (double phase : {0.1, 0.4, -0.6}) {
    // Points on the lemniscate r^2 = 2 cos(2 phase).
    specs.push_back(ModelSpec::cc(std::polar(std::sqrt(2.0 * std::cos(2.0 * phase)), phase), n));
  }
  specs.push_back(ModelSpec::cc(std::sqrt(cplx(1.0, 1.0)), n));
  for (const auto& spec : specs) {
    const auto report = nhl::ep_wave(spec);
    const auto h = nhl::build_model(spec);
    for (int b = 0; b < static_cast<int>(report.branches.size()); ++b) {
      const Eigen::VectorXcd f = nhl::ep_profile(report, b, n);
      const Eigen::VectorXcd hf = oracle::naive_matvec(h.dense(), f);
      double worst = 0.0;
      for (int j = 0; j < n - 1; ++j)
        worst = std::max(worst, std::abs(hf(j) - report.branches[b].energy * f(j)));
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("critical coefficients are real") {
  for (cplx kappa : {cplx(1.0, 1.0), cplx(0.3, -0.7), cplx(2.0, 0.5)}) {
    const auto c = nhl::critical_coeffs(kappa);
    CHECK(std::abs(c.chi1.imag()) <= 1e-14);
    CHECK(std::abs(c.chi2.imag()) <= 1e-14);
  }
  const auto c = nhl::critical_coeffs({1.0, 1.0});
  CHECK(std::abs(c.chi1 + 2.0) < 1e-14);
  CHECK(std::abs(c.chi2 + 5.0) < 1e-14);
}

TEST_CASE("gamma_h1 and delta_h2 hand values") {
  CHECK(std::abs(nhl::gamma_h1(kPi / 3.0, kPi / 2.0, 4) + std::sqrt(3.0) / 2.0) < 1e-14);
  CHECK(std::abs(nhl::delta_h2(kPi / 2.0, {1.0, 1.0}, 8) + 4.0) < 1e-13);
  for (int m = 1; m < 10; ++m) CHECK(std::abs(nhl::gamma_h1(m * kPi / 10.0, 0.7, 10)) < 1e-13);
}

TEST_CASE("gamma_h1 factors for real theta") {
  for (double theta : {0.0, 0.6, 2.2, -1.1}) {
    for (int i = 0; i <= 200; ++i) {
      const double k = -kPi + 2.0 * kPi * i / 200.0;
      const double factored = 2.0 * std::sin(k * 13.0) * (std::cos(k) + std::cos(theta));
      CHECK(std::abs(nhl::gamma_h1(k, theta, 13) - factored) < 1e-12);
    }
  }
}

TEST_CASE("critical functions are real for real k") {
  for (double k = 0.0; k < kPi; k += 0.13) {
    CHECK(std::abs(nhl::gamma_h1(k, {1.1, 0.4}, 20).imag()) < 1e-13);
    CHECK(std::abs(nhl::delta_h2(k, {0.6, -0.4}, 20).imag()) < 1e-13);
  }
  CHECK_THROWS_AS(nhl::critical_function(Family::CP, 0.3, 0.2, 10), nhl::InvalidArgument);
}

TEST_CASE("optimal_reflectionless") {
  const auto cp = nhl::optimal_reflectionless(Family::CP);
  CHECK(std::abs(cp.param - kPi / 2.0) < 1e-15);
  CHECK(std::abs(cp.k_c - kPi / 2.0) < 1e-15);
  CHECK(cp.abs_r < 1e-12);
  CHECK(std::abs(cp.d_abs_r_dk) < 1e-8);

  const auto cc = nhl::optimal_reflectionless(Family::CC);
  CHECK(std::abs(cc.param_squared - cplx(1.0, -1.0)) < 1e-15);
  CHECK(std::abs(cc.k_c - kPi / 4.0) < 1e-15);
  CHECK(cc.abs_r < 1e-12);

  // |R| has a symmetric V-shaped zero at the optimal point, |R| = tan(dk/2).
  for (double dk : {0.01, -0.01}) {
    const double r = std::abs(nhl::reflection_cp(kPi / 2.0 + dk, kPi / 2.0));
    CHECK(std::abs(r - std::tan(0.005)) < 1e-12);
  }
  // kappa^2 = 1 + i zeroes R on the other branch, k = 3 pi/4.
  CHECK(std::abs(nhl::reflection_cc(3.0 * kPi / 4.0, std::sqrt(cplx(1.0, 1.0)))) < 1e-14);
}
