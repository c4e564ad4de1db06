#pragma once

// Model specifications and finite matrix representations of the four
// lattice families:
//
//   CP  semi-infinite chain, complex potential J e^{i theta} on site 1
//   CC  semi-infinite chain, complex dimer hopping -J kappa on bond (1,2)
//   H1  finite PT chain, J e^{i theta} on site 1 and J e^{-i theta*} on site N
//   H2  finite PT chain, -J kappa on bond (1,2) and +J kappa* on bond (N-1,N)
//
// Semi-infinite families are hard-truncated at site N with an open end.
// Sites are numbered 1..N; row/column j-1 of a matrix holds site j.

#include <complex>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace nhl {

using cplx = std::complex<double>;

enum class Family { CP, CC, H1, H2 };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

// CP/H1 are parameterised by a phase theta, CC/H2 by a hopping ratio kappa.
constexpr bool uses_theta(Family family) {
  return family == Family::CP || family == Family::H1;
}
constexpr bool is_pt_family(Family family) {
  return family == Family::H1 || family == Family::H2;
}

class ModelSpec {
 public:
  static constexpr int kMinSites = 4;

  // Throws InvalidArgument on N < 4, J <= 0 or a non-finite parameter.
  ModelSpec(Family family, cplx param, int sites, double hopping = 1.0);

  static ModelSpec cp(cplx theta, int sites, double hopping = 1.0) {
    return {Family::CP, theta, sites, hopping};
  }
  static ModelSpec cc(cplx kappa, int sites, double hopping = 1.0) {
    return {Family::CC, kappa, sites, hopping};
  }
  static ModelSpec h1(cplx theta, int sites, double hopping = 1.0) {
    return {Family::H1, theta, sites, hopping};
  }
  static ModelSpec h2(cplx kappa, int sites, double hopping = 1.0) {
    return {Family::H2, kappa, sites, hopping};
  }

  Family family() const noexcept { return family_; }
  // theta for CP/H1, kappa for CC/H2.
  cplx param() const noexcept { return param_; }
  std::optional<cplx> theta() const;
  std::optional<cplx> kappa() const;
  double hopping() const noexcept { return hopping_; }
  int sites() const noexcept { return sites_; }

  ModelSpec with_param(cplx param) const { return {family_, param, sites_, hopping_}; }
  ModelSpec with_sites(int sites) const { return {family_, param_, sites, hopping_}; }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  Family family_;
  cplx param_;
  int sites_;
  double hopping_;
};

// {"family":"h1","theta":{"re":..,"im":..},"J":1.0,"N":20}; the parameter key
// must match the family ("theta" for cp/h1, "kappa" for cc/h2).
void to_json(nlohmann::json& j, const ModelSpec& spec);
void from_json(const nlohmann::json& j, ModelSpec& spec);
ModelSpec model_from_json(const nlohmann::json& j);

// Complex amplitudes over sites 1..N at a given time (units of 1/J).
struct State {
  Eigen::VectorXcd amplitudes;
  double time = 0.0;

  int sites() const noexcept { return static_cast<int>(amplitudes.size()); }
  // Site j in 1..N.
  cplx at(int site) const { return amplitudes(site - 1); }
  double norm2() const { return amplitudes.squaredNorm(); }
};

class HamiltonianMatrix {
 public:
  HamiltonianMatrix(ModelSpec spec, Eigen::MatrixXcd dense);

  int dimension() const noexcept { return static_cast<int>(dense_.rows()); }
  const Eigen::MatrixXcd& dense() const noexcept { return dense_; }
  const ModelSpec& spec() const noexcept { return spec_; }
  // Entry between sites i and j (1-based).
  cplx at(int i, int j) const { return dense_(i - 1, j - 1); }

  // Bands of the tridiagonal structure: sub(j) = H(j+1, j), super(j) = H(j, j+1).
  const Eigen::VectorXcd& diagonal() const noexcept { return diag_; }
  const Eigen::VectorXcd& subdiagonal() const noexcept { return sub_; }
  const Eigen::VectorXcd& superdiagonal() const noexcept { return super_; }
  bool is_tridiagonal() const noexcept { return tridiagonal_; }

 private:
  ModelSpec spec_;
  Eigen::MatrixXcd dense_;
  Eigen::VectorXcd diag_, sub_, super_;
  bool tridiagonal_ = false;
};

HamiltonianMatrix build_model(const ModelSpec& spec);

enum class MatvecPath { Auto, Dense, Banded };

// out_j = sum_i H_{ji} s_i. The banded path visits the same non-zero terms in
// the same order as the dense loop, so both paths agree bit for bit.
State apply_hamiltonian(const HamiltonianMatrix& h, const State& s,
                        MatvecPath path = MatvecPath::Auto);
void apply_hamiltonian(const HamiltonianMatrix& h, std::span<const cplx> in,
                       std::span<cplx> out, MatvecPath path = MatvecPath::Auto);

// Sign pattern g of the generalized parity P' = diag(g) P, with
// P: site j -> N+1-j, under which H1/H2 satisfy P' conj(H) P' = H.
// H1 needs no signs. H2 as written carries -J kappa on the left dimer and
// +J kappa* on the right one, so the end sites pick up a factor -1.
Eigen::VectorXd pt_parity_signs(const ModelSpec& spec);

// P' conj(H) P' as a dense matrix (equals H for H1/H2).
Eigen::MatrixXcd pt_transform(const HamiltonianMatrix& h);

// (P' T v)_j = g_j conj(v_{N+1-j}).
Eigen::VectorXcd pt_apply(const Eigen::VectorXd& signs, const Eigen::VectorXcd& v);

}  // namespace nhl
