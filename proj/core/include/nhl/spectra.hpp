#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nhl/lattice.hpp"

namespace nhl {

// Right eigenpairs of a (generally non-Hermitian) Hamiltonian. Values are
// sorted lexicographically on (Re, Im); column m of `vectors` has unit
// Euclidean norm and belongs to values(m).
struct EigenSystem {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd residuals;  // ||H v - E v|| per pair
  double hopping = 1.0;       // energy scale J of the source model

  int size() const noexcept { return static_cast<int>(values.size()); }
  Eigen::VectorXcd vector(int m) const { return vectors.col(m); }
};

struct EigenOptions {
  // Residual contract, relative to ||H||_F.
  double residual_tol = 1e-10;
};

// Hessenberg reduction + shifted QR (complex Schur form). Throws
// NumericalError carrying the worst residual if the contract is not met.
EigenSystem eigendecompose(const HamiltonianMatrix& h, const EigenOptions& opts = {});

// Eigenvalues only, sorted like eigendecompose. For PT-structured matrices
// (H1/H2) the unitary map U = (1 + i P')/sqrt(2) turns H into a real matrix
// U^dagger H U, which is diagonalized in real arithmetic; complex levels then
// come out as exact conjugate pairs.
Eigen::VectorXcd eigenvalues(const HamiltonianMatrix& h);

// Real-form matrix U^dagger H U for a PT-structured H. Throws
// InvalidArgument if H is not invariant under its generalized parity.
Eigen::MatrixXd pt_real_form(const HamiltonianMatrix& h);

void sort_levels(Eigen::VectorXcd& values);

struct ConjugatePair {
  int upper;  // index of the level with Im E > 0
  int lower;  // index of its partner with Im E < 0
  double mismatch;  // |E_upper - conj(E_lower)|
};

struct SpectrumClass {
  int n_real = 0;
  int n_complex = 0;
  std::vector<ConjugatePair> pairs;
  std::vector<int> unmatched;  // complex levels with no partner within 100 im_tol
};

// A level counts as complex iff |Im E| > im_tol * J.
SpectrumClass classify_levels(const Eigen::VectorXcd& values, double im_tol = 1e-8,
                              double hopping = 1.0);
SpectrumClass classify_levels(const EigenSystem& es, double im_tol = 1e-8);

enum class LeadKind { SS, MD, OD };
std::string_view to_string(LeadKind kind);

// f(j) = A z^j + B z^{-j} on a lead window, with z = exp(i k + beta).
// A and B are referenced to the first site of the window (j counted from 0
// there) so that the fit stays finite for strongly decaying waves.
struct LeadWaveClass {
  LeadKind kind = LeadKind::SS;
  double k = 0.0;     // in [0, 2 pi)
  double beta = 0.0;  // <= 0
  cplx a{}, b{};
  double fit_residual = 0.0;  // ||f - fit|| / ||f|| over the window
};

struct SiteRange {
  int first;  // 1-based, inclusive
  int last;   // 1-based, inclusive
  int size() const noexcept { return last - first + 1; }
};

struct LeadFitOptions {
  double beta_tol = 1e-6;
  double k_tol = 1e-6;
};

// Order-2 linear prediction on the lead recurrence f(j+2) + f(j) = c f(j+1),
// roots z and 1/z of z^2 - c z + 1. The root with |z| <= 1 is taken (for
// |z| = 1 the one carrying the larger amplitude), then A, B by least squares.
LeadWaveClass fit_lead_wave(std::span<const cplx> v, SiteRange window,
                            const LeadFitOptions& opts = {});
LeadWaveClass fit_lead_wave(const Eigen::VectorXcd& v, SiteRange window,
                            const LeadFitOptions& opts = {});

// Inverse participation ratio sum |v|^4 / (sum |v|^2)^2.
double ipr(std::span<const cplx> v);
double ipr(const Eigen::VectorXcd& v);

}  // namespace nhl
