#include "nhl/lattice.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "nhl/errors.hpp"

namespace nhl {

namespace {

constexpr cplx kI{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

cplx complex_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im") || j.size() != 2)
    throw InvalidArgument(std::string("model.") + key + " must be {\"re\":..,\"im\":..}");
  if (!j["re"].is_number() || !j["im"].is_number())
    throw InvalidArgument(std::string("model.") + key + " components must be numbers");
  return {j["re"].get<double>(), j["im"].get<double>()};
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::CP: return "cp";
    case Family::CC: return "cc";
    case Family::H1: return "h1";
    case Family::H2: return "h2";
  }
  return "?";
}

Family family_from_string(std::string_view name) {
  if (name == "cp") return Family::CP;
  if (name == "cc") return Family::CC;
  if (name == "h1") return Family::H1;
  if (name == "h2") return Family::H2;
  throw InvalidArgument("unknown lattice family '" + std::string(name) + "'");
}

ModelSpec::ModelSpec(Family family, cplx param, int sites, double hopping)
    : family_(family), param_(param), sites_(sites), hopping_(hopping) {
  if (sites < kMinSites)
    throw InvalidArgument("site count N=" + std::to_string(sites) + " is below the minimum of 4");
  if (!(hopping > 0.0) || !std::isfinite(hopping))
    throw InvalidArgument("hopping J must be a positive finite number");
  if (!finite(param)) throw InvalidArgument("model parameter must be finite");
}

std::optional<cplx> ModelSpec::theta() const {
  if (uses_theta(family_)) return param_;
  return std::nullopt;
}

std::optional<cplx> ModelSpec::kappa() const {
  if (!uses_theta(family_)) return param_;
  return std::nullopt;
}

void to_json(nlohmann::json& j, const ModelSpec& spec) {
  j = nlohmann::json::object();
  j["family"] = std::string(to_string(spec.family()));
  j[uses_theta(spec.family()) ? "theta" : "kappa"] = {{"re", spec.param().real()},
                                                      {"im", spec.param().imag()}};
  j["J"] = spec.hopping();
  j["N"] = spec.sites();
}

ModelSpec model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("model must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "theta" && key != "kappa" && key != "J" && key != "N")
      throw InvalidArgument("unknown model key '" + key + "'");
  }
  if (!j.contains("family") || !j["family"].is_string())
    throw InvalidArgument("model.family is required");
  const Family family = family_from_string(j["family"].get<std::string>());
  const char* want = uses_theta(family) ? "theta" : "kappa";
  const char* other = uses_theta(family) ? "kappa" : "theta";
  if (j.contains(other))
    throw InvalidArgument(std::string("model.") + other + " is not a parameter of family " +
                          std::string(to_string(family)));
  if (!j.contains(want)) throw InvalidArgument(std::string("model.") + want + " is required");
  const cplx param = complex_from_json(j[want], want);
  double hopping = 1.0;
  if (j.contains("J")) {
    if (!j["J"].is_number()) throw InvalidArgument("model.J must be a number");
    hopping = j["J"].get<double>();
  }
  if (!j.contains("N") || !j["N"].is_number_integer())
    throw InvalidArgument("model.N must be an integer");
  return ModelSpec(family, param, j["N"].get<int>(), hopping);
}

void from_json(const nlohmann::json& j, ModelSpec& spec) { spec = model_from_json(j); }

HamiltonianMatrix::HamiltonianMatrix(ModelSpec spec, Eigen::MatrixXcd dense)
    : spec_(std::move(spec)), dense_(std::move(dense)) {
  const Eigen::Index n = dense_.rows();
  if (dense_.cols() != n) throw InvalidArgument("Hamiltonian must be square");
  diag_ = dense_.diagonal();
  sub_ = dense_.diagonal(-1);
  super_ = dense_.diagonal(1);
  tridiagonal_ = true;
  for (Eigen::Index c = 0; c < n && tridiagonal_; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      if ((r > c + 1 || c > r + 1) && dense_(r, c) != cplx{}) {
        tridiagonal_ = false;
        break;
      }
}

HamiltonianMatrix build_model(const ModelSpec& spec) {
  const int n = spec.sites();
  const double J = spec.hopping();
  const cplx p = spec.param();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r + 1 < n; ++r) {
    h(r, r + 1) = -J;
    h(r + 1, r) = -J;
  }
  switch (spec.family()) {
    case Family::H1:
      h(n - 1, n - 1) = J * std::exp(-kI * std::conj(p));
      [[fallthrough]];
    case Family::CP:
      h(0, 0) = J * std::exp(kI * p);
      break;
    case Family::H2:
      h(n - 2, n - 1) = J * std::conj(p);
      h(n - 1, n - 2) = J * std::conj(p);
      [[fallthrough]];
    case Family::CC:
      h(0, 1) = -J * p;
      h(1, 0) = -J * p;
      break;
  }
  return HamiltonianMatrix(spec, std::move(h));
}

void apply_hamiltonian(const HamiltonianMatrix& h, std::span<const cplx> in, std::span<cplx> out,
                       MatvecPath path) {
  const int n = h.dimension();
  if (static_cast<int>(in.size()) != n || static_cast<int>(out.size()) != n)
    throw InvalidArgument("state dimension " + std::to_string(in.size()) +
                          " does not match Hamiltonian dimension " + std::to_string(n));
  if (path == MatvecPath::Auto) path = h.is_tridiagonal() ? MatvecPath::Banded : MatvecPath::Dense;
  if (path == MatvecPath::Banded && !h.is_tridiagonal())
    throw InvalidArgument("banded matvec requested for a non-tridiagonal matrix");

  if (path == MatvecPath::Dense) {
    const auto& a = h.dense();
    for (int r = 0; r < n; ++r) {
      cplx acc{};
      for (int c = 0; c < n; ++c)
        if (a(r, c) != cplx{}) acc += a(r, c) * in[c];
      out[r] = acc;
    }
    return;
  }

  const auto& d = h.diagonal();
  const auto& lo = h.subdiagonal();
  const auto& up = h.superdiagonal();
  for (int r = 0; r < n; ++r) {
    cplx acc{};
    if (r > 0 && lo(r - 1) != cplx{}) acc += lo(r - 1) * in[r - 1];
    if (d(r) != cplx{}) acc += d(r) * in[r];
    if (r + 1 < n && up(r) != cplx{}) acc += up(r) * in[r + 1];
    out[r] = acc;
  }
}

State apply_hamiltonian(const HamiltonianMatrix& h, const State& s, MatvecPath path) {
  State out{Eigen::VectorXcd(s.amplitudes.size()), s.time};
  apply_hamiltonian(h, std::span<const cplx>(s.amplitudes.data(), s.amplitudes.size()),
                    std::span<cplx>(out.amplitudes.data(), out.amplitudes.size()), path);
  return out;
}

Eigen::VectorXd pt_parity_signs(const ModelSpec& spec) {
  const int n = spec.sites();
  Eigen::VectorXd g = Eigen::VectorXd::Ones(n);
  if (spec.family() == Family::H2) {
    g(0) = -1.0;
    g(n - 1) = -1.0;
  }
  return g;
}

Eigen::MatrixXcd pt_transform(const HamiltonianMatrix& h) {
  const int n = h.dimension();
  const Eigen::VectorXd g = pt_parity_signs(h.spec());
  Eigen::MatrixXcd out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      out(r, c) = g(r) * g(c) * std::conj(h.dense()(n - 1 - r, n - 1 - c));
  return out;
}

Eigen::VectorXcd pt_apply(const Eigen::VectorXd& signs, const Eigen::VectorXcd& v) {
  const Eigen::Index n = v.size();
  if (signs.size() != n) throw InvalidArgument("parity sign pattern has the wrong length");
  Eigen::VectorXcd out(n);
  for (Eigen::Index j = 0; j < n; ++j) out(j) = signs(j) * std::conj(v(n - 1 - j));
  return out;
}

}  // namespace nhl
