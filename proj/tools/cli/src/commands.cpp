#include "nhl_cli/commands.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nhl/analytic.hpp"
#include "nhl/dynamics.hpp"
#include "nhl/errors.hpp"
#include "nhl/lattice.hpp"
#include "nhl/spectra.hpp"
#include "nhl_cli/contour.hpp"
#include "nhl_cli/parallel.hpp"
#include "nhl_cli/svg.hpp"

namespace nhl::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

class Writer {
 public:
  Writer(const RunConfig& cfg, const RunOptions& opts) : meta_(output_meta(cfg)), opts_(opts) {
    fs::create_directories(opts.out_dir);
  }

  const json& meta() const { return meta_; }

  void json_file(const std::string& name, json body) {
    json doc = {{"meta", meta_}};
    for (auto& [k, v] : body.items()) doc[k] = std::move(v);
    put(name, dump_json(doc));
  }

  void table(const std::string& stem, const Table& t) {
    put(stem + std::string(extension(opts_.format)), render_table(t, meta_, opts_.format));
  }

  void svg(const std::string& name, const std::string& text) { put(name, text); }

  std::vector<fs::path> written;

 private:
  void put(const std::string& name, const std::string& content) {
    const fs::path p = opts_.out_dir / name;
    write_file(p, content);
    written.push_back(p);
  }

  json meta_;
  const RunOptions& opts_;
};

State initial_state(const json& init, int sites) {
  if (init.at("type") == "delta") {
    const int site = init.at("site").get<int>();
    if (site > sites) throw InvalidArgument("initial.site exceeds the lattice size");
    State s{Eigen::VectorXcd::Zero(sites), 0.0};
    s.amplitudes(site - 1) = 1.0;
    return s;
  }
  return gaussian_wavepacket(
      {init.at("k0").get<double>(), init.at("center").get<double>(), init.at("alpha").get<double>()},
      sites);
}

Propagator propagator(const json& p) {
  return p.value("method", std::string("rk4")) == "eigen" ? Propagator::Eigen : Propagator::Rk4;
}

std::vector<double> snapshot_times(const json& p) {
  return p.value("snapshots", std::vector<double>{});
}

// Rows (t, j, re, im, abs2) for every snapshot in time order.
Table trajectory_table(const std::vector<State>& states) {
  Table t{{"t", "j", "re", "im", "abs2"}, {}};
  for (const auto& s : states)
    for (int j = 1; j <= s.sites(); ++j) {
      const cplx a = s.at(j);
      t.rows.push_back({s.time, j, a.real(), a.imag(), std::norm(a)});
    }
  return t;
}

Table norms_table(const std::vector<State>& states) {
  Table t{{"t", "norm"}, {}};
  for (const auto& s : states) t.rows.push_back({s.time, s.norm2()});
  return t;
}

std::string profiles_svg(const std::vector<State>& states, const std::string& title) {
  std::vector<Series> series;
  for (std::size_t i = 0; i < states.size(); ++i) {
    Series s;
    s.label = "t = " + fmt_double(states[i].time);
    s.color = kPalette[i % std::size(kPalette)];
    for (int j = 1; j <= states[i].sites(); ++j) {
      s.x.push_back(j);
      s.y.push_back(std::norm(states[i].at(j)));
    }
    series.push_back(std::move(s));
  }
  return render_line_plot(series, {title, "site j", "|psi_j|^2", 800, 480});
}

json summary(std::optional<double> reflection, std::optional<double> k_est,
             std::optional<double> omega_est, std::optional<double> phase_velocity,
             double norm_initial, double norm_final) {
  auto opt = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
  return {{"reflection", opt(reflection)},   {"k_est", opt(k_est)},
          {"omega_est", opt(omega_est)},     {"phase_velocity", opt(phase_velocity)},
          {"norm_initial", norm_initial},    {"norm_final", norm_final}};
}

void cmd_spectrum(const RunConfig& cfg, Writer& w) {
  const double im_tol = cfg.params.value("im_tol", 1e-8);
  const std::string which = cfg.params.value("eigenvectors", std::string("complex"));
  const EigenSystem es = eigendecompose(build_model(cfg.model));
  const SpectrumClass cls = classify_levels(es, im_tol);

  json levels = json::array();
  for (int m = 0; m < es.size(); ++m) {
    levels.push_back({{"index", m},
                      {"re", es.values(m).real()},
                      {"im", es.values(m).imag()},
                      {"residual", es.residuals(m)},
                      {"ipr", ipr(es.vector(m))}});
  }
  json pairs = json::array();
  for (const auto& p : cls.pairs)
    pairs.push_back({{"upper", p.upper},
                     {"lower", p.lower},
                     {"energy", complex_json(es.values(p.upper))},
                     {"mismatch", p.mismatch}});
  w.json_file("spectrum.json", {{"n_real", cls.n_real},
                                {"n_complex", cls.n_complex},
                                {"im_tol", im_tol},
                                {"pairs", pairs},
                                {"unmatched", cls.unmatched},
                                {"levels", levels}});

  for (int m = 0; m < es.size(); ++m) {
    const bool complex_level = std::abs(es.values(m).imag()) > im_tol;
    if (which == "none" || (which == "complex" && !complex_level)) continue;
    Table t{{"j", "re", "im", "abs2"}, {}};
    const Eigen::VectorXcd v = es.vector(m);
    for (int j = 0; j < v.size(); ++j)
      t.rows.push_back({j + 1, v(j).real(), v(j).imag(), std::norm(v(j))});
    w.table("eigvec_" + std::to_string(m), t);
  }
}

struct ScanPoint {
  double indicator = 0.0;
  Region region = Region::Boundary;
  int n_complex = -1;
};

void cmd_phase_scan(const RunConfig& cfg, const RunOptions& opts, Writer& w) {
  const json& re = cfg.params.at("re");
  const json& im = cfg.params.at("im");
  const bool finite = cfg.params.value("finite_count", true);
  const double im_tol = cfg.params.value("im_tol", 1e-4);

  Grid g{re.at("min").get<double>(), re.at("max").get<double>(), im.at("min").get<double>(),
         im.at("max").get<double>(),  re.at("n").get<int>(),      im.at("n").get<int>(), {}};
  const std::size_t n = static_cast<std::size_t>(g.nx) * g.ny;
  std::vector<ScanPoint> pts(n);
  parallel_for(n, opts.threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx % g.nx), j = static_cast<int>(idx / g.nx);
    const ModelSpec spec = cfg.model.with_param({g.x(i), g.y(j)});
    const PhaseReport rep = phase_classify(spec);
    pts[idx].indicator = rep.indicator;
    pts[idx].region = rep.region;
    if (finite) pts[idx].n_complex = classify_levels(eigenvalues(build_model(spec)), im_tol).n_complex;
  });

  // Contour the broken-side indicator so that "inside" means broken.
  const bool cp_like = uses_theta(cfg.model.family());
  g.z.resize(n);
  for (std::size_t k = 0; k < n; ++k) g.z[k] = cp_like ? -pts[k].indicator : pts[k].indicator;

  Table t{{"re_param", "im_param", "indicator", "region", "n_complex_finite_N"}, {}};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const ScanPoint& p = pts[static_cast<std::size_t>(j) * g.nx + i];
      t.rows.push_back({g.x(i), g.y(j), p.indicator, std::string(to_string(p.region)),
                        finite ? json(p.n_complex) : json(nullptr)});
    }
  w.table("phase", t);

  const auto lines = zero_contours(g);
  json polylines = json::array();
  std::vector<Series> overlays;
  for (const auto& line : lines) {
    json pl = json::array();
    Series s{"", {}, {}, "#000000", false};
    for (const auto& p : line) {
      pl.push_back({p.x, p.y});
      s.x.push_back(p.x);
      s.y.push_back(p.y);
    }
    polylines.push_back(std::move(pl));
    overlays.push_back(std::move(s));
  }
  if (!overlays.empty()) overlays.front().label = "boundary";
  const PhaseReport kind = phase_classify(cfg.model);
  w.json_file("boundary.json", {{"boundary_kind", std::string(to_string(kind.boundary_kind))},
                                {"polylines", polylines}});

  const std::string p = cp_like ? "theta" : "kappa";
  w.svg("phase.svg", render_heatmap(g, overlays,
                                    {"phase diagram (" + std::string(to_string(cfg.model.family())) +
                                         "), red = broken",
                                     "Re " + p, "Im " + p, 640, 560}));
}

void cmd_ep_find(const RunConfig& cfg, Writer& w) {
  const Family fam = cfg.model.family();
  if (fam != Family::H1 && fam != Family::H2)
    throw InvalidArgument("ep-find needs a finite chain family (h1 or h2)");
  const ParameterLine line = fam == Family::H1 ? ParameterLine::theta_real()
                                               : ParameterLine::kappa_ray(cfg.params.value("phase", 0.0));
  EpSearchOptions o;
  o.tol = cfg.params.value("tol", o.tol);
  o.max_iterations = cfg.params.value("max_iterations", o.max_iterations);
  const FiniteEp ep = find_exceptional_point(fam, cfg.model.sites(), line,
                                             cfg.params.at("k_start").get<double>(),
                                             cfg.params.at("t_start").get<double>(), o);
  w.json_file("ep.json", {{"line", line.name},
                          {"k_c", ep.k_c},
                          {"t_c", ep.t_c},
                          {"param_c", complex_json(ep.param_c)},
                          {"energy", -2.0 * cfg.model.hopping() * std::cos(ep.k_c)},
                          {"residual", ep.residual},
                          {"iterations", ep.iterations}});
}

void write_dynamics(Writer& w, const std::vector<State>& states, const json& summ,
                    const std::string& title) {
  w.table("trajectory", trajectory_table(states));
  w.table("norms", norms_table(states));
  w.json_file("summary.json", summ);
  w.svg("profiles.svg", profiles_svg(states, title));
}

void cmd_evolve(const RunConfig& cfg, Writer& w) {
  const HamiltonianMatrix h = build_model(cfg.model);
  const State init = initial_state(cfg.params.at("initial"), cfg.model.sites());
  const double t_final = cfg.params.at("t_final").get<double>();
  PropagateOptions o;
  o.method = propagator(cfg.params);
  o.dt = cfg.params.value("dt", o.dt);
  o.snapshot_times = snapshot_times(cfg.params);
  if (o.snapshot_times.empty())
    for (int i = 1; i < 10; ++i) o.snapshot_times.push_back(t_final * i / 10.0);
  std::vector<State> states{init};
  for (auto& s : propagate(h, init, t_final, o))
    if (s.time > 0.0) states.push_back(std::move(s));
  write_dynamics(w, states,
                 summary(std::nullopt, std::nullopt, std::nullopt, std::nullopt, init.norm2(),
                         states.back().norm2()),
                 "evolution");
}

void cmd_reflect(const RunConfig& cfg, Writer& w) {
  const json& pk = cfg.params.at("packet");
  const WavepacketSpec packet{pk.at("k0").get<double>(), pk.at("center").get<double>(),
                              pk.at("alpha").get<double>()};
  ReflectionOptions o;
  o.method = propagator(cfg.params);
  o.dt = cfg.params.value("dt", o.dt);
  if (cfg.params.contains("duration")) o.duration = cfg.params["duration"].get<double>();
  o.snapshot_times = snapshot_times(cfg.params);
  const ReflectionReport r = measure_reflection(cfg.model, packet, o);
  json summ = summary(r.reflection, r.k_out, std::nullopt, std::nullopt, r.norm_initial, r.norm_final);
  summ["predicted_reflection"] = predicted_reflection(cfg.model, packet.k0);
  summ["duration"] = r.duration;
  summ["tail_norm"] = r.tail_norm;
  summ["clipped"] = r.clipped;
  write_dynamics(w, r.snapshots, summ, "reflection");
}

void cmd_emit(const RunConfig& cfg, Writer& w) {
  const State init = initial_state(cfg.params.at("initial"), cfg.model.sites());
  EmissionWindows win;
  win.t_start = cfg.params.value("t_start", win.t_start);
  win.t_end = cfg.params.value("t_end", win.t_end);
  PropagateOptions o;
  o.dt = cfg.params.value("dt", o.dt);
  const EmissionReport e = measure_emission(cfg.model, init, win, o);
  json summ = summary(std::nullopt, e.k_est, e.omega_est, e.phase_velocity, init.norm2(),
                      e.snapshots.back().norm2());
  summ["amplitude_drift"] = e.amplitude_drift;
  summ["correlation"] = e.correlation;
  summ["window"] = {e.window.first, e.window.last};
  summ["front_site"] = e.front_site;
  write_dynamics(w, e.snapshots, summ, "emission");
}

void cmd_currents(const RunConfig& cfg, Writer& w) {
  const int probe = cfg.params.at("j_probe").get<int>();
  if (probe >= cfg.model.sites()) throw InvalidArgument("j_probe must be below N");
  const EigenSystem es = eigendecompose(build_model(cfg.model));
  const auto cur = eigenstate_currents(es, probe, cfg.model.hopping());
  Table t{{"index", "re_E", "im_E", "current"}, {}};
  Series s{"J(k) at site " + std::to_string(probe), {}, {}, kPalette[0], true};
  for (std::size_t m = 0; m < cur.size(); ++m) {
    t.rows.push_back({m, cur[m].energy.real(), cur[m].energy.imag(), cur[m].current});
    s.x.push_back(cur[m].energy.real());
    s.y.push_back(cur[m].current);
  }
  w.table("currents", t);
  w.svg("currents.svg", render_line_plot({s}, {"eigenstate currents", "Re E", "current", 640, 480}));
}

}  // namespace

json output_meta(const RunConfig& cfg) {
  return {{"tool", "nhlattice"}, {"version", NHL_VERSION}, {"config", cfg.source}};
}

std::vector<fs::path> run_command(const RunConfig& cfg, const RunOptions& opts) {
  Writer w(cfg, opts);
  switch (cfg.command) {
    case Command::Spectrum: cmd_spectrum(cfg, w); break;
    case Command::PhaseScan: cmd_phase_scan(cfg, opts, w); break;
    case Command::EpFind: cmd_ep_find(cfg, w); break;
    case Command::Evolve: cmd_evolve(cfg, w); break;
    case Command::Reflect: cmd_reflect(cfg, w); break;
    case Command::Emit: cmd_emit(cfg, w); break;
    case Command::Currents: cmd_currents(cfg, w); break;
  }
  return w.written;
}

}  // namespace nhl::cli
