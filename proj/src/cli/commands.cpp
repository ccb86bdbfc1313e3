#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>

#include "ndde/crystal.hpp"
#include "ndde/delay_core.hpp"
#include "ndde/farfield.hpp"
#include "ndde/io.hpp"
#include "ndde/lightcone.hpp"
#include "ndde/sewing.hpp"
#include "ndde/slit_model.hpp"
#include "ndde/trajectory.hpp"

namespace ndde::cli {

namespace {

using Executor = std::function<int(const json&, std::ostream&, std::ostream&)>;

Command& add_command(CLI::App& parent, std::vector<std::unique_ptr<Command>>& commands, const std::string& name,
                     const std::string& description) {
  auto cmd = std::make_unique<Command>();
  cmd->app = parent.add_subcommand(name, description);
  cmd->options = std::make_unique<ConfigOptions>(cmd->app);
  commands.push_back(std::move(cmd));
  return *commands.back();
}

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("'" + key + "' must be positive");
}

void write_failure(std::ostream& os, const std::string& what, double last_good_time) {
  json rec = {{"error", what}};
  if (std::isfinite(last_good_time)) rec["last_good_time"] = last_good_time;
  os << "# failure: " << rec.dump() << '\n';
  os.flush();
}

PiecewiseTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file " + path);
  json j;
  try {
    in >> j;
    return trajectory_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("bad trajectory file " + path + ": " + e.what());
  }
}

// ---- ndde ----

void add_ndde(CLI::App& root, std::vector<std::unique_ptr<Command>>& commands) {
  Command& c = add_command(root, commands, "ndde",
                           "Scalar delay equation by the method of steps.\n"
                           "retarded: y'(t) = a y(t-tau) + b y(t) + c\n"
                           "neutral:  y'(t) = a y'(t-tau) + b y(t-tau) + c y(t)\n"
                           "history:  y(t) = h0 + h1 t on [-tau, 0]");
  auto& o = *c.options;
  o.add("kind", ValueKind::text, "retarded", "retarded | neutral");
  o.add_optional("a", ValueKind::number, "coefficient a (default: -1 retarded, 0.5 neutral)");
  o.add("b", ValueKind::number, 0.0, "coefficient b");
  o.add("c", ValueKind::number, 0.0, "coefficient c");
  o.add_optional("h0", ValueKind::number, "history value at t=0 (default: 1 retarded, 0 neutral)");
  o.add_optional("h1", ValueKind::number, "history slope (default: 0 retarded, 1 neutral)");
  o.add("delay", ValueKind::number, 1.0, "delay tau");
  o.add("horizon", ValueKind::number, 3.0, "integration horizon");
  o.add("steps_per_delay", ValueKind::integer, 200, "RK4 steps per delay interval");
  o.add("sample_every", ValueKind::integer, 1, "write every k-th node");
  o.add("out", ValueKind::text, "-", "output CSV path, - for stdout");

  c.execute = [](json cfg, std::ostream& out, std::ostream& err) -> int {
    const std::string kind = get_text(cfg, "kind");
    const bool neutral = kind == "neutral";
    if (!neutral && kind != "retarded") throw ConfigError("'kind' must be retarded or neutral");
    if (cfg["a"].is_null()) cfg["a"] = neutral ? 0.5 : -1.0;
    if (cfg["h0"].is_null()) cfg["h0"] = neutral ? 0.0 : 1.0;
    if (cfg["h1"].is_null()) cfg["h1"] = neutral ? 1.0 : 0.0;
    const double a = get_number(cfg, "a"), b = get_number(cfg, "b"), cc = get_number(cfg, "c");
    const double delay = get_number(cfg, "delay"), horizon = get_number(cfg, "horizon");
    require_positive(delay, "delay");
    require_positive(horizon, "horizon");
    const long long spd = get_int(cfg, "steps_per_delay");
    const long long every = get_int(cfg, "sample_every");
    if (spd < 1 || spd > 1000000) throw ConfigError("'steps_per_delay' must be in [1, 1e6]");
    if (every < 1) throw ConfigError("'sample_every' must be >= 1");
    if (horizon / delay * static_cast<double>(spd) > 5e7) throw ConfigError("too many steps requested");

    ScalarDelayProblem p;
    p.delay = delay;
    p.horizon = horizon;
    p.steps_per_delay = static_cast<int>(spd);
    p.history = HistoryFunction::affine(get_number(cfg, "h0"), get_number(cfg, "h1"), -delay);
    if (neutral)
      p.rhs = DelayRhs::neutral([a, b, cc](auto y, auto yd, auto ydotd) { return a * ydotd + b * yd + cc * y; });
    else
      p.rhs = DelayRhs::retarded([a, b, cc](auto y, auto yd) { return a * yd + b * y + cc; });

    OutputSink sink(get_text(cfg, "out"), out);
    std::ostream& os = sink.stream();
    auto emit = [&](const ScalarSolution& s, std::size_t last) {
      json meta = metadata("ndde", cfg);
      json bps = json::array();
      for (const BreakingPoint& bp : s.breaking_points()) {
        json jumps = json::array();
        for (int k = 1; k <= kSmoothOrder; ++k) jumps.push_back(bp.jump(k));
        bps.push_back({{"t", bp.t}, {"n", bp.index}, {"jumps", jumps}});
      }
      meta["breaking_points"] = bps;
      write_csv_header(os, meta, {"t", "y", "ydot_left", "ydot_right"});
      for (std::size_t i = 0; i <= last; ++i) {
        if (i % static_cast<std::size_t>(every) != 0 && i != last) continue;
        write_csv_row(os, {s.node_time(i), s.node_value(i), s.node_slope(i, Side::left), s.node_slope(i, Side::right)});
      }
    };
    try {
      const ScalarSolution s = solve(p);
      emit(s, s.step_count());
    } catch (const DelayIntegrationError& e) {
      if (e.partial() && e.partial()->step_count() > 0) emit(*e.partial(), e.partial()->step_count());
      write_failure(os, e.what(), e.last_good_time());
      err << "numerical failure: " << e.what() << '\n';
      return kExitNumerical;
    }
    sink.flush();
    return kExitOk;
  };
}

// ---- lightcone ----

void add_lightcone(CLI::App& root, std::vector<std::unique_ptr<Command>>& commands) {
  Command& c = add_command(root, commands, "lightcone",
                           "Retarded and advanced lightcone times of a source seen from (x, t).\n"
                           "The source is a trajectory JSON file or a uniform motion x0 + v t.");
  auto& o = *c.options;
  o.add("trajectory", ValueKind::text, "", "trajectory JSON file (overrides x0/v)");
  o.add("x0", ValueKind::vector, json::array({0.0, 0.0, 0.0}), "source position at t=0");
  o.add("v", ValueKind::vector, json::array({0.5, 0.0, 0.0}), "source velocity");
  o.add("t_span", ValueKind::number, 1000.0, "uniform source defined on [-t_span, t_span]");
  o.add("x", ValueKind::vector, json::array({0.0, 0.0, 0.0}), "observation point");
  o.add("t", ValueKind::number, 1.5, "observation time");
  o.add("out", ValueKind::text, "-", "output JSON path, - for stdout");

  c.execute = [](const json& cfg, std::ostream& out, std::ostream&) -> int {
    const std::string path = get_text(cfg, "trajectory");
    std::optional<PiecewiseTrajectory> traj;
    if (!path.empty()) {
      traj = load_trajectory(path);
    } else {
      const double span = get_number(cfg, "t_span");
      require_positive(span, "t_span");
      const Vec3 v = get_vec(cfg, "v");
      if (!(norm(v) < 1.0)) throw ConfigError("'v' must be sub-luminal");
      traj = linear_trajectory(get_vec(cfg, "x0") - v * span, v, -span, span);
    }
    const Vec3 x = get_vec(cfg, "x");
    const double t = get_number(cfg, "t");
    json result = metadata("lightcone", cfg);
    for (Branch b : {Branch::retarded, Branch::advanced}) {
      const LightconeHit h = solve_lightcone(*traj, x, t, b);
      json entry = {{"t_dev", h.t_dev},
                    {"r", h.r},
                    {"n", to_json(h.n)},
                    {"position", to_json(h.position)},
                    {"velocity", to_json(h.v_dev)},
                    {"dtdev_dt", deviating_derivative(h, b, traj->v_max())},
                    {"on_breakpoint", h.on_breakpoint},
                    {"iterations", h.iterations},
                    {"residual", lightcone_residual(*traj, x, t, b, h)}};
      result[b == Branch::retarded ? "retarded" : "advanced"] = entry;
    }
    OutputSink sink(get_text(cfg, "out"), out);
    sink.stream() << result.dump(2) << '\n';
    sink.flush();
    return kExitOk;
  };
}

// ---- field-probe ----

void add_field_probe(CLI::App& root, std::vector<std::unique_ptr<Command>>& commands) {
  Command& c = add_command(root, commands, "field-probe",
                           "Advanced, retarded and semi-sum far fields of one source at a fixed point\n"
                           "over a time window. Built-in sources: circular, ping-pong, linear.");
  auto& o = *c.options;
  o.add("trajectory", ValueKind::text, "", "trajectory JSON file (overrides --source)");
  o.add("source", ValueKind::text, "circular", "circular | ping-pong | linear");
  o.add("radius", ValueKind::number, 0.5, "circular: radius; ping-pong: amplitude");
  o.add("speed", ValueKind::number, 0.5, "source speed");
  o.add("charge", ValueKind::number, -1.0, "source charge");
  o.add("t_span", ValueKind::number, 200.0, "built-in source defined on [-t_span, t_span]");
  o.add("x", ValueKind::vector, json::array({10.0, 0.0, 0.0}), "observation point");
  o.add("t0", ValueKind::number, 0.0, "first observation time");
  o.add("t1", ValueKind::number, 20.0, "last observation time");
  o.add("samples", ValueKind::integer, 201, "number of observation times");
  o.add("out", ValueKind::text, "-", "output CSV path, - for stdout");

  c.execute = [](const json& cfg, std::ostream& out, std::ostream& err) -> int {
    const std::string path = get_text(cfg, "trajectory");
    std::optional<PiecewiseTrajectory> src;
    if (!path.empty()) {
      src = load_trajectory(path);
    } else {
      const double span = get_number(cfg, "t_span"), radius = get_number(cfg, "radius");
      const double speed = get_number(cfg, "speed"), q = get_number(cfg, "charge");
      require_positive(span, "t_span");
      require_positive(speed, "speed");
      if (!(speed < kDefaultVmax)) throw ConfigError("'speed' must be below 0.99");
      const std::string kind = get_text(cfg, "source");
      if (kind == "circular") {
        require_positive(radius, "radius");
        src = circular_orbit({}, {1, 0, 0}, {0, 1, 0}, radius, speed / radius, -span, span, 64, 1.0, q);
      } else if (kind == "ping-pong") {
        require_positive(radius, "radius");
        src = ping_pong_orbit({}, {0, 1, 0}, radius, speed, -span, span, 1.0, q);
      } else if (kind == "linear") {
        src = linear_trajectory(Vec3{0, -speed * span, 0}, {0, speed, 0}, -span, span, 1.0, q);
      } else {
        throw ConfigError("'source' must be circular, ping-pong or linear");
      }
    }
    const Vec3 x = get_vec(cfg, "x");
    const double t0 = get_number(cfg, "t0"), t1 = get_number(cfg, "t1");
    const long long n = get_int(cfg, "samples");
    if (n < 1 || n > 10000000) throw ConfigError("'samples' must be in [1, 1e7]");
    if (!(t1 >= t0)) throw ConfigError("'t1' must not precede 't0'");

    OutputSink sink(get_text(cfg, "out"), out);
    std::ostream& os = sink.stream();
    std::vector<std::string> cols = {"t", "x", "y", "z"};
    for (const char* tag : {"adv", "ret", "sum"})
      for (const char* f : {"Ex", "Ey", "Ez", "Bx", "By", "Bz"}) cols.push_back(std::string(f) + "_" + tag);
    cols.push_back("flagged");
    write_csv_header(os, metadata("field-probe", cfg), cols);
    double last_good = std::nan("");
    for (long long i = 0; i < n; ++i) {
      const double t = n == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
      FieldSample s;
      try {
        s = semi_sum_fields(*src, x, t);
      } catch (const Error& e) {
        write_failure(os, e.what(), last_good);
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
      }
      std::vector<double> row = {t, x.x, x.y, x.z};
      for (const Vec3& v : {s.E_plus, s.B_plus, s.E_minus, s.B_minus, s.E, s.B}) row.insert(row.end(), {v.x, v.y, v.z});
      row.push_back(s.flagged ? 1.0 : 0.0);
      write_csv_row(os, row);
      last_good = t;
    }
    sink.flush();
    return kExitOk;
  };
}

// ---- sewing ----

void add_sewing(CLI::App& root, std::vector<std::unique_ptr<Command>>& commands) {
  Command& c = add_command(root, commands, "sewing",
                           "Chain of discontinuities hopping between two trajectories along lightcones.\n"
                           "static-pair: two charges at rest a distance r apart\n"
                           "approach:    a charge moving at speed v toward a charge at rest, from distance d0\n"
                           "central:     a charge moving along x stops midway between two sites a apart");
  auto& o = *c.options;
  o.add("geometry", ValueKind::text, "static-pair", "static-pair | approach | central");
  o.add("r", ValueKind::number, 3.0, "static-pair separation");
  o.add("d0", ValueKind::number, 50.0, "approach/central: initial distance");
  o.add("v", ValueKind::number, 0.1, "approach/central: speed");
  o.add("a", ValueKind::number, 2.0, "central: site separation");
  o.add("t_end", ValueKind::number, 2000.0, "end of the simulated span");
  o.add("steps", ValueKind::integer, 50, "number of hops");
  o.add("out", ValueKind::text, "-", "output CSV path, - for stdout");

  c.execute = [](const json& cfg, std::ostream& out, std::ostream& err) -> int {
    const std::string geometry = get_text(cfg, "geometry");
    const double t_end = get_number(cfg, "t_end");
    require_positive(t_end, "t_end");
    const long long steps = get_int(cfg, "steps");
    if (steps < 1 || steps > 1000000) throw ConfigError("'steps' must be in [1, 1e6]");
    std::vector<PiecewiseTrajectory> trajs;
    std::size_t source = 0, partner = 1;
    if (geometry == "static-pair") {
      const double r = get_number(cfg, "r");
      require_positive(r, "r");
      trajs.push_back(static_trajectory({0, 0, 0}, -1.0, t_end));
      trajs.push_back(static_trajectory({r, 0, 0}, -1.0, t_end));
    } else if (geometry == "approach" || geometry == "central") {
      const double d0 = get_number(cfg, "d0"), v = get_number(cfg, "v");
      require_positive(d0, "d0");
      require_positive(v, "v");
      if (!(v < kDefaultVmax)) throw ConfigError("'v' must be below 0.99");
      if (geometry == "approach") {
        trajs.push_back(static_trajectory({0, 0, 0}, -1.0, t_end));
        const double t_stop = std::min(t_end, 0.999 * d0 / v);
        trajs.push_back(linear_trajectory({d0 + v, 0, 0}, {-v, 0, 0}, -1.0, t_stop));
      } else {
        const double a = get_number(cfg, "a");
        require_positive(a, "a");
        const double t_stop = d0 / v;
        if (!(t_end > t_stop)) throw ConfigError("'t_end' must exceed d0/v");
        const std::vector<double> times = {-1.0, t_stop, t_end};
        const std::vector<Vec3> pos = {{-d0 - v, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        trajs.push_back(polyline_trajectory(times, pos));
        trajs.push_back(static_trajectory({0, a / 2, 0}, -1.0, t_end));
        trajs.push_back(static_trajectory({0, -a / 2, 0}, -1.0, t_end));
      }
    } else {
      throw ConfigError("'geometry' must be static-pair, approach or central");
    }
    SewingChain chain =
        propagate_chain(trajs, DiscontinuityEvent{source, 0.0, 0}, partner, static_cast<int>(steps));
    OutputSink sink(get_text(cfg, "out"), out);
    std::ostream& os = sink.stream();
    json meta = metadata("sewing", cfg);
    meta["truncated"] = chain.truncated;
    write_csv_header(os, meta, {"generation", "trajectory_id", "t"});
    for (const DiscontinuityEvent& e : chain.events)
      os << e.generation << ',' << e.trajectory << ',' << format_double(e.t) << '\n';
    if (chain.truncated) err << "note: chain left the simulated span after " << chain.events.size() << " events\n";
    sink.flush();
    return kExitOk;
  };
}

// ---- doubleslit ----

void add_doubleslit(CLI::App& root, std::vector<std::unique_ptr<Command>>& commands) {
  Command& c = add_command(root, commands, "doubleslit",
                           "Closest-approach length, De Broglie estimate and Bragg directions of the\n"
                           "piecewise-constant-velocity double-slit model (units c = e = m_e = 1).");
  auto& o = *c.options;
  o.add("a", ValueKind::number, 1.0e5, "slit separation");
  o.add("v3", ValueKind::number, 0.01, "speed of the scattered particle");
  o.add("m3", ValueKind::number, 1.0, "mass of the scattered particle");
  o.add("mass_ratio", ValueKind::number, kProtonElectronMassRatio, "nuclear to electron mass ratio");
  o.add("hbar", ValueKind::number, kHbar, "reduced Planck constant");
  o.add("n_max", ValueKind::integer, 3, "largest Bragg order");
  o.add("out", ValueKind::text, "-", "output JSON path, - for stdout");
  o.add("bragg_csv", ValueKind::text, "", "optional CSV path for the Bragg table");

  c.execute = [](const json& cfg, std::ostream& out, std::ostream&) -> int {
    SlitConfig sc;
    sc.a = get_number(cfg, "a");
    sc.v3 = get_number(cfg, "v3");
    sc.m_scattered = get_number(cfg, "m3");
    sc.mass_ratio = get_number(cfg, "mass_ratio");
    sc.hbar = get_number(cfg, "hbar");
    const long long n_max = get_int(cfg, "n_max");
    if (n_max < 0 || n_max > 100000) throw ConfigError("'n_max' must be in [0, 1e5]");
    try {
      sc.validate();
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
    const DoubleSlitReport r = run_double_slit(sc, static_cast<int>(n_max));
    json report = metadata("doubleslit", cfg);
    report["L"] = r.L;
    report["recoil_factor"] = r.recoil_factor;
    report["lambda_db"] = r.lambda_db;
    report["ratio_to_h_over_mv"] = r.ratio_to_h_over_mv;
    json bragg = json::array();
    for (const BraggDirection& b : r.bragg) bragg.push_back({{"n", b.n}, {"theta_rad", b.theta_rad}, {"theta_deg", b.theta_deg}});
    report["bragg"] = bragg;
    OutputSink sink(get_text(cfg, "out"), out);
    sink.stream() << report.dump(2) << '\n';
    sink.flush();
    const std::string csv = get_text(cfg, "bragg_csv");
    if (!csv.empty()) {
      OutputSink table(csv, out);
      write_csv_header(table.stream(), metadata("doubleslit", cfg), {"n", "theta_rad", "theta_deg"});
      for (const BraggDirection& b : r.bragg) write_csv_row(table.stream(), {double(b.n), b.theta_rad, b.theta_deg});
      table.flush();
    }
    return kExitOk;
  };
}

// ---- crystal ----

void add_potential_options(ConfigOptions& o) {
  o.add("epsilon", ValueKind::number, 1e-3, "potential strength");
  o.add("G", ValueKind::vector, json::array({"2pi", 0.0}), "reciprocal vector of the single +-G pair");
  o.add("V_re", ValueKind::number, 1.0, "Re V_G");
  o.add("V_im", ValueKind::number, 0.0, "Im V_G");
}

crystal::FourierPotential potential_from(const json& cfg) {
  const double eps = get_number(cfg, "epsilon");
  require_positive(eps, "epsilon");
  const Vec3 G = get_vec(cfg, "G");
  if (!(norm(G) > 0.0)) throw ConfigError("'G' must be nonzero");
  const crystal::Complex V(get_number(cfg, "V_re"), get_number(cfg, "V_im"));
  if (!(std::abs(V) > 0.0)) throw ConfigError("V_G must be nonzero");
  return crystal::FourierPotential::single_pair(G, V, eps);
}

// min(spatial period at the given speed, small-oscillation period) / 200.
double default_dt(const crystal::FourierPotential& pot, double speed) {
  const double pendulum = 2.0 * std::numbers::pi / crystal::pendulum_frequency(pot);
  const double spatial = speed > 0.0 ? pot.shortest_period(speed) : pendulum;
  return std::min(spatial, pendulum) / 200.0;
}

void add_crystal(CLI::App& root, std::vector<std::unique_ptr<Command>>& commands) {
  CLI::App* crystal_app = root.add_subcommand("crystal", "Particle in a weak periodic potential");
  crystal_app->require_subcommand(1);

  {
    Command& c = add_command(*crystal_app, commands, "hamiltonian", "Single leapfrog run of H = p^2/2 + V(x)");
    auto& o = *c.options;
    add_potential_options(o);
    o.add("x0", ValueKind::vector, json::array({0.0, 0.0}), "initial position");
    o.add("p0", ValueKind::vector, json::array({0.0, 1.0}), "initial momentum");
    o.add("T", ValueKind::number, 1000.0, "duration");
    o.add_optional("dt", ValueKind::number, "time step (default: shortest period / 200)");
    o.add("sample_every", ValueKind::integer, 10, "write every k-th step");
    o.add("out", ValueKind::text, "-", "output CSV path, - for stdout");
    c.execute = [](json cfg, std::ostream& out, std::ostream& err) -> int {
      const crystal::FourierPotential pot = potential_from(cfg);
      const Vec3 x0 = get_vec(cfg, "x0"), p0 = get_vec(cfg, "p0");
      const double T = get_number(cfg, "T");
      require_positive(T, "T");
      if (cfg["dt"].is_null()) cfg["dt"] = default_dt(pot, norm(p0));
      const double dt = get_number(cfg, "dt");
      require_positive(dt, "dt");
      if (T / dt > 1e9) throw ConfigError("too many steps requested");
      const long long every = get_int(cfg, "sample_every");
      if (every < 1) throw ConfigError("'sample_every' must be >= 1");
      const crystal::CrystalTrajectory tr = crystal::integrate(pot, x0, p0, T, dt, static_cast<int>(every));
      OutputSink sink(get_text(cfg, "out"), out);
      std::ostream& os = sink.stream();
      write_csv_header(os, metadata("crystal hamiltonian", cfg), {"t", "x", "y", "px", "py", "H"});
      for (const crystal::Sample& s : tr.samples) write_csv_row(os, {s.t, s.x.x, s.x.y, s.p.x, s.p.y, s.H});
      if (tr.failed_at) {
        write_failure(os, "state became non-finite", *tr.failed_at);
        err << "numerical failure: state became non-finite after t=" << *tr.failed_at << '\n';
        return kExitNumerical;
      }
      sink.flush();
      return kExitOk;
    };
  }

  {
    Command& c = add_command(*crystal_app, commands, "kick-sweep",
                             "Ensemble of runs through the G resonance with uniformly random initial phase");
    auto& o = *c.options;
    add_potential_options(o);
    o.add("runs", ValueKind::integer, 64, "number of runs");
    o.add("seed", ValueKind::integer, 1, "random seed; run k uses seed + k");
    o.add("p_parallel", ValueKind::number, 0.0, "initial momentum along G");
    o.add("p_perp", ValueKind::number, 1.0, "initial momentum across G");
    o.add_optional("T", ValueKind::number, "duration of each run (default: 4 pendulum periods)");
    o.add_optional("dt", ValueKind::number, "time step (default: shortest period / 200)");
    o.add("workers", ValueKind::integer, 0, "worker threads (0: NDDE_NUM_WORKERS or all processors)");
    o.add("out", ValueKind::text, "-", "output CSV path, - for stdout");
    c.execute = [](json cfg, std::ostream& out, std::ostream& err) -> int {
      const crystal::FourierPotential pot = potential_from(cfg);
      const Vec3 G = get_vec(cfg, "G");
      const Vec3 g_hat = normalized(G);
      const Vec3 perp{-g_hat.y, g_hat.x, 0.0};
      const Vec3 p0 = g_hat * get_number(cfg, "p_parallel") + perp * get_number(cfg, "p_perp");
      const long long runs = get_int(cfg, "runs");
      if (runs < 1 || runs > 10000000) throw ConfigError("'runs' must be in [1, 1e7]");
      const long long seed = get_int(cfg, "seed");
      if (cfg["T"].is_null()) cfg["T"] = 4.0 * 2.0 * std::numbers::pi / crystal::pendulum_frequency(pot);
      if (cfg["dt"].is_null()) cfg["dt"] = default_dt(pot, norm(p0));
      const double T = get_number(cfg, "T"), dt = get_number(cfg, "dt");
      require_positive(T, "T");
      require_positive(dt, "dt");
      if (T / dt > 1e9) throw ConfigError("too many steps requested");
      const unsigned workers = resolve_workers(get_int(cfg, "workers"));
      cfg.erase("workers");

      const double phase_offset = std::arg(pot.terms().front().V);
      struct Row {
        double phase = 0.0;
        crystal::KickReport kick;
        std::optional<double> failed_at;
      };
      std::vector<Row> rows(static_cast<std::size_t>(runs));
      parallel_for(rows.size(), workers, [&](std::size_t k) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + k);
        const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
        const Vec3 x0 = g_hat * ((phase - phase_offset) / norm(G));
        const crystal::CrystalTrajectory tr = crystal::integrate(pot, x0, p0, T, dt, 1 << 30);
        rows[k].phase = phase;
        rows[k].failed_at = tr.failed_at;
        if (!tr.failed_at) rows[k].kick = crystal::momentum_kick(tr, pot);
      });

      OutputSink sink(get_text(cfg, "out"), out);
      std::ostream& os = sink.stream();
      write_csv_header(os, metadata("crystal kick-sweep", cfg),
                       {"run", "phase", "dPx", "dPy", "dP_norm", "alignment", "bound", "ratio"});
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].failed_at) {
          write_failure(os, "run " + std::to_string(k) + " became non-finite", *rows[k].failed_at);
          err << "numerical failure in run " << k << '\n';
          return kExitNumerical;
        }
        const crystal::KickReport& r = rows[k].kick;
        const double dn = norm(r.dP);
        write_csv_row(os, {double(k), rows[k].phase, r.dP.x, r.dP.y, dn, r.alignment, r.separatrix_bound,
                           dn / r.separatrix_bound});
      }
      sink.flush();
      return kExitOk;
    };
  }

  {
    Command& c = add_command(*crystal_app, commands, "vonlaue",
                             "Velocity shifts du = (L |u| / 2pi) G per reciprocal vector, with the\n"
                             "worst lightcone-delay residual over an n_side x n_side patch of sites");
    auto& o = *c.options;
    o.add("L", ValueKind::number, 1.0, "chain period L");
    o.add("u", ValueKind::vector, json::array({1.0, 0.0, 0.0}), "incoming velocity");
    o.add_optional("G", ValueKind::vector, "single reciprocal vector (default: all with |index| <= max_index)");
    o.add("spacing", ValueKind::number, 1.0, "square lattice spacing");
    o.add("max_index", ValueKind::integer, 1, "largest Miller index tabulated");
    o.add("n_side", ValueKind::integer, 20, "patch side for the residual check");
    o.add("out", ValueKind::text, "-", "output JSON path, - for stdout");
    c.execute = [](const json& cfg, std::ostream& out, std::ostream&) -> int {
      const double L = get_number(cfg, "L"), spacing = get_number(cfg, "spacing");
      require_positive(L, "L");
      require_positive(spacing, "spacing");
      const Vec3 u = get_vec(cfg, "u");
      if (!(norm(u) > 0.0)) throw ConfigError("'u' must be nonzero");
      const long long max_index = get_int(cfg, "max_index"), n_side = get_int(cfg, "n_side");
      if (max_index < 1 || max_index > 50) throw ConfigError("'max_index' must be in [1, 50]");
      if (n_side < 1 || n_side > 1000) throw ConfigError("'n_side' must be in [1, 1000]");
      const crystal::Lattice lattice = crystal::Lattice::square(spacing);
      std::vector<Vec3> gs;
      if (cfg["G"].is_null())
        gs = lattice.reciprocal_vectors(static_cast<int>(max_index));
      else
        gs.push_back(get_vec(cfg, "G"));
      json table = json::array();
      for (const Vec3& G : gs) {
        table.push_back({{"G", to_json(G)},
                         {"du", to_json(crystal::vonlaue_shift(L, u, G))},
                         {"residual", crystal::vonlaue_delay_residual(L, u, G, lattice, static_cast<int>(n_side))}});
      }
      json report = metadata("crystal vonlaue", cfg);
      report["table"] = table;
      OutputSink sink(get_text(cfg, "out"), out);
      sink.stream() << report.dump(2) << '\n';
      sink.flush();
      return kExitOk;
    };
  }
}

}  // namespace

void register_commands(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  add_ndde(app, commands);
  add_lightcone(app, commands);
  add_field_probe(app, commands);
  add_sewing(app, commands);
  add_doubleslit(app, commands);
  add_crystal(app, commands);
}

}  // namespace ndde::cli
