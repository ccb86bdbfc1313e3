#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <vector>

#include "ndde/crystal.hpp"
#include "ndde/delay_core.hpp"
#include "ndde/errors.hpp"
#include "ndde/farfield.hpp"
#include "ndde/io.hpp"
#include "ndde/lightcone.hpp"
#include "ndde/sewing.hpp"
#include "ndde/slit_model.hpp"
#include "ndde/trajectory.hpp"

namespace py = pybind11;
using namespace ndde;

namespace {

using Triple = std::array<double, 3>;

Vec3 vec(const Triple& a) { return {a[0], a[1], a[2]}; }
Triple tup(const Vec3& v) { return {v.x, v.y, v.z}; }

Branch branch_of(const std::string& s) {
  if (s == "retarded") return Branch::retarded;
  if (s == "advanced") return Branch::advanced;
  throw ArgumentError("branch must be 'retarded' or 'advanced'");
}

Side side_of(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw ArgumentError("side must be 'left' or 'right'");
}

py::dict hit_dict(const LightconeHit& h) {
  py::dict d;
  d["t_dev"] = h.t_dev;
  d["r"] = h.r;
  d["n"] = tup(h.n);
  d["position"] = tup(h.position);
  d["velocity"] = tup(h.v_dev);
  d["acceleration"] = tup(h.a_dev);
  d["dtdev_dt"] = h.dtdev_dt;
  d["on_breakpoint"] = h.on_breakpoint;
  d["iterations"] = h.iterations;
  return d;
}

py::dict solution_dict(const ScalarSolution& s) {
  std::vector<double> t, y;
  t.reserve(s.step_count() + 1);
  y.reserve(s.step_count() + 1);
  for (std::size_t i = 0; i <= s.step_count(); ++i) {
    t.push_back(s.node_time(i));
    y.push_back(s.node_value(i));
  }
  py::list bps;
  for (const BreakingPoint& bp : s.breaking_points()) {
    py::dict b;
    b["t"] = bp.t;
    b["n"] = bp.index;
    b["jumps"] = std::vector<double>{bp.jump(1), bp.jump(2), bp.jump(3), bp.jump(4)};
    bps.append(b);
  }
  py::dict d;
  d["t"] = t;
  d["y"] = y;
  d["breaking_points"] = bps;
  return d;
}

py::dict solve_linear(const std::string& kind, double a, double b, double c, double h0, double h1, double delay,
                      double horizon, int steps_per_delay) {
  ScalarDelayProblem p;
  if (kind == "neutral")
    p.rhs = DelayRhs::neutral([a, b, c](auto y, auto yd, auto ydotd) { return a * ydotd + b * yd + c * y; });
  else if (kind == "retarded")
    p.rhs = DelayRhs::retarded([a, b, c](auto y, auto yd) { return a * yd + b * y + c; });
  else
    throw ArgumentError("kind must be 'retarded' or 'neutral'");
  p.delay = delay;
  p.history = HistoryFunction::affine(h0, h1, -delay);
  p.horizon = horizon;
  p.steps_per_delay = steps_per_delay;
  return solution_dict(solve(p));
}

py::dict field_dict(const FieldSample& f) {
  py::dict d;
  d["E_plus"] = tup(f.E_plus);
  d["E_minus"] = tup(f.E_minus);
  d["B_plus"] = tup(f.B_plus);
  d["B_minus"] = tup(f.B_minus);
  d["E"] = tup(f.E);
  d["B"] = tup(f.B);
  d["flagged"] = f.flagged;
  return d;
}

crystal::FourierPotential pair_potential(const Triple& G, std::complex<double> V, double epsilon) {
  return crystal::FourierPotential::single_pair(vec(G), V, epsilon);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Neutral delay dynamics of charged trajectories";

  py::register_exception<Error>(m, "NddeError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_ArithmeticError);

  py::class_<PiecewiseTrajectory>(m, "Trajectory")
      .def_static(
          "static", [](const Triple& x, double t0, double t1, double mass, double charge) {
            return static_trajectory(vec(x), t0, t1, mass, charge);
          },
          py::arg("position"), py::arg("t0"), py::arg("t1"), py::arg("mass") = 1.0, py::arg("charge") = -1.0)
      .def_static(
          "linear", [](const Triple& x0, const Triple& v, double t0, double t1, double mass, double charge) {
            return linear_trajectory(vec(x0), vec(v), t0, t1, mass, charge);
          },
          py::arg("x0"), py::arg("velocity"), py::arg("t0"), py::arg("t1"), py::arg("mass") = 1.0,
          py::arg("charge") = -1.0)
      .def_static(
          "circular", [](const Triple& c, double radius, double omega, double t0, double t1, int per_turn) {
            return circular_orbit(vec(c), {1, 0, 0}, {0, 1, 0}, radius, omega, t0, t1, per_turn);
          },
          py::arg("center"), py::arg("radius"), py::arg("omega"), py::arg("t0"), py::arg("t1"),
          py::arg("segments_per_turn") = 64)
      .def_static(
          "ping_pong", [](const Triple& c, const Triple& dir, double amplitude, double speed, double t0, double t1) {
            return ping_pong_orbit(vec(c), vec(dir), amplitude, speed, t0, t1);
          },
          py::arg("center"), py::arg("direction"), py::arg("amplitude"), py::arg("speed"), py::arg("t0"),
          py::arg("t1"))
      .def_static(
          "from_json", [](const std::string& text) { return trajectory_from_json(nlohmann::json::parse(text)); },
          py::arg("text"))
      .def("to_json", [](const PiecewiseTrajectory& t) { return trajectory_to_json(t).dump(); })
      .def_property_readonly("t_min", &PiecewiseTrajectory::t_min)
      .def_property_readonly("t_max", &PiecewiseTrajectory::t_max)
      .def_property_readonly("mass", &PiecewiseTrajectory::mass)
      .def_property_readonly("charge", &PiecewiseTrajectory::charge)
      .def_property_readonly("breakpoints",
                             [](const PiecewiseTrajectory& t) {
                               std::vector<double> out;
                               for (const Breakpoint& b : t.breakpoints()) out.push_back(b.t);
                               return out;
                             })
      .def(
          "eval",
          [](const PiecewiseTrajectory& t, double time, const std::string& side) {
            const Kinematics k = t.eval(time, side_of(side));
            return py::make_tuple(tup(k.position), tup(k.velocity), tup(k.acceleration));
          },
          py::arg("t"), py::arg("side") = "right")
      .def(
          "insert_breakpoint",
          [](const PiecewiseTrajectory& t, double time, const Triple& v) { return t.insert_breakpoint(time, vec(v)); },
          py::arg("t"), py::arg("new_right_velocity"))
      .def("time_reversed", &PiecewiseTrajectory::time_reversed);

  m.def(
      "solve_lightcone",
      [](const PiecewiseTrajectory& traj, const Triple& x, double t, const std::string& branch) {
        return hit_dict(solve_lightcone(traj, vec(x), t, branch_of(branch)));
      },
      py::arg("trajectory"), py::arg("x"), py::arg("t"), py::arg("branch"));

  m.def(
      "semi_sum_fields",
      [](const PiecewiseTrajectory& traj, const Triple& x, double t) {
        return field_dict(semi_sum_fields(traj, vec(x), t));
      },
      py::arg("source"), py::arg("x"), py::arg("t"));

  m.def(
      "far_fields",
      [](const PiecewiseTrajectory& traj, const Triple& x, double t, const std::string& branch, const std::string& form) {
        FarField f;
        if (form == "pm")
          f = far_fields_pm(traj, vec(x), t, branch_of(branch));
        else if (form == "simple")
          f = far_fields_simple(traj, vec(x), t, branch_of(branch));
        else
          throw ArgumentError("form must be 'pm' or 'simple'");
        return py::make_tuple(tup(f.E), tup(f.B));
      },
      py::arg("source"), py::arg("x"), py::arg("t"), py::arg("branch"), py::arg("form") = "simple");

  m.def("solve_linear_delay", &solve_linear, py::arg("kind") = "retarded", py::arg("a") = -1.0, py::arg("b") = 0.0,
        py::arg("c") = 0.0, py::arg("h0") = 1.0, py::arg("h1") = 0.0, py::arg("delay") = 1.0, py::arg("horizon") = 3.0,
        py::arg("steps_per_delay") = 200);

  m.def(
      "propagate_chain",
      [](const std::vector<PiecewiseTrajectory>& trajs, std::size_t source, double t, std::size_t partner, int n) {
        const SewingChain chain = propagate_chain(trajs, {source, t, 0}, partner, n);
        py::list events;
        for (const DiscontinuityEvent& e : chain.events) events.append(py::make_tuple(e.generation, e.trajectory, e.t));
        py::dict d;
        d["events"] = events;
        d["hop_residuals"] = chain.hop_residuals;
        d["truncated"] = chain.truncated;
        return d;
      },
      py::arg("trajectories"), py::arg("source"), py::arg("t"), py::arg("partner"), py::arg("n_steps"));

  m.def("recoil_factor", &recoil_factor, py::arg("mass_ratio") = kProtonElectronMassRatio);
  m.def(
      "double_slit",
      [](double a, double v3, double m3, double mass_ratio, double hbar, int n_max) {
        SlitConfig cfg;
        cfg.a = a;
        cfg.v3 = v3;
        cfg.m_scattered = m3;
        cfg.mass_ratio = mass_ratio;
        cfg.hbar = hbar;
        const DoubleSlitReport r = run_double_slit(cfg, n_max);
        py::list bragg;
        for (const BraggDirection& b : r.bragg) bragg.append(py::make_tuple(b.n, b.theta_rad, b.theta_deg));
        py::dict d;
        d["L"] = r.L;
        d["recoil_factor"] = r.recoil_factor;
        d["lambda_db"] = r.lambda_db;
        d["ratio_to_h_over_mv"] = r.ratio_to_h_over_mv;
        d["bragg"] = bragg;
        return d;
      },
      py::arg("a") = 1.0e5, py::arg("v3") = 0.01, py::arg("m3") = 1.0, py::arg("mass_ratio") = kProtonElectronMassRatio,
      py::arg("hbar") = kHbar, py::arg("n_max") = 3);

  m.def(
      "crystal_integrate",
      [](const Triple& G, std::complex<double> V, double epsilon, const Triple& x0, const Triple& p0, double T,
         double dt, int sample_every) {
        const auto tr = crystal::integrate(pair_potential(G, V, epsilon), vec(x0), vec(p0), T, dt, sample_every);
        py::list rows;
        for (const crystal::Sample& s : tr.samples) rows.append(py::make_tuple(s.t, tup(s.x), tup(s.p), s.H));
        return rows;
      },
      py::arg("G"), py::arg("V"), py::arg("epsilon"), py::arg("x0"), py::arg("p0"), py::arg("T"), py::arg("dt"),
      py::arg("sample_every") = 1);

  m.def(
      "crystal_kick",
      [](const Triple& G, std::complex<double> V, double epsilon, const Triple& x0, const Triple& p0, double T,
         double dt) {
        const auto pot = pair_potential(G, V, epsilon);
        const crystal::KickReport k = crystal::momentum_kick(crystal::integrate(pot, vec(x0), vec(p0), T, dt), pot);
        py::dict d;
        d["dP"] = tup(k.dP);
        d["alignment"] = k.alignment;
        d["separatrix_bound"] = k.separatrix_bound;
        return d;
      },
      py::arg("G"), py::arg("V"), py::arg("epsilon"), py::arg("x0"), py::arg("p0"), py::arg("T"), py::arg("dt"));

  m.def(
      "pendulum_frequency",
      [](const Triple& G, std::complex<double> V, double epsilon) {
        return crystal::pendulum_frequency(pair_potential(G, V, epsilon));
      },
      py::arg("G"), py::arg("V"), py::arg("epsilon"));

  m.def(
      "first_order_residual",
      [](const Triple& G, std::complex<double> V, double epsilon, const Triple& P) {
        return crystal::first_order_residual(pair_potential(G, V, epsilon), vec(P));
      },
      py::arg("G"), py::arg("V"), py::arg("epsilon"), py::arg("P"));

  m.def(
      "vonlaue_shift", [](double L, const Triple& u, const Triple& G) { return tup(crystal::vonlaue_shift(L, vec(u), vec(G))); },
      py::arg("L"), py::arg("u"), py::arg("G"));
}
