// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: ndde_acceptance [criterion ...]   (no arguments runs all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ndde/crystal.hpp"
#include "ndde/delay_core.hpp"
#include "ndde/farfield.hpp"
#include "ndde/lightcone.hpp"
#include "ndde/sewing.hpp"
#include "ndde/slit_model.hpp"
#include "oracles.hpp"
#include "samplers.hpp"

using namespace ndde;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;
  std::function<void(Outcome&)> body;
};

// ---- 1 ----
void smoothing_law(Outcome& o) {
  ScalarDelayProblem p;
  p.rhs = DelayRhs::retarded([](auto, auto yd) { return -yd; });
  p.history = HistoryFunction::constant(1.0, -1.0);
  p.horizon = 3.0;
  const ScalarSolution s = solve(p);
  const double j1 = jump_profile(s, 1)[1].jump;
  const double j2 = jump_profile(s, 2)[1].jump;
  const auto pieces = oracle::retarded_steps(-1.0, {1.0}, 3);
  o.detail.precision(3);
  o.detail << "jump1(t=1)=" << j1 << " jump2(t=1)=" << j2 << " (oracle " << oracle::jump_at(pieces, 1, 2) << ") ";
  o.require(std::abs(j1) < 1e-9, "order-1 jump at t=1 below 1e-9");
  o.require(std::abs(j2 - 1.0) <= 1e-6, "order-2 jump at t=1 equals 1");
  // The dense output sees the same one-sided slopes.
  const std::size_t i = static_cast<std::size_t>(p.steps_per_delay);
  o.require(std::abs(s.node_slope(i, Side::right) - s.node_slope(i, Side::left)) < 1e-9, "dense output C1 at t=1");
}

// ---- 2 ----
void persistence_law(Outcome& o) {
  double worst = 0.0;
  for (double a : {0.5, -0.8}) {
    ScalarDelayProblem p;
    p.rhs = DelayRhs::neutral([a](auto, auto, auto ydotd) { return a * ydotd; });
    p.history = HistoryFunction::affine(0.0, 1.0, -1.0);
    p.horizon = 6.5;
    const ScalarSolution s = solve(p);
    const double J0 = s.breaking_points()[0].jump(1);
    o.require(std::abs(J0 - (a - 1.0)) < 1e-15, "J0 equals a - 1 for the unit-slope history");
    for (int n = 0; n <= 6; ++n) {
      const double want = std::pow(a, n) * J0;
      const double got = s.breaking_points()[static_cast<std::size_t>(n)].jump(1);
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
      if (n > 0) {
        const std::size_t i = static_cast<std::size_t>(n * p.steps_per_delay);
        const double dense = s.node_slope(i, Side::right) - s.node_slope(i, Side::left);
        worst = std::max(worst, std::abs(dense - want) / std::abs(want));
      }
    }
  }
  o.detail << "max relative deviation from a^n J0 = " << worst << " ";
  o.require(worst <= 1e-9, "relative 1e-9");
}

// ---- 3 ----
void lightcone_solver(Outcome& o) {
  const auto uniform = linear_trajectory({-10, 0, 0}, {0.5, 0, 0}, -20.0, 20.0);
  const double tr = solve_lightcone(uniform, {0, 0, 0}, 1.5, Branch::retarded).t_dev;
  const double ta = solve_lightcone(uniform, {0, 0, 0}, 1.5, Branch::advanced).t_dev;
  o.detail << "t-=" << tr << " t+=" << ta << " ";
  o.require(std::abs(tr - 1.0) <= 1e-12 && std::abs(ta - 3.0) <= 1e-12, "analytic roots within 1e-12");

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const auto traj = sampler::random_cubic(rng);
    const Vec3 x = sampler::random_point(rng, 4.0);
    const double t = 2.0 * u(rng);
    const Branch b = i % 2 ? Branch::advanced : Branch::retarded;
    const double h = 1e-5;
    const double fd = (solve_lightcone(traj, x, t + h, b).t_dev - solve_lightcone(traj, x, t - h, b).t_dev) / (2 * h);
    worst = std::max(worst, std::abs(fd - solve_lightcone(traj, x, t, b).dtdev_dt));
  }
  o.detail << "max |dt_dev/dt - FD| over " << samples << " samples = " << worst << " ";
  o.require(worst <= 1e-6, "time derivative within 1e-6");
}

// ---- 4 ----
void field_equivalence(Outcome& o) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const auto traj = sampler::random_cubic(rng, 40.0, i % 3 ? -1.0 : 1.0);
    const Vec3 x = sampler::random_point(rng, 4.0);
    const Branch b = i % 2 ? Branch::advanced : Branch::retarded;
    const LightconeHit h = solve_lightcone(traj, x, 2.0 * u(rng), b);
    const FarField pm = far_fields_pm(h, traj.charge(), b);
    const FarField simple = far_fields_simple(h, traj.charge(), b);
    const double scale = std::max(norm(pm.E), 1e-300);
    worst = std::max({worst, norm(pm.E - simple.E) / scale, norm(pm.B - simple.B) / scale});
  }
  o.detail << "max relative difference = " << worst << " ";
  o.require(worst <= 1e-9, "expanded and simple forms within 1e-9");

  const std::vector<double> times = {-40.0, -3.0, 0.0, 2.0, 40.0};
  const std::vector<Vec3> pos = {{-10, 0, 0}, {0, 0, 0}, {0, 1, 0}, {0.5, 1, 0.5}, {0.5, 1, 15}};
  const auto kinked = polyline_trajectory(times, pos);
  bool all_zero = true;
  for (double t = -5.0; t <= 5.0; t += 0.01) {
    const FieldSample s = semi_sum_fields(kinked, {4, -3, 1}, t);
    all_zero = all_zero && s.E_plus == Vec3{} && s.E_minus == Vec3{} && s.B_plus == Vec3{} && s.B_minus == Vec3{};
  }
  o.detail << "piecewise-constant velocity fields identically zero: " << (all_zero ? "yes" : "no") << " ";
  o.require(all_zero, "no far field from piecewise constant velocity");
}

// ---- 5 ----
void sewing_chains(Outcome& o) {
  const double r = 3.0;
  const std::vector<PiecewiseTrajectory> pair = {static_trajectory({0, 0, 0}, -1.0, 1000.0),
                                                 static_trajectory({r, 0, 0}, -1.0, 1000.0)};
  double worst = 0.0;
  for (double s : chain_spacings(propagate_chain(pair, {0, 0.0, 0}, 1, 100))) worst = std::max(worst, std::abs(s - 2 * r));
  o.detail << "static |spacing-2r| max " << worst << "; ";
  o.require(worst <= 1e-12, "static pair spacing 2r");

  const double d0 = 60.0, v = 0.3;
  const std::vector<PiecewiseTrajectory> approach = {static_trajectory({0, 0, 0}, -1.0, 1000.0),
                                                     linear_trajectory({d0 + v, 0, 0}, {-v, 0, 0}, -1.0, 0.995 * d0 / v)};
  const auto sa = chain_spacings(propagate_chain(approach, {0, 0.0, 0}, 1, 200));
  bool monotone = sa.size() > 10;
  for (std::size_t k = 1; k < sa.size(); ++k) monotone = monotone && sa[k] < sa[k - 1];
  o.detail << "approach: " << sa.size() << " spacings, monotone " << (monotone ? "yes" : "no") << "; ";
  o.require(monotone, "approach spacings strictly decreasing");

  const double a = 4.0, dc = 40.0, vc = 0.2;
  const std::vector<double> times = {-1.0, dc / vc, 3000.0};
  const std::vector<Vec3> pos = {{-dc - vc, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  const std::vector<PiecewiseTrajectory> central = {polyline_trajectory(times, pos),
                                                    static_trajectory({0, a / 2, 0}, -1.0, 3000.0),
                                                    static_trajectory({0, -a / 2, 0}, -1.0, 3000.0)};
  for (std::size_t site : {1u, 2u}) {
    const auto sc = chain_spacings(propagate_chain(central, {0, 0.0, 0}, site, 600), 0);
    bool dec = true;
    for (std::size_t k = 1; k < sc.size(); ++k) dec = dec && sc[k] <= sc[k - 1] * (1 + 1e-12);
    const double last = sc.back();
    if (site == 1) o.detail << "central: first spacing " << sc.front() << " -> last " << last << " (a=" << a << ")";
    o.require(dec, "central spacings non-increasing");
    o.require(std::abs(last - a) <= 0.01 * a, "central spacings within 1% of a");
  }
}

// ---- 6 ----
void de_broglie(Outcome& o) {
  const double rf = recoil_factor(1836.15267);
  o.detail.precision(10);
  o.detail << "recoil " << rf << "; ";
  o.require(rf >= 188.8 && rf <= 189.0, "recoil factor in [188.8, 189.0]");
  SlitConfig cfg;
  const double ref = de_broglie_length(cfg).lambda_db * cfg.m_scattered * cfg.v3;
  double worst = 0.0;
  for (double v3 : {0.001, 0.003, 0.01, 0.03, 0.1, 0.3}) {
    SlitConfig c = cfg;
    c.v3 = v3;
    worst = std::max(worst, std::abs(de_broglie_length(c).lambda_db * c.m_scattered * v3 - ref) / ref);
  }
  const double ratio = de_broglie_length(cfg).ratio_to_h_over_mv;
  o.detail << "lambda m v spread " << worst << "; ratio " << ratio << " ";
  o.require(worst <= 1e-12, "lambda m v constant to 1e-12");
  o.require(std::abs(ratio - 4.56) <= 0.1, "ratio 4.56 +- 0.1");
}

// ---- 7 ----
void isotope_identity(Outcome& o) {
  double worst = 0.0;
  int pairs = 0;
  for (int n2 = 2; n2 <= 50; ++n2)
    for (int n1 = 1; n1 < n2; ++n1) {
      const IsotopeCheck c = isotope_scaling_check(n1, n2);
      worst = std::max(worst, std::abs(c.lhs - c.rhs) / std::abs(c.rhs));
      ++pairs;
    }
  o.detail << pairs << " line pairs, max relative difference " << worst << " ";
  o.require(worst <= 1e-13, "relative 1e-13");
}

// ---- 8 ----
crystal::FourierPotential random_potential(std::mt19937_64& rng, const crystal::Lattice& lat, double eps) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<crystal::FourierTerm> terms;
  for (const Vec3& g : lat.reciprocal_vectors(2)) {
    if (g.x < 0 || (g.x == 0 && g.y < 0)) continue;
    const crystal::Complex v(u(rng), u(rng));
    terms.push_back({g, v});
    terms.push_back({-g, std::conj(v)});
  }
  return crystal::FourierPotential(terms, eps);
}

void canonical_cancellation(Outcome& o) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int checked = 0;
  while (checked < 100) {
    const crystal::Lattice lat = crystal::Lattice::oblique({1.0, 0.0, 0.0}, {0.3 * u(rng), 1.0 + 0.2 * u(rng), 0.0});
    const auto pot = random_potential(rng, lat, 0.01);
    const Vec3 P{u(rng), u(rng), 0.0};
    if (!crystal::resonance_set(pot, P, 1e-6).empty()) continue;
    worst = std::max(worst, crystal::first_order_residual(pot, P));
    ++checked;
  }
  o.detail << "max residual over 100 = " << worst << "; ";
  o.require(worst <= 1e-14, "residual <= 1e-14");

  // Near-freeness: single pair, non-resonant momentum, t in [0, 1/eps].
  const Vec3 G{2 * kPi, 0, 0};
  const Vec3 p0{0.8, 0.6, 0};
  std::vector<double> Cs;
  const std::vector<double> epsilons = {0.01, 0.005, 0.0025};
  for (double eps : epsilons) {
    const auto pot = crystal::FourierPotential::single_pair(G, crystal::Complex(0.7, 0.2), eps);
    const double dt = pot.shortest_period(norm(p0)) / 200;
    const auto tr = crystal::integrate(pot, {0.1, 0.0, 0.0}, p0, 1.0 / eps, dt, 5);
    Cs.push_back(crystal::straight_line_deviation(tr, pot) / eps);
  }
  o.detail << "C(eps) =";
  for (double c : Cs) o.detail << ' ' << c;
  for (std::size_t k = 1; k < Cs.size(); ++k) {
    o.require(std::abs(Cs[k] / Cs[k - 1] - 1.0) <= 0.25, "C stable under eps-halving");
    o.require(Cs[k] <= 1.25 * Cs[0], "deviation within C_fit eps");
  }
}

// ---- 9 ----
void resonant_kick(Outcome& o) {
  const double eps = 1e-3;
  const Vec3 G{2 * kPi, 2 * kPi * 0.5, 0};
  const auto pot = crystal::FourierPotential::single_pair(G, crystal::Complex(0.8, 0.6), eps);
  const Vec3 g_hat = normalized(G);
  const Vec3 perp{-g_hat.y, g_hat.x, 0};
  const double w = crystal::pendulum_frequency(pot);
  const double period = 2 * kPi / w;
  const double offset = std::arg(pot.terms().front().V);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ph(0.0, 2 * kPi);
  const int runs = 64;
  double min_align = 1.0, max_ratio = 0.0, max_ratio_true = 0.0;
  int above = 0;
  for (int i = 0; i < runs; ++i) {
    const double theta = ph(rng);
    const Vec3 x0 = g_hat * ((theta - offset) / norm(G));
    const auto tr = crystal::integrate(pot, x0, perp, 4 * period, period / 200, 1 << 30);
    const auto k = crystal::momentum_kick(tr, pot);
    min_align = std::min(min_align, k.alignment);
    const double ratio = norm(k.dP) / k.separatrix_bound;
    max_ratio = std::max(max_ratio, ratio);
    max_ratio_true = std::max(max_ratio_true, norm(k.dP) / std::sqrt(8 * eps * std::abs(pot.terms().front().V)));
    if (ratio > 1 + 1e-6) ++above;
  }
  o.detail << "min alignment " << min_align << "; max |dP|/sqrt(4 eps|V|) " << max_ratio << " (" << above << "/" << runs
           << " runs above); max |dP|/sqrt(8 eps|V|) " << max_ratio_true << "; ";
  o.require(min_align >= 1 - 1e-12, "kick aligned with G0");
  o.require(above == 0, "|dP| <= sqrt(4 eps |V|)(1+1e-6)");

  // Small oscillations about the potential minimum.
  const Vec3 x_min = g_hat * ((kPi - offset + 0.02) / norm(G));
  const auto tr = crystal::integrate(pot, x_min, perp, 20 * period, period / 400);
  std::vector<double> up;
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    const double a = dot(tr.samples[i - 1].p, g_hat), b = dot(tr.samples[i].p, g_hat);
    if (a < 0 && b >= 0) up.push_back(tr.samples[i - 1].t + (tr.samples[i].t - tr.samples[i - 1].t) * (-a) / (b - a));
  }
  const double measured = up.size() >= 3 ? 2 * kPi * static_cast<double>(up.size() - 1) / (up.back() - up.front()) : 0.0;
  o.detail << "pendulum w measured/linear " << measured / w;
  o.require(std::abs(measured / w - 1.0) <= 0.01, "frequency within 1%");
}

// ---- 10 ----
void von_laue(Outcome& o) {
  double worst = 0.0;
  const std::vector<crystal::Lattice> lattices = {crystal::Lattice::square(1.0),
                                                  crystal::Lattice::oblique({0.7, 0.0, 0.0}, {0.25, 1.1, 0.0})};
  const std::vector<Vec3> us = {{1, 0, 0}, {0.3, -0.4, 0}, {0.1, 0.2, 0}};
  for (const auto& lat : lattices)
    for (const Vec3& g : lat.reciprocal_vectors(2))
      for (const Vec3& u : us)
        for (double L : {1.0, 0.37})
          worst = std::max(worst, crystal::vonlaue_delay_residual(L, u, g, lat, 20));
  o.detail << "max |du_hat . dr - nL| over 20x20 patches = " << worst << " ";
  o.require(worst <= 1e-10, "1e-10");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "smoothing law (retarded)", 1.0, smoothing_law},
      {2, "persistence law (neutral)", 1.0, persistence_law},
      {3, "lightcone solver", 5.0, lightcone_solver},
      {4, "far-field formula equivalence", 10.0, field_equivalence},
      {5, "sewing chains", 10.0, sewing_chains},
      {6, "De Broglie pipeline", 1.0, de_broglie},
      {7, "isotope identity", 1.0, isotope_identity},
      {8, "canonical cancellation", 30.0, canonical_cancellation},
      {9, "resonant kick", 60.0, resonant_kick},
      {10, "von Laue consistency", 5.0, von_laue},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs <= c.time_limit, "runtime limit");
    if (!o.pass) ++failures;
    std::printf("criterion %2d %-32s %s  %.3fs/%.0fs  %s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", secs,
                c.time_limit, o.detail.str().c_str());
  }
  return failures == 0 ? 0 : 1;
}
