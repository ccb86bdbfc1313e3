#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ndde/crystal.hpp"
#include "ndde/errors.hpp"

using namespace ndde;
using namespace ndde::crystal;

namespace {

constexpr double kPi = std::numbers::pi;

// Period of p.G_hat oscillation from upward zero crossings.
double measured_period(const CrystalTrajectory& tr, const Vec3& g_hat) {
  std::vector<double> crossings;
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    const double a = dot(tr.samples[i - 1].p, g_hat), b = dot(tr.samples[i].p, g_hat);
    if (a < 0.0 && b >= 0.0) crossings.push_back(tr.samples[i - 1].t + (tr.samples[i].t - tr.samples[i - 1].t) * (-a) / (b - a));
  }
  REQUIRE(crossings.size() >= 3);
  return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

}  // namespace

TEST_CASE("reciprocal basis") {
  const Lattice sq = Lattice::square(0.5);
  CHECK(sq.reciprocal()[0].x == doctest::Approx(4.0 * kPi));
  const Lattice ob = Lattice::oblique({1.0, 0.0, 0.0}, {0.3, 0.8, 0.0});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(dot(ob.reciprocal()[static_cast<std::size_t>(i)], ob.basis()[static_cast<std::size_t>(j)]) -
                     (i == j ? 2 * kPi : 0.0)) < 1e-12);
  const Lattice cubic({Vec3{1, 0, 0}, Vec3{0, 2, 0}, Vec3{0.1, 0, 3}});
  CHECK(cubic.reciprocal_vectors(1).size() == 26);
  CHECK_THROWS_AS(Lattice({Vec3{1, 0, 0}, Vec3{2, 0, 0}}), ArgumentError);
}

TEST_CASE("potential reality and hamiltonian examples") {
  const Vec3 G{2 * kPi, 0, 0};
  CHECK_THROWS_AS(FourierPotential({{G, Complex(1, 0)}}, 0.1), ArgumentError);
  CHECK_THROWS_AS(FourierPotential({{G, Complex(1, 1)}, {-G, Complex(1, 1)}}, 0.1), ArgumentError);
  const FourierPotential zero = FourierPotential::single_pair(G, 0.5, 0.0);
  CHECK(hamiltonian({1, 2, 0}, {0.3, 0, 0}, zero) == 2.5);
  const FourierPotential pot = FourierPotential::single_pair(G, 0.5, 0.01);
  CHECK(pot.value({0, 0, 0}) == doctest::Approx(0.01));
  CHECK(pot.value({0.25, 0, 0}) == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
  CHECK(hamiltonian({1, 0, 0}, {0, 0, 0}, pot) == doctest::Approx(0.51));
  // Force is minus the gradient.
  const Vec3 x{0.13, 0.4, 0};
  const double h = 1e-6;
  const double fd = -(pot.value(x + Vec3{h, 0, 0}) - pot.value(x - Vec3{h, 0, 0})) / (2 * h);
  CHECK(pot.force(x).x == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("generating coefficients") {
  const Vec3 G{2, 0, 0};
  SUBCASE("V = 1, G.P = 2") {
    const FourierPotential pot = FourierPotential::single_pair(G, 1.0, 0.1);
    const auto gc = generating_coefficients(pot, {1, 0, 0});
    REQUIRE(gc.coefficients.size() == 2);
    CHECK(gc.coefficients[0].V == Complex(0.0, 0.5));
    CHECK(gc.coefficients[1].V == std::conj(gc.coefficients[0].V));
  }
  SUBCASE("V = i, G.P = 1") {
    const FourierPotential pot = FourierPotential::single_pair(G, Complex(0, 1), 0.1);
    const auto gc = generating_coefficients(pot, {0.5, 0, 0});
    CHECK(gc.coefficients[0].V == Complex(-1.0, 0.0));
  }
  SUBCASE("resonant G is excluded and reported") {
    const FourierPotential pot = FourierPotential::single_pair(G, 1.0, 0.1);
    const auto gc = generating_coefficients(pot, {0, 1, 0});
    CHECK(gc.coefficients.empty());
    CHECK(gc.resonant.size() == 2);
  }
}

TEST_CASE("first-order residual") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const Lattice lat = Lattice::oblique({1, 0, 0}, {0.2, 0.9, 0});
  std::vector<FourierTerm> terms;
  for (const Vec3& g : lat.reciprocal_vectors(2)) {
    if (g.x < 0 || (g.x == 0 && g.y < 0)) continue;
    const Complex v(u(rng), u(rng));
    terms.push_back({g, v});
    terms.push_back({-g, std::conj(v)});
  }
  const FourierPotential pot(terms, 0.05);
  const Vec3 P{0.7, std::numbers::sqrt2 / 3.0, 0};
  CHECK(first_order_residual(pot, P) <= 1e-14);
  std::vector<FourierTerm> zeros = generating_coefficients(pot, P).coefficients;
  double vmax = 0.0;
  for (auto& f : zeros) f.V = 0.0;
  for (const auto& t : pot.terms()) vmax = std::max(vmax, std::abs(t.V));
  CHECK(first_order_residual(pot, P, zeros) == doctest::Approx(vmax));
  // Linear growth in a perturbation delta of one coefficient.
  auto F = generating_coefficients(pot, P).coefficients;
  const double gp = std::abs(dot(F[0].G, P));
  for (double delta : {1e-6, 1e-3}) {
    auto Fd = F;
    Fd[0].V += delta;
    CHECK(first_order_residual(pot, P, Fd) == doctest::Approx(gp * delta).epsilon(1e-8));
  }
}

TEST_CASE("resonance sets") {
  const Lattice sq = Lattice::square(1.0);
  const auto along = resonance_set(sq, {1, 0, 0}, 1e-12, 2);
  REQUIRE(along.size() == 4);
  for (const Vec3& g : along) CHECK(g.x == 0.0);
  CHECK(resonance_set(sq, {1.0, std::numbers::sqrt2, 0}, 1e-12, 3).empty());
  CHECK(resonance_set(sq, {0, 0, 0}, 1e-12, 1).size() == 8);
}

TEST_CASE("free motion is exact") {
  const FourierPotential pot = FourierPotential::single_pair({2 * kPi, 0, 0}, 1.0, 0.0);
  const CrystalTrajectory tr = integrate(pot, {0.1, 0.2, 0}, {0.5, -0.25, 0}, 8.0, 0.125);
  for (const Sample& s : tr.samples) {
    CHECK(s.x.x == 0.1 + 0.5 * s.t);
    CHECK(s.x.y == 0.2 - 0.25 * s.t);
  }
}

TEST_CASE("force stays parallel to G0 and energy is conserved") {
  const Vec3 G{2 * kPi, 2 * kPi * 0.3, 0};
  const Complex V(0.6, 0.8);
  const FourierPotential pot = FourierPotential::single_pair(G, V, 1e-3);
  const double period = 2 * kPi / pendulum_frequency(pot);
  const Vec3 g_hat = normalized(G);
  const Vec3 perp{-g_hat.y, g_hat.x, 0};
  const Vec3 p0 = perp * 1.0;
  // Amplitude measured from the potential minimum at G.x + arg V = pi.
  auto start = [&](double amplitude) { return g_hat * ((kPi - amplitude - std::arg(V)) / norm(G)); };
  auto drift = [&](double amplitude, double periods) {
    const CrystalTrajectory tr = integrate(pot, start(amplitude), p0, periods * period, period / 200, 37);
    const double H0 = tr.samples.front().H;
    double d = 0.0;
    for (const Sample& s : tr.samples) {
      d = std::max(d, std::abs(s.H - H0) / std::abs(H0));
      CHECK(std::abs(dot(s.p - p0, perp)) < 1e-12);
    }
    return d;
  };
  for (double amplitude : {0.5, 1.0, 1.5, 1.8}) {
    CAPTURE(amplitude);
    CHECK(drift(amplitude, 1e4) <= 1e-6);
  }
  // Near the separatrix the error stays bounded.
  CHECK(drift(2.5, 1e4) <= drift(2.5, 1e3) * 1.01);
}

TEST_CASE("small oscillations follow the linearized pendulum") {
  const Vec3 G{2 * kPi, 0, 0};
  const FourierPotential pot = FourierPotential::single_pair(G, 1.0, 1e-3);
  const double w = pendulum_frequency(pot);
  CHECK(w == doctest::Approx(std::sqrt(2e-3 * norm2(G))));
  // Minimum of 2 eps cos(G.x) at G.x = pi; start slightly off it.
  const Vec3 x0{(kPi + 0.02) / G.x, 0, 0};
  const CrystalTrajectory tr = integrate(pot, x0, {0, 1, 0}, 20 * 2 * kPi / w, 2 * kPi / w / 400);
  const double T = measured_period(tr, {1, 0, 0});
  CHECK(std::abs(2 * kPi / T / w - 1.0) < 0.01);
}

TEST_CASE("resonant kick: direction and separatrix bounds") {
  const Vec3 G{2 * kPi, 0, 0};
  const double eps = 1e-3;
  const FourierPotential pot = FourierPotential::single_pair(G, 1.0, eps);
  const double w = pendulum_frequency(pot);
  const double true_half_width = std::sqrt(8.0 * eps);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ph(0.0, 2 * kPi);
  for (int i = 0; i < 16; ++i) {
    const double theta = ph(rng);
    const CrystalTrajectory tr = integrate(pot, {theta / G.x, 0, 0}, {0, 1, 0}, 3 * 2 * kPi / w, 2 * kPi / w / 200, 50);
    const KickReport k = momentum_kick(tr, pot);
    CHECK(k.alignment >= 1.0 - 1e-12);
    CHECK(k.separatrix_bound == doctest::Approx(std::sqrt(4.0 * eps)));
    CHECK(norm(k.dP) <= true_half_width * (1.0 + 1e-6));
    // Libration from rest at phase theta: |p| <= sqrt(4 eps |V| (1 + cos theta)).
    CHECK(norm(k.dP) <= std::sqrt(4.0 * eps * (1.0 + std::cos(theta))) * (1.0 + 1e-3) + 1e-12);
  }
  const KickReport k = momentum_kick(integrate(pot, {0, 0, 0}, {0, 1, 0}, 1.0, 0.01), pot);
  CHECK(k.estimate.x == doctest::Approx(std::sqrt(4.0 * eps)));
}

TEST_CASE("separatrix bound arithmetic") {
  const FourierPotential pot = FourierPotential::single_pair({1, 0, 0}, 1.0, 0.01);
  const CrystalTrajectory tr = integrate(pot, {0, 0, 0}, {0, 1, 0}, 1.0, 0.1);
  CHECK(momentum_kick(tr, pot).separatrix_bound == doctest::Approx(0.2));
}

TEST_CASE("non-resonant runs stay near straight lines") {
  const Vec3 G{2 * kPi, 0, 0};
  const Vec3 p0{0.8, 0.6, 0};
  auto deviation = [&](double eps) {
    const FourierPotential pot = FourierPotential::single_pair(G, Complex(0.7, 0.2), eps);
    const double dt = pot.shortest_period(norm(p0)) / 200;
    return straight_line_deviation(integrate(pot, {0.1, 0, 0}, p0, 1.0 / eps, dt, 5), pot);
  };
  const double c1 = deviation(0.01) / 0.01;
  const double c2 = deviation(0.005) / 0.005;
  const double c3 = deviation(0.003) / 0.003;
  CHECK(std::abs(c2 / c1 - 1.0) <= 0.25);
  CHECK(std::abs(c3 / c1 - 1.0) <= 0.25);
  CHECK(c1 < 10.0);
}

TEST_CASE("von Laue shift") {
  CHECK(vonlaue_shift(1.0, {1, 0, 0}, {2 * kPi, 0, 0}) == Vec3{1, 0, 0});
  CHECK(vonlaue_shift(1.0, {0, 2, 0}, {0, 0, 0}) == Vec3{});
  const Lattice sq = Lattice::square(0.7);
  for (const Vec3& g : sq.reciprocal_vectors(2)) CHECK(vonlaue_delay_residual(0.3, {0, 1, 0}, g, sq, 20) < 1e-10);
  CHECK(vonlaue_delay_residual(0.3, {0, 1, 0}, {1.0, 0, 0}, sq, 20) > 1e-3);
  CHECK_THROWS_AS(vonlaue_shift(0.0, {1, 0, 0}, {1, 0, 0}), ArgumentError);
}
