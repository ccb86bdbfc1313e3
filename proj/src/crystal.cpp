#include "ndde/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ndde/errors.hpp"

namespace ndde::crystal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase_real(Complex v, double theta) { return v.real() * std::cos(theta) - v.imag() * std::sin(theta); }

}  // namespace

Lattice::Lattice(std::vector<Vec3> basis) : basis_(std::move(basis)) {
  if (basis_.size() != 2 && basis_.size() != 3) throw ArgumentError("lattice needs 2 or 3 basis vectors");
  if (basis_.size() == 2 && (basis_[0].z != 0.0 || basis_[1].z != 0.0))
    throw ArgumentError("2D lattice vectors must lie in the xy plane");
  const Vec3 a1 = basis_[0];
  const Vec3 a2 = basis_[1];
  const Vec3 a3 = basis_.size() == 3 ? basis_[2] : Vec3{0.0, 0.0, 1.0};
  const double vol = dot(a1, cross(a2, a3));
  if (!(std::abs(vol) > 1e-300)) throw ArgumentError("lattice basis is degenerate");
  reciprocal_ = {kTwoPi * cross(a2, a3) / vol, kTwoPi * cross(a3, a1) / vol, kTwoPi * cross(a1, a2) / vol};
  reciprocal_.resize(basis_.size());

  double scale = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i) scale = std::max(scale, norm(basis_[i]) * norm(reciprocal_[i]));
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const double want = i == j ? kTwoPi : 0.0;
      if (std::abs(dot(reciprocal_[i], basis_[j]) - want) > 1e-12 * scale)
        throw ArgumentError("reciprocal basis failed b_i . a_j = 2 pi delta_ij");
    }
}

Lattice Lattice::square(double spacing) {
  if (!(spacing > 0.0)) throw ArgumentError("lattice spacing must be positive");
  return Lattice({Vec3{spacing, 0.0, 0.0}, Vec3{0.0, spacing, 0.0}});
}

Lattice Lattice::oblique(const Vec3& a1, const Vec3& a2) { return Lattice({a1, a2}); }

Vec3 Lattice::site(int i, int j, int k) const {
  Vec3 r = basis_[0] * i + basis_[1] * j;
  if (basis_.size() == 3) r += basis_[2] * k;
  return r;
}

Vec3 Lattice::reciprocal_vector(int h, int k, int l) const {
  Vec3 g = reciprocal_[0] * h + reciprocal_[1] * k;
  if (reciprocal_.size() == 3) g += reciprocal_[2] * l;
  return g;
}

std::vector<Vec3> Lattice::reciprocal_vectors(int max_index) const {
  std::vector<Vec3> out;
  const int lmax = dimension() == 3 ? max_index : 0;
  for (int h = -max_index; h <= max_index; ++h)
    for (int k = -max_index; k <= max_index; ++k)
      for (int l = -lmax; l <= lmax; ++l)
        if (h != 0 || k != 0 || l != 0) out.push_back(reciprocal_vector(h, k, l));
  return out;
}

FourierPotential::FourierPotential(std::vector<FourierTerm> terms, double epsilon)
    : terms_(std::move(terms)), epsilon_(epsilon) {
  if (!(epsilon_ >= 0.0) || !std::isfinite(epsilon_)) throw ArgumentError("epsilon must be non-negative");
  for (const FourierTerm& t : terms_) {
    if (!is_finite(t.G) || !std::isfinite(t.V.real()) || !std::isfinite(t.V.imag()))
      throw ArgumentError("Fourier terms must be finite");
    const double gscale = 1.0 + norm(t.G);
    const auto partner = std::find_if(terms_.begin(), terms_.end(), [&](const FourierTerm& o) {
      return norm(o.G + t.G) <= 1e-12 * gscale;
    });
    if (partner == terms_.end()) throw ArgumentError("potential not real: missing -G partner");
    if (std::abs(partner->V - std::conj(t.V)) > 1e-14 * (1.0 + std::abs(t.V)))
      throw ArgumentError("potential not real: V_{-G} != conj(V_G)");
  }
}

FourierPotential FourierPotential::single_pair(const Vec3& G0, Complex v, double epsilon) {
  if (norm(G0) == 0.0) throw ArgumentError("G0 must be nonzero");
  return FourierPotential({{G0, v}, {-G0, std::conj(v)}}, epsilon);
}

double FourierPotential::value(const Vec3& x) const {
  double s = 0.0;
  for (const FourierTerm& t : terms_) s += phase_real(t.V, dot(t.G, x));
  return epsilon_ * s;
}

Vec3 FourierPotential::force(const Vec3& x) const {
  // -d/dx eps V e^{iG.x} = -i eps G V e^{iG.x}; real part eps G (Re V sin + Im V cos).
  Vec3 f;
  for (const FourierTerm& t : terms_) {
    const double th = dot(t.G, x);
    f += t.G * (t.V.real() * std::sin(th) + t.V.imag() * std::cos(th));
  }
  return f * epsilon_;
}

const FourierTerm& FourierPotential::least_modulus() const {
  const FourierTerm* best = nullptr;
  for (const FourierTerm& t : terms_) {
    const double g = norm(t.G);
    if (g == 0.0) continue;
    if (!best || g < norm(best->G) * (1.0 - 1e-12)) best = &t;
  }
  if (!best) throw ArgumentError("potential has no nonzero reciprocal vector");
  return *best;
}

double FourierPotential::shortest_period(double speed) const {
  double gmax = 0.0;
  for (const FourierTerm& t : terms_) gmax = std::max(gmax, norm(t.G));
  double period = std::numeric_limits<double>::infinity();
  if (gmax > 0.0 && speed > 0.0) period = kTwoPi / (gmax * speed);
  if (epsilon_ > 0.0 && gmax > 0.0) period = std::min(period, kTwoPi / pendulum_frequency(*this));
  return period;
}

double hamiltonian(const Vec3& p, const Vec3& x, const FourierPotential& pot) {
  return 0.5 * norm2(p) + pot.value(x);
}

GeneratingCoefficients generating_coefficients(const FourierPotential& pot, const Vec3& P, double tol) {
  GeneratingCoefficients out;
  const double pn = norm(P);
  for (const FourierTerm& t : pot.terms()) {
    const double gp = dot(t.G, P);
    if (std::abs(gp) <= tol * norm(t.G) * pn) {
      out.resonant.push_back(t.G);
      continue;
    }
    // Chosen so that V_G + i (G.P) F_G = 0.
    out.coefficients.push_back({t.G, Complex(0.0, 1.0) * t.V / gp});
  }
  return out;
}

double first_order_residual(const FourierPotential& pot, const Vec3& P, const std::vector<FourierTerm>& F) {
  double worst = 0.0;
  for (const FourierTerm& f : F) {
    const auto it = std::find_if(pot.terms().begin(), pot.terms().end(),
                                 [&](const FourierTerm& t) { return t.G == f.G; });
    if (it == pot.terms().end()) throw ArgumentError("coefficient for a G not in the potential");
    worst = std::max(worst, std::abs(it->V + Complex(0.0, dot(f.G, P)) * f.V));
  }
  return worst;
}

double first_order_residual(const FourierPotential& pot, const Vec3& P) {
  return first_order_residual(pot, P, generating_coefficients(pot, P).coefficients);
}

std::vector<Vec3> resonance_set(const FourierPotential& pot, const Vec3& P, double tol) {
  std::vector<Vec3> out;
  const double pn = norm(P);
  for (const FourierTerm& t : pot.terms())
    if (std::abs(dot(t.G, P)) <= tol * norm(t.G) * pn) out.push_back(t.G);
  return out;
}

std::vector<Vec3> resonance_set(const Lattice& lattice, const Vec3& P, double tol, int max_index) {
  std::vector<Vec3> out;
  const double pn = norm(P);
  for (const Vec3& g : lattice.reciprocal_vectors(max_index))
    if (std::abs(dot(g, P)) <= tol * norm(g) * pn) out.push_back(g);
  return out;
}

Vec3 transformed_momentum(const FourierPotential& pot, const Vec3& x, const Vec3& p) {
  // p = P + eps sum i G F_G e^{iG.x} = P - eps sum G Re(V e^{iG.x}) / (G.P).
  Vec3 P = p;
  for (int it = 0; it < 50; ++it) {
    Vec3 corr;
    for (const FourierTerm& t : pot.terms()) {
      const double gp = dot(t.G, P);
      if (std::abs(gp) <= kResonanceTol * norm(t.G) * norm(P))
        throw ArgumentError("transformed momentum undefined at a resonance");
      corr += t.G * (phase_real(t.V, dot(t.G, x)) / gp);
    }
    const Vec3 next = p + corr * pot.epsilon();
    const double change = norm(next - P);
    P = next;
    if (change <= 1e-15 * (1.0 + norm(P))) break;
  }
  return P;
}

CrystalTrajectory integrate(const FourierPotential& pot, const Vec3& x0, const Vec3& p0, double T, double dt,
                            int sample_every) {
  if (!(dt > 0.0) || !(T > 0.0)) throw ArgumentError("integration needs dt > 0 and T > 0");
  if (sample_every < 1) throw ArgumentError("sample_every must be at least 1");
  const auto n = static_cast<long long>(std::ceil(T / dt - 1e-9));
  CrystalTrajectory out;
  out.samples.reserve(static_cast<std::size_t>(n / sample_every + 2));
  Vec3 x = x0;
  Vec3 p = p0;
  out.samples.push_back({0.0, x, p, hamiltonian(p, x, pot)});
  Vec3 f = pot.force(x);
  double t = 0.0;
  for (long long i = 1; i <= n; ++i) {
    const double h = i == n ? T - static_cast<double>(n - 1) * dt : dt;
    const Vec3 p_half = p + f * (0.5 * h);
    const Vec3 x_new = x + p_half * h;
    const Vec3 f_new = pot.force(x_new);
    const Vec3 p_new = p_half + f_new * (0.5 * h);
    if (!is_finite(x_new) || !is_finite(p_new)) {
      out.failed_at = t;
      if (out.samples.back().t != t) out.samples.push_back({t, x, p, hamiltonian(p, x, pot)});
      return out;
    }
    x = x_new;
    p = p_new;
    f = f_new;
    t = i == n ? T : static_cast<double>(i) * dt;
    if (i % sample_every == 0 || i == n) out.samples.push_back({t, x, p, hamiltonian(p, x, pot)});
  }
  return out;
}

double pendulum_frequency(const FourierPotential& pot) {
  const FourierTerm& g0 = pot.least_modulus();
  return std::sqrt(2.0 * pot.epsilon() * std::abs(g0.V) * norm2(g0.G));
}

KickReport momentum_kick(const CrystalTrajectory& trajectory, const FourierPotential& pot) {
  if (trajectory.samples.size() < 2) throw ArgumentError("kick needs a trajectory with at least two samples");
  KickReport k;
  k.dP = trajectory.samples.back().p - trajectory.samples.front().p;
  const double dn = norm(k.dP);
  for (const FourierTerm& t : pot.terms()) {
    const double gn = norm(t.G);
    if (gn == 0.0) continue;
    const double c = dn > 0.0 ? std::abs(dot(k.dP, t.G)) / (dn * gn) : 0.0;
    if (c > k.alignment || k.nearest_G == Vec3{}) {
      k.alignment = c;
      k.nearest_G = t.G;
    }
  }
  const FourierTerm& g0 = pot.least_modulus();
  k.separatrix_bound = std::sqrt(4.0 * pot.epsilon() * std::abs(g0.V));
  k.estimate = normalized(g0.G) * k.separatrix_bound;
  return k;
}

double straight_line_deviation(const CrystalTrajectory& trajectory, const FourierPotential& pot) {
  if (trajectory.samples.empty()) throw ArgumentError("empty trajectory");
  const Sample& s0 = trajectory.samples.front();
  const Vec3 P = transformed_momentum(pot, s0.x, s0.p);
  double worst = 0.0;
  for (const Sample& s : trajectory.samples) worst = std::max(worst, norm(s.x - s0.x - P * (s.t - s0.t)));
  return worst;
}

Vec3 vonlaue_shift(double L, const Vec3& u, const Vec3& G) {
  if (!(L > 0.0)) throw ArgumentError("period L must be positive");
  const double un = norm(u);
  if (!(un > 0.0)) throw ArgumentError("velocity u must be nonzero");
  return G * (L * un / kTwoPi);
}

double vonlaue_delay_residual(double L, const Vec3& u, const Vec3& G, const Lattice& lattice, int n_side) {
  if (n_side < 1) throw ArgumentError("patch side must be positive");
  const Vec3 du_hat = vonlaue_shift(L, u, G) / norm(u);
  double worst = 0.0;
  const int kmax = lattice.dimension() == 3 ? n_side : 1;
  for (int i = 0; i < n_side; ++i)
    for (int j = 0; j < n_side; ++j)
      for (int k = 0; k < kmax; ++k) {
        const double dt = dot(du_hat, lattice.site(i, j, k));
        worst = std::max(worst, std::abs(dt - std::round(dt / L) * L));
      }
  return worst;
}

}  // namespace ndde::crystal
