#include "ndde/sewing.hpp"

#include "ndde/errors.hpp"

namespace ndde {

SewingChain propagate_chain(std::span<const PiecewiseTrajectory> trajectories, const DiscontinuityEvent& source,
                            std::size_t partner, int n_steps) {
  if (source.trajectory >= trajectories.size() || partner >= trajectories.size())
    throw ArgumentError("trajectory index out of range");
  if (source.trajectory == partner) throw ArgumentError("a chain needs two distinct trajectories");
  if (n_steps < 0) throw ArgumentError("n_steps must be non-negative");
  if (!trajectories[source.trajectory].contains(source.t)) throw DomainError("source event outside its trajectory");

  SewingChain chain;
  chain.source = source;
  chain.pair = {source.trajectory, partner};
  chain.events.push_back(source);

  DiscontinuityEvent cur = source;
  for (int k = 0; k < n_steps; ++k) {
    const std::size_t to = cur.trajectory == source.trajectory ? partner : source.trajectory;
    const Vec3 x = trajectories[cur.trajectory].eval(cur.t, Side::right).position;
    LightconeHit hit;
    try {
      hit = solve_lightcone(trajectories[to], x, cur.t, Branch::advanced);
    } catch (const DomainError&) {
      chain.truncated = true;
      break;
    }
    chain.hop_residuals.push_back(lightcone_residual(trajectories[to], x, cur.t, Branch::advanced, hit));
    cur = DiscontinuityEvent{to, hit.t_dev, cur.generation + 1};
    chain.events.push_back(cur);
  }
  return chain;
}

std::vector<double> chain_spacings(const SewingChain& chain) {
  if (chain.events.size() < 3) throw ArgumentError("chain needs at least 3 events to have spacings");
  std::vector<double> out;
  out.reserve(chain.events.size() - 2);
  for (std::size_t k = 2; k < chain.events.size(); ++k) out.push_back(chain.events[k].t - chain.events[k - 2].t);
  return out;
}

std::vector<double> chain_spacings(const SewingChain& chain, std::size_t trajectory) {
  if (chain.events.size() < 3) throw ArgumentError("chain needs at least 3 events to have spacings");
  std::vector<double> out;
  const DiscontinuityEvent* prev = nullptr;
  for (const auto& e : chain.events) {
    if (e.trajectory != trajectory) continue;
    if (prev) out.push_back(e.t - prev->t);
    prev = &e;
  }
  return out;
}

}  // namespace ndde
