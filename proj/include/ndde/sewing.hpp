#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ndde/lightcone.hpp"
#include "ndde/trajectory.hpp"

namespace ndde {

struct DiscontinuityEvent {
  std::size_t trajectory = 0;
  double t = 0.0;
  int generation = 0;
};

struct SewingChain {
  DiscontinuityEvent source;
  std::pair<std::size_t, std::size_t> pair;  // (source trajectory, partner)
  std::vector<DiscontinuityEvent> events;    // events[0] == source
  std::vector<double> hop_residuals;         // lightcone residual of each hop
  bool truncated = false;                    // span ran out before n_steps hops
};

// Forward chain: each event on one trajectory is seen in the advanced
// lightcone of the other, t_{n+1} = t_n + |x_a(t_n) - x_b(t_{n+1})|, alternating.
SewingChain propagate_chain(std::span<const PiecewiseTrajectory> trajectories, const DiscontinuityEvent& source,
                            std::size_t partner, int n_steps);

// Same-trajectory revisit spacings t_k - t_{k-2}, k >= 2, in event order.
std::vector<double> chain_spacings(const SewingChain& chain);

// Spacings of revisits to a single trajectory only.
std::vector<double> chain_spacings(const SewingChain& chain, std::size_t trajectory);

}  // namespace ndde
