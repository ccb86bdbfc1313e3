#include "ndde/io.hpp"

#include <charconv>
#include <cmath>

#include "ndde/errors.hpp"

namespace ndde {

nlohmann::json to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) throw ArgumentError("vector must be a 2- or 3-element array");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.size() == 3 ? j.at(2).get<double>() : 0.0};
}

nlohmann::json trajectory_to_json(const PiecewiseTrajectory& traj) {
  nlohmann::json segs = nlohmann::json::array();
  for (const Segment& s : traj.segments()) segs.push_back({{"t0", s.t_start}, {"t1", s.t_end}, {"coeffs", s.coeffs}});
  nlohmann::json bps = nlohmann::json::array();
  for (const Breakpoint& b : traj.breakpoints())
    bps.push_back({{"t", b.t}, {"order", b.order}, {"v_jump", b.v_jump}, {"a_jump", b.a_jump}});
  return {{"mass", traj.mass()}, {"charge", traj.charge()}, {"v_max", traj.v_max()}, {"segments", segs},
          {"breakpoints", bps}};
}

PiecewiseTrajectory trajectory_from_json(const nlohmann::json& j) {
  try {
    std::vector<Segment> segs;
    for (const auto& js : j.at("segments")) {
      Segment s;
      s.t_start = js.at("t0").get<double>();
      s.t_end = js.at("t1").get<double>();
      s.coeffs = js.at("coeffs").get<std::array<std::array<double, 4>, 3>>();
      segs.push_back(s);
    }
    return PiecewiseTrajectory(std::move(segs), j.at("mass").get<double>(), j.at("charge").get<double>(),
                               j.value("v_max", kDefaultVmax));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed trajectory JSON: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace ndde
