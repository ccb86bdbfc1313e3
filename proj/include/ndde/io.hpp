#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ndde/trajectory.hpp"

namespace ndde {

// {mass, charge, v_max, segments:[{t0,t1,coeffs[3][4]}], breakpoints:[{t,order,v_jump,a_jump}]}.
// Breakpoints are written for readers; on load they are recomputed from the segments.
nlohmann::json trajectory_to_json(const PiecewiseTrajectory& traj);
PiecewiseTrajectory trajectory_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);

// Shortest decimal form that round-trips (17 significant digits at most).
std::string format_double(double v);

}  // namespace ndde
