#pragma once

// Built-in world sheets used by the CLI registry and the tests.

#include <string>
#include <vector>

#include "wsheet/worldsheet.hpp"

namespace wsheet::fixtures {

/// X = (t, r cos u1, r sin u1) in R^3_1, u1 periodic on [0, 2 pi).
WorldSheetSpec cylinder(double r = 2.0, Interval t = {-1.0, 3.0});

/// X = (t, a t + c, u1) in R^3_1, u1 in [-1, 1]. Timelike only for |a| < 1.
WorldSheetSpec flat(double a = 0.5, double c = 0.0, Interval t = {-1.0, 1.0});

/// X = (t, R sin u1 cos u2, R sin u1 sin u2, R cos u1) in R^4_1, away from the poles.
WorldSheetSpec sphere(double R = 2.0, Interval t = {-1.0, 1.0});

/// X = (t, r cos u1, r sin u1, u2) in R^4_1.
WorldSheetSpec cylinder_line(double r = 2.0, Interval t = {-1.0, 1.0});

/// The sphere of `sphere` placed in R^5_1 (s = 2, k = 3).
WorldSheetSpec sphere5(double R = 2.0, Interval t = {-1.0, 1.0});

/// Registry lookup: cyl, flt, sph, cylline, sph5. Throws ConfigError for other names.
WorldSheetSpec by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace wsheet::fixtures
