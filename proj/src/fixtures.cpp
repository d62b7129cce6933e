#include "wsheet/fixtures.hpp"

#include <charconv>
#include <numbers>

#include "wsheet/errors.hpp"

namespace wsheet::fixtures {

namespace {

std::string num(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  return x < 0 ? "(" + s + ")" : s;
}

constexpr double kPoleGap = 0.3;

}  // namespace

WorldSheetSpec cylinder(double r, Interval t) {
  const std::string R = num(r);
  return WorldSheetSpec::from_strings(3, 1, 2, {"t", R + "*cos(u1)", R + "*sin(u1)"},
                                      {{0.0, 2.0 * std::numbers::pi}}, t, {true});
}

WorldSheetSpec flat(double a, double c, Interval t) {
  return WorldSheetSpec::from_strings(3, 1, 2, {"t", num(a) + "*t + " + num(c), "u1"}, {{-1.0, 1.0}}, t);
}

WorldSheetSpec sphere(double R, Interval t) {
  const std::string r = num(R);
  return WorldSheetSpec::from_strings(
      4, 2, 2, {"t", r + "*sin(u1)*cos(u2)", r + "*sin(u1)*sin(u2)", r + "*cos(u1)"},
      {{kPoleGap, std::numbers::pi - kPoleGap}, {0.0, 2.0 * std::numbers::pi}}, t, {false, true});
}

WorldSheetSpec cylinder_line(double r, Interval t) {
  const std::string R = num(r);
  return WorldSheetSpec::from_strings(4, 2, 2, {"t", R + "*cos(u1)", R + "*sin(u1)", "u2"},
                                      {{0.0, 2.0 * std::numbers::pi}, {-1.0, 1.0}}, t, {true, false});
}

WorldSheetSpec sphere5(double R, Interval t) {
  const std::string r = num(R);
  return WorldSheetSpec::from_strings(
      5, 2, 3, {"t", r + "*sin(u1)*cos(u2)", r + "*sin(u1)*sin(u2)", r + "*cos(u1)", "0"},
      {{kPoleGap, std::numbers::pi - kPoleGap}, {0.0, 2.0 * std::numbers::pi}}, t, {false, true});
}

WorldSheetSpec by_name(const std::string& name) {
  if (name == "cyl") return cylinder();
  if (name == "flt") return flat();
  if (name == "sph") return sphere();
  if (name == "cylline") return cylinder_line();
  if (name == "sph5") return sphere5();
  throw ConfigError("unknown fixture '" + name + "' (expected cyl, flt, sph, cylline or sph5)");
}

std::vector<std::string> names() { return {"cyl", "flt", "sph", "cylline", "sph5"}; }

}  // namespace wsheet::fixtures
