#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "wsheet/config.hpp"
#include "wsheet/errors.hpp"
#include "wsheet/runner.hpp"

using namespace wsheet;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) { return std::string(WSHEET_CONFIG_DIR) + "/" + name; }

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("wsheet_test_cli_" + tag);
  fs::remove_all(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    config_from_json(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kCylinderSheet = R"j("worldsheet": {"ambient_dim": 3, "s": 1, "k": 2,
    "X": ["t", "2*cos(u1)", "2*sin(u1)"], "u_domain": [[0, "2*pi"]], "u_periodic": [true], "t_domain": [-1, 3]})j";

std::string doc(const std::string& extra) {
  return std::string("{\"command\": \"verify\", ") + kCylinderSheet + (extra.empty() ? "" : ", " + extra) + "}";
}

}  // namespace

TEST_CASE("load the shipped cylinder config") {
  const RunConfig cfg = load_config(config_path("cylinder.json"));
  CHECK(cfg.command == Command::Verify);
  CHECK(cfg.spec.ambient_dim == 3);
  CHECK(cfg.spec.s == 1);
  CHECK(cfg.spec.k == 2);
  CHECK(cfg.spec.u_domain[0].hi == doctest::Approx(2 * M_PI).epsilon(1e-15));
  CHECK(cfg.spec.u_periodic[0]);
  CHECK(cfg.spec.t_domain.lo == -1.0);
  CHECK(cfg.spec.t_domain.hi == 3.0);
  CHECK(cfg.grid_count("u1") == 33);
  CHECK(cfg.verify_samples == 100);
  CHECK(cfg.out_dir == "out/cylinder");
  for (const char* f : {"flt_a2.json", "flat_half.json", "sphere_r5.json"}) CHECK_NOTHROW(load_config(config_path(f)));
}

TEST_CASE("dimension mismatch names all three fields") {
  const std::string e = error_of(R"({"command": "verify", "worldsheet": {"ambient_dim": 4, "s": 1, "k": 2,
      "X": ["t", "u1", "0", "0"], "u_domain": [[0, 1]], "t_domain": [0, 1]}})");
  CHECK(e.find("/worldsheet/s") != std::string::npos);
  CHECK(e.find("/worldsheet/k") != std::string::npos);
  CHECK(e.find("/worldsheet/ambient_dim") != std::string::npos);
}

TEST_CASE("schema errors carry JSON pointers") {
  CHECK(error_of(doc(R"("grid": {"u1": "many"})")).rfind("/grid/u1", 0) == 0);
  CHECK(error_of(doc(R"("bogus": 1)")).rfind("/bogus", 0) == 0);
  CHECK(error_of(doc(R"("tolerances": {"weingarten": -1})")).rfind("/tolerances/weingarten", 0) == 0);
  CHECK(error_of(doc(R"("tolerances": {"nonsense": 1e-3})")).rfind("/tolerances/nonsense", 0) == 0);
  CHECK(error_of(doc(R"("front": {"branches": [2]})")).rfind("/front/branches", 0) == 0);
  CHECK(error_of(R"({"command": "explode", )" + std::string(kCylinderSheet) + "}").rfind("/command", 0) == 0);
  CHECK(error_of(R"({"command": "verify"})").rfind("/worldsheet", 0) == 0);
  CHECK(error_of(R"({"command": "verify", "worldsheet": {"ambient_dim": 3, "s": 1, "k": 2,
      "X": ["t", "cos(u1", "0"], "u_domain": [[0, 1]], "t_domain": [0, 1]}})")
            .rfind("/worldsheet/X/1", 0) == 0);
  CHECK_FALSE(error_of("{not json").empty());
  CHECK_THROWS_AS(load_config(config_path("does_not_exist.json")), ConfigError);
}

TEST_CASE("defaults fill missing grid axes and tolerances") {
  RunConfig cfg = config_from_json(doc(""));
  finalize_grid(cfg);
  CHECK(cfg.grid_count("u1") == 33);
  CHECK(cfg.grid_count("t") == 33);
  CHECK(cfg.tol("weingarten") == 1e-5);
  CHECK(cfg.tol("front_rank") == 1e-6);
  CHECK(cfg.axis_names() == std::vector<std::string>{"u1", "t"});
  CHECK(fixture_config("sph5").axis_names() == std::vector<std::string>{"u1", "u2", "a1", "t"});
}

TEST_CASE("command-line overrides") {
  RunConfig cfg = fixture_config("cyl");
  apply_tolerance_override(cfg, "weingarten=2.5e-6");
  CHECK(cfg.tol("weingarten") == 2.5e-6);
  apply_grid_override(cfg, "t=17");
  CHECK(cfg.grid_count("t") == 17);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "nope=1"), ConfigError);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "weingarten=abc"), ConfigError);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "weingarten"), ConfigError);
  CHECK_THROWS_AS(apply_grid_override(cfg, "u7=10"), ConfigError);
  CHECK_THROWS_AS(apply_grid_override(cfg, "u1=2.5"), ConfigError);
  CHECK_THROWS_AS(apply_grid_override(cfg, "u1=2"), ConfigError);
  cfg.grid["u1"] = 2;
  CHECK_THROWS_AS(finalize_grid(cfg), ConfigError);
  CHECK_THROWS_AS(fixture_config("torus"), ConfigError);
}

TEST_CASE("run exit codes follow report failures") {
  RunConfig bad = load_config(config_path("flt_a2.json"));
  bad.out_dir = scratch_dir("flt_a2").string();
  const RunResult r = run(bad);
  CHECK(r.exit_code != 0);
  CHECK(fs::exists(fs::path(bad.out_dir) / "validate.json"));
  const auto rep = nlohmann::json::parse(read_file(fs::path(bad.out_dir) / "validate.json"));
  CHECK(report_failed(rep));
  CHECK(rep["violations"].size() > 0);

  RunConfig good = load_config(config_path("cylinder.json"));
  good.out_dir = scratch_dir("cylinder").string();
  const RunResult g = run(good);
  CHECK(g.exit_code == 0);
  const auto vrep = nlohmann::json::parse(read_file(fs::path(good.out_dir) / "verify.json"));
  CHECK_FALSE(report_failed(vrep));
}

TEST_CASE("front OBJ vertices lie on circles of radius |2 - t|") {
  RunConfig cfg = fixture_config("cyl");
  cfg.command = Command::Front;
  cfg.out_dir = scratch_dir("front").string();
  REQUIRE(run(cfg).exit_code == 0);
  std::ifstream in(fs::path(cfg.out_dir) / "front.obj");
  std::string line;
  std::size_t vertices = 0, faces = 0, lines = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x1, x2, t;
      ls >> x1 >> x2 >> t;
      worst = std::max(worst, std::abs(std::hypot(x1, x2) - std::abs(2 - t)));
      ++vertices;
    } else if (tag == "f") {
      ++faces;
    } else if (tag == "l") {
      ++lines;
    }
  }
  CHECK(vertices == 33u * 33u);
  CHECK(faces == 33u * 32u * 2u);
  CHECK(lines == 33u);
  CHECK(worst <= 1e-9);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "front.csv"));
}

TEST_CASE("reports are byte-identical across runs") {
  for (Command c : {Command::Verify, Command::Singular, Command::Curvature}) {
    RunConfig cfg = fixture_config("cyl");
    cfg.command = c;
    const RunResult a = run([&] { auto x = cfg; x.out_dir = scratch_dir("det_a").string(); return x; }());
    const RunResult b = run([&] { auto x = cfg; x.out_dir = scratch_dir("det_b").string(); return x; }());
    CHECK(a.files == b.files);
    CHECK(a.exit_code == b.exit_code);
  }
}

TEST_CASE("format_real round-trips") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    double x;
    const std::uint64_t bits = rng();
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    const std::string text = format_real(x);
    double back = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(res.ec == std::errc{});
    CHECK(back == x);
  }
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(-2.0) == "-2");
}

TEST_CASE("report formatting sorts keys") {
  const std::string s = dump_report(nlohmann::json{{"zeta", 1}, {"alpha", 2}});
  CHECK(s.find("alpha") < s.find("zeta"));
  CHECK(s.back() == '\n');
}
