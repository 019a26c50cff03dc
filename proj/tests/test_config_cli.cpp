#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "magnonet/cli.hpp"
#include "magnonet/config.hpp"
#include "magnonet/presets.hpp"

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace magnonet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("magnonet_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream s(text);
  for (std::string l; std::getline(s, l);) out.push_back(l);
  return out;
}

const char* kSweepYaml = R"(system:
  G_mhz: 4.5
  temperature_mk: 20
sweep:
  axis1: {parameter: delta_a1, lower: -10, upper: 10, points: 2}
  axis2: {parameter: delta_m1, lower: -10, upper: 10, points: 2}
  quantities: [E_m1m2]
)";

}  // namespace

TEST_CASE("parse_config defaults and overrides") {
  const RunConfig c = parse_config("system:\n  G_mhz: 2.6\n  opa_cavities: [1, 2]\n  kappa_mhz: [5, 6, 7]\n  g_mhz: 15\n");
  CHECK(c.system.G_mhz == 2.6);
  CHECK(c.system.opa_cavities == std::vector<int>{1, 2});
  CHECK(c.system.kappa_mhz == Triple{5, 6, 7});
  CHECK(c.system.g_mhz == Triple{15, 15, 15});
  CHECK(c.system.J12_mhz == 12);
  CHECK(c.system.temperature_mk == 20);
  CHECK_FALSE(c.sweep.has_value());

  const SystemParams p = to_system_params(c);
  CHECK(p.G == Triple{from_mhz(2.6), from_mhz(2.6), 0});
  CHECK(p.kappa[2] == from_mhz(7));
  CHECK(p.T == doctest::Approx(0.020));
  CHECK(p.omega_a[0] == from_mhz(1e4));

  const RunConfig empty = parse_config("");
  CHECK(to_system_params(empty).G[0] == from_mhz(4.5));
}

TEST_CASE("drive_with_opa switches off the OPA cavities' drive") {
  RunConfig c = parse_config("system:\n  opa_cavities: [2]\n  Omega_mhz: [1, 1, 1]\n  drive_with_opa: false\n");
  const SystemParams p = to_system_params(c);
  CHECK(p.Omega == Triple{from_mhz(1), 0, from_mhz(1)});
}

TEST_CASE("config errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("system:\n  G_mhz: 1\n  bogus: 3\n") == 3);
  CHECK(line_of("system:\n  kappa_mhz: [1, 2]\n") == 2);
  CHECK(line_of("system:\n  G_mhz: abc\n") == 2);
  CHECK(line_of("output:\n  format: xml\n") == 2);
  CHECK(line_of("system:\n  opa_cavities: [4]\n") == 2);
  CHECK(line_of("nonsense: 1\n") == 1);
  CHECK(line_of("sweep:\n  axis1: {parameter: nope, lower: 0, upper: 1, points: 3}\n  quantities: [R_min]\n") > 0);
  CHECK(line_of("system: [\n") > 0);

  try {
    parse_config("system:\n  kappa_mhz: -1\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") == 0);
  }
  CHECK_THROWS_AS(to_system_params(parse_config("system:\n  kappa_mhz: 0\n")), ConfigError);
}

TEST_CASE("dump and parse round trip") {
  for (const std::string& id : preset_ids()) {
    CAPTURE(id);
    RunConfig c = preset_config(id);
    c.system.G_mhz = 0.1 + 0.2;  // not a short decimal
    c.system.temperature_mk = 1.0 / 3.0;
    const RunConfig back = parse_config(dump_config(c));
    CHECK(dump_config(back) == dump_config(c));
    const SystemParams a = to_system_params(c);
    const SystemParams b = to_system_params(back);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    CHECK(back.sweep.has_value() == c.sweep.has_value());
    CHECK(back.temperature_sweep.has_value() == c.temperature_sweep.has_value());
  }
}

TEST_CASE("presets carry the reference parameter set") {
  const RunConfig f2 = preset_config("fig2");
  CHECK(f2.system.G_mhz == 4.5);
  CHECK(f2.system.opa_cavities == std::vector<int>{1});
  CHECK(f2.system.g_mhz == Triple{20, 20, 20});
  CHECK(f2.system.kappa_mhz == Triple{5, 5, 5});
  CHECK(f2.system.gamma_mhz == Triple{1, 1, 1});
  CHECK(f2.system.J12_mhz == 12);
  CHECK(f2.system.J23_mhz == 12);
  CHECK(f2.system.temperature_mk == 20);
  CHECK(f2.system.omega_a_mhz[0] == 1e4);
  REQUIRE(f2.sweep);
  CHECK(f2.sweep->axis1.parameter == "delta_a1");
  CHECK(f2.sweep->axis1.lower == -30);
  CHECK(f2.sweep->axis1.upper == 30);
  CHECK(f2.sweep->axis2->parameter == "delta_m1");
  CHECK(f2.sweep->quantities.size() == 6);

  const RunConfig f4 = preset_config("fig4");
  CHECK(f4.system.delta_a1_mhz == -10);
  CHECK(f4.system.delta_m1_mhz == 10);
  CHECK(f4.sweep->axis1.parameter == "G");
  CHECK(f4.sweep->axis2->parameter == "kappa1");

  CHECK(preset_config("fig5").system.G_mhz == 2.6);
  CHECK(preset_config("fig5").system.opa_cavities == std::vector<int>{1, 2});
  CHECK(preset_config("fig6").system.opa_cavities == std::vector<int>{1, 2, 3});

  const RunConfig f7 = preset_config("fig7");
  REQUIRE(f7.temperature_sweep);
  CHECK(f7.temperature_sweep->lower_mk == 10);
  CHECK(f7.temperature_sweep->upper_mk == 300);
  CHECK(f7.temperature_sweep->operating_points.size() == 4);

  CHECK_THROWS_AS(preset_config("fig8"), std::invalid_argument);
  for (const std::string& id : preset_ids()) CHECK_NOTHROW(parse_config(dump_config(preset_config(id))));
}

TEST_CASE("cli model dumps the matrices") {
  TempDir dir;
  const std::string cfg = dir.write("c.yaml", "system:\n  G_mhz: 4.5\n  delta_a1_mhz: -10\n  delta_m1_mhz: 10\n");
  const auto out = (dir.path / "model").string();
  const CliRun r = cli({"model", "--config", cfg, "--out", out});
  REQUIRE(r.code == kExitOk);
  const auto a = lines(slurp(fs::path(out) / "A.txt"));
  REQUIRE(a.size() == 12);
  CHECK(a[0].rfind("25.1327412287 ", 0) == 0);  // 2G - kappa1 = 2*pi*4
  CHECK(lines(slurp(fs::path(out) / "b.txt")).size() == 12);
  CHECK(slurp(fs::path(out) / "stability.txt").find("stable true") != std::string::npos);

  const std::string zero = dir.write(
      "z.yaml", "system:\n  G_mhz: 0\n  g_mhz: 0\n  J12_mhz: 0\n  J23_mhz: 0\n  linked_detunings: false\n");
  REQUIRE(cli({"model", "--config", zero, "--out", out}).code == kExitOk);
  const auto rows = lines(slurp(fs::path(out) / "A.txt"));
  for (int i = 0; i < 12; ++i) {
    std::istringstream s(rows[i]);
    double v;
    for (int j = 0; j < 12; ++j) {
      s >> v;
      if (i != j) CHECK(v == 0);
    }
  }

  // An unstable system still gets its matrices written.
  const std::string hot = dir.write("h.yaml", "system:\n  G_mhz: 20\n");
  const CliRun h = cli({"model", "--config", hot, "--out", out});
  CHECK(h.code == kExitOk);
  CHECK(slurp(fs::path(out) / "stability.txt").find("stable false") != std::string::npos);
  CHECK(lines(slurp(fs::path(out) / "A.txt"))[0].rfind("219.911485751 ", 0) == 0);
}

TEST_CASE("cli sweep writes csv and json") {
  TempDir dir;
  const std::string cfg = dir.write("s.yaml", kSweepYaml);
  const CliRun r = cli({"sweep", "--config", cfg});
  REQUIRE(r.code == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "delta_a1,delta_m1,stable,E_m1m2");
  CHECK(rows[1].rfind("-10,-10,1,", 0) == 0);
  CHECK(r.err.find("max E_m1m2 = ") != std::string::npos);

  const auto out = (dir.path / "t.json").string();
  const CliRun j = cli({"sweep", "--config", cfg, "--format", "json", "--out", out});
  REQUIRE(j.code == kExitOk);
  const std::string json = slurp(out);
  CHECK(json.find("\"delta_a1\"") != std::string::npos);
  CHECK(json.front() == '[');

  const CliRun g = cli({"sweep", "--config", cfg, "--grid", "3", "--threads", "2"});
  CHECK(lines(g.out).size() == 10);
}

TEST_CASE("cli steady, entangle and sweep-temp") {
  TempDir dir;
  const std::string cfg = dir.write("p.yaml", "system:\n  delta_a1_mhz: -10\n  delta_m1_mhz: 10\n");
  const CliRun s = cli({"steady", "--config", cfg});
  REQUIRE(s.code == kExitOk);
  CHECK(lines(s.out)[0] == "stable,N_a1,N_a2,N_a3,N_m1,N_m2,N_m3,abscissa");
  CHECK(s.err.find("weak excitation holds") != std::string::npos);

  const CliRun e = cli({"entangle", "--config", cfg});
  REQUIRE(e.code == kExitOk);
  CHECK(lines(e.out)[0] == "stable,E_m1m2,E_m1m3,E_m2m3,R_min");

  const std::string temp = dir.write("t.yaml", R"(system:
  G_mhz: 2.6
  opa_cavities: [1, 2, 3]
temperature_sweep:
  lower_mk: 10
  upper_mk: 100
  points: 4
  operating_points:
    - {quantity: E_m1m3, delta_a1_mhz: 0, delta_m1_mhz: 0}
)");
  const CliRun t = cli({"sweep-temp", "--config", temp});
  REQUIRE(t.code == kExitOk);
  const auto rows = lines(t.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "T,stable,E_m1m3");
  CHECK(rows[4].rfind("100,1,", 0) == 0);
}

TEST_CASE("cli exit codes") {
  TempDir dir;
  CHECK(cli({"sweep", "--config", dir.write("bad.yaml", "system:\n  bogus: 1\n")}).code == kExitConfigError);
  const CliRun bad = cli({"model", "--config", dir.write("bad2.yaml", "system:\n  G_mhz: x\n")});
  CHECK(bad.code == kExitConfigError);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(cli({"sweep", "--config", (dir.path / "missing.yaml").string()}).code == kExitIoError);
  CHECK(cli({"frobnicate"}).code == kExitConfigError);
  CHECK(cli({"reproduce", "fig9"}).code == kExitConfigError);
  CHECK(cli({"sweep", "--config", dir.write("nosweep.yaml", "system: {G_mhz: 1}\n")}).code == kExitConfigError);

  const std::string hot = dir.write("hot.yaml", std::string(kSweepYaml).replace(17, 3, "30 "));
  const CliRun h = cli({"sweep", "--config", hot});
  CHECK(h.code == kExitUnstable);
  CHECK(h.err.find("n/a") != std::string::npos);
  CHECK(cli({"steady", "--config", hot}).code == kExitUnstable);

  const std::string ok = dir.write("ok.yaml", kSweepYaml);
  const fs::path blocker = dir.path / "file";
  std::ofstream(blocker) << "x";
  CHECK(cli({"sweep", "--config", ok, "--out", (blocker / "sub" / "o.csv").string()}).code == kExitIoError);
}

TEST_CASE("cli reproduce writes table and summary") {
  TempDir dir;
  const auto out = (dir.path / "fig4.csv").string();
  const CliRun r = cli({"reproduce", "fig4", "--grid", "3", "--out", out});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(slurp(out)).size() == 10);
  CHECK(lines(slurp(out))[0] == "G,kappa1,stable,E_m1m2,E_m1m3,E_m2m3,R_min");
  const std::string summary = slurp(dir.path / "fig4.summary.txt");
  CHECK(summary.find("stable points: ") == 0);
  CHECK(r.out.find(summary) != std::string::npos);
}

TEST_CASE("shipped configuration files parse") {
  for (const auto& entry : fs::directory_iterator(MAGNONET_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    const RunConfig c = load_config(entry.path().string());
    CHECK_NOTHROW(to_system_params(c));
    if (c.sweep) CHECK_NOTHROW(to_sweep_spec(c));
    if (c.temperature_sweep) CHECK_NOTHROW(to_temperature_spec(c));
  }
  const RunConfig ex = load_config(std::string(MAGNONET_CONFIG_DIR) + "/example.yaml");
  CHECK(ex.system.delta_a1_mhz == -10);
  CHECK(ex.tolerances.lyapunov_method == "schur");
  CHECK(ex.temperature_sweep->operating_points.size() == 2);
}
