#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
  nlohmann::ordered_json json() const { return nlohmann::ordered_json::parse(out); }
};

Run kcone(const std::string& args) {
  const std::string cmd = std::string(KCONE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "kcone_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("metric at the P1XP1 default point") {
  auto r = kcone("metric P1XP1 --at 1,1");
  REQUIRE(r.code == 0);
  auto j = r.json();
  CHECK(j["command"] == "metric");
  CHECK(j["form"] == "P1XP1");
  CHECK(j["outputs"]["vol"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));
  auto g = j["outputs"]["gram"];
  CHECK(g[0][0].get<double>() == doctest::Approx(1.0));
  CHECK(std::abs(g[0][1].get<double>()) <= 1e-15);
  CHECK(g[1][1].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("report layout") {
  auto j = kcone("metric BLP2").json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "form", "inputs", "outputs", "checks"});
  CHECK(j["outputs"]["vol"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("LOR3 curvature") {
  auto r = kcone("curvature LOR3 --at 1,0,0 --sectional 0,1,0 0,0,1 --ricci --scalar");
  REQUIRE(r.code == 0);
  auto o = r.json()["outputs"];
  CHECK(o["sectional"].get<double>() == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(o["scalar"].get<double>() == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(o["ricci"][1][1].get<double>() == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("exit codes") {
  auto bad = kcone("metric P1XP1 --at 1,-1");
  CHECK(bad.code == 2);
  CHECK(bad.json()["error"]["kind"] == "NonPositiveVolume");

  auto indef = kcone("metric CY3GEN --at 1,-1");
  CHECK(indef.code == 2);
  CHECK(indef.json()["error"]["kind"] == "IndefiniteMetric");

  CHECK(kcone("").code == 1);
  CHECK(kcone("no-such-command").code == 1);
  CHECK(kcone("metric NOPE").code == 1);
  CHECK(kcone("metric P1XP1 --at 1,2,3").code == 1);
  CHECK(kcone("metric P1XP1 --at 1,x").code == 1);

  auto swap = kcone("pullback P1XP1 P1XP1 --matrix \"0,1;1,0\"");
  CHECK(swap.code == 0);
  CHECK(swap.json()["outputs"]["isometric"] == true);
  auto shear = kcone("pullback P1XP1 P1XP1 --matrix \"1,0.5;0,1\"");
  CHECK(shear.code == 3);
  CHECK(shear.json()["outputs"]["isometric"] == false);
}

TEST_CASE("manifold files") {
  auto path = scratch("quintic.json");
  {
    std::ofstream f(path);
    f << R"({"name": "MYQ", "dim": 3, "h11": 1, "intersection": [{"index": [1, 1, 1], "value": "5"}]})";
  }
  auto r = kcone("metric " + path.string());
  REQUIRE(r.code == 0);
  CHECK(r.json()["form"] == "MYQ");
  CHECK(r.json()["outputs"]["vol"].get<double>() == doctest::Approx(5.0 / 6.0));

  auto broken = scratch("broken.json");
  {
    std::ofstream f(broken);
    f << R"({"name": "X", "dim": 2, "h11": 3, "intersection": [{"index": [1, 2, 3], "value": 1}]})";
  }
  auto e = kcone("info " + broken.string());
  CHECK(e.code == 1);
  CHECK(e.json()["error"]["kind"] == "DimensionError");

  auto info = kcone("info CY3GEN").json();
  CHECK(info["outputs"]["manifold"]["h11"] == 2);
}

TEST_CASE("geodesic csv export") {
  auto csv = scratch("radial.csv");
  auto r = kcone("geodesic QUINTIC --at 1 --v 0.333333333333333333 --T 1 --steps 100 --csv " + csv.string());
  REQUIRE(r.code == 0);
  std::ifstream in(csv);
  std::string header, line, last;
  std::getline(in, header);
  CHECK(header == "t,x1,speed");
  int rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  CHECK(rows == 101);
  std::stringstream ss(last);
  std::string t, x;
  std::getline(ss, t, ',');
  std::getline(ss, x, ',');
  CHECK(std::stod(t) == doctest::Approx(1.0));
  CHECK(std::stod(x) == doctest::Approx(std::exp(1.0 / 3.0)).epsilon(1e-8));
}

TEST_CASE("probe verdicts") {
  CHECK(kcone("probe P1XP1 --alpha 1,0 --omega 1,1").json()["outputs"]["verdict"] == "DIVERGENT");
  CHECK(kcone("probe BLP2 --alpha 1,0 --omega 2,-1").json()["outputs"]["verdict"] == "CONVERGENT");
}

TEST_CASE("algebra, split and connection") {
  auto a = kcone("algebra LOR3 --derivations --kn --constant-curvature").json();
  CHECK(a["outputs"]["derivations"].size() == 1);
  CHECK(a["outputs"]["constant_curvature_primitive"]["constant"] == true);
  auto s = kcone("split QUINTIC --at 1").json();
  CHECK(s["outputs"]["t"].get<double>() == doctest::Approx(std::log(5.0 / 6.0)));
  auto c = kcone("connection P1XP1 --at 1,1 --z 1,0 --u 1,0").json();
  CHECK(c["outputs"]["nabla_z_u"][0].get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("verify is green and deterministic") {
  auto first = kcone("verify");
  CHECK(first.code == 0);
  auto second = kcone("verify");
  CHECK(first.out == second.out);
  auto j = first.json();
  CHECK(j["outputs"]["pass"] == true);
  CHECK(j["outputs"]["criteria"].size() == 13);
  for (const auto& c : j["checks"]) CHECK(c["pass"] == true);

  auto subset = kcone("verify LOR3 QUINTIC");
  CHECK(subset.code == 0);
}
