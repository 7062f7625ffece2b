#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "panelkit/panel.hpp"
#include "panelkit/report.hpp"
#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PANELKIT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("panelkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    std::ofstream(path / name, std::ios::binary) << content;
    return (path / name).string();
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

// y = 2 d exactly
std::string noiseless_csv() {
  auto p = testing::random_panel(8, 6, 1, 3);
  std::ostringstream out;
  out << "unit,period,y,d\n";
  for (panelkit::Index i = 0; i < 8; ++i)
    for (panelkit::Index t = 0; t < 6; ++t)
      out << p.units()[i] << ',' << p.periods()[t] << ',' << 2.0 * p.series("d1")(i, t) << ','
          << p.series("d1")(i, t) << '\n';
  return out.str();
}

std::string random_csv(panelkit::Index N, panelkit::Index T, std::uint64_t seed) {
  auto p = testing::random_panel(N, T, 1, seed);
  std::map<std::string, Eigen::MatrixXd> s{{"y", p.series("y")}, {"d", p.series("d1")}};
  std::ostringstream out;
  panelkit::write_panel_csv(out, panelkit::BalancedPanel(p.units(), p.periods(), s));
  return out.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("estimate").status == 2);
  TempDir dir;
  auto csv = dir.file("r.csv", random_csv(6, 8, 1));
  CHECK(run("estimate --data " + csv + " --estimator ols --lags 1").status == 2);
  CHECK(run("estimate --data " + csv + " --split-convention sideways").status == 2);
  CHECK(run("mc --config " + dir / "missing.cfg").status == 2);
  CHECK(run("--help").status == 0);
}

TEST_CASE("data errors exit with 3") {
  TempDir dir;
  CHECK(run("estimate --data " + dir / "missing.csv").status == 3);
  auto bad = dir.file("bad.csv", "unit,period,y,d\nA,1,1,x\n");
  CHECK(run("estimate --data " + bad).status == 3);
  auto unbalanced = dir.file("unb.csv", "unit,period,y,d\nA,1,1,0\nA,2,1,1\nB,1,2,0\n");
  CHECK(run("estimate --data " + unbalanced + " --lags 0").status == 3);
  auto csv = dir.file("r.csv", random_csv(6, 4, 2));
  CHECK(run("estimate --data " + csv + " --lags 4").status == 3);
  CHECK(run("estimate --data " + csv + " --lags 1 --treatment z").status == 3);
}

TEST_CASE("estimation errors exit with 4") {
  TempDir dir;
  // treatment constant within units
  std::string text = "unit,period,y,d\n";
  for (int i = 0; i < 4; ++i)
    for (int t = 1; t <= 5; ++t) text += "u" + std::to_string(i) + "," + std::to_string(t) + "," +
                                         std::to_string(0.3 * i * t + (t % 2)) + "," + std::to_string(i) + "\n";
  auto csv = dir.file("c.csv", text);
  CHECK(run("estimate --data " + csv + " --lags 0").status == 4);
  auto r = dir.file("r.csv", random_csv(6, 8, 3));
  CHECK(run("estimate --data " + r + " --lags 1 --estimator dfe-a --trim 9").status == 4);
}

TEST_CASE("noiseless regression prints 2.00 and zero SE") {
  TempDir dir;
  auto csv = dir.file("n.csv", noiseless_csv());
  auto r = run("estimate --data " + csv + " --estimator fe --lags 0");
  CHECK(r.status == 0);
  CHECK(r.out.find("2.00") != std::string::npos);
  CHECK(r.out.find("(0.00)") != std::string::npos);
}

TEST_CASE("json output matches the printed table") {
  TempDir dir;
  auto csv = dir.file("r.csv", random_csv(12, 9, 4));
  auto json = dir / "out.json";
  auto r = run("estimate --data " + csv + " --estimator fe,dfe-a,dfe-ss --estimator ab --estimator dab-ss:2 --lags 1 "
               "--trim 3 --boot 20 --seed 5 --scale100 --json " + json);
  REQUIRE(r.status == 0);
  auto report = panelkit::report_from_json(slurp(json));
  REQUIRE(report.columns.size() == 5);
  CHECK(report.columns[1].label == "DFE-A");
  CHECK(report.columns[4].label == "DAB-SS2");
  CHECK(report.bootstrap_replications == 20);
  CHECK(panelkit::render_table(report, true) == r.out);

  // same seed, same bytes; a different thread count changes nothing
  auto again = dir / "again.json";
  auto r2 = run("estimate --data " + csv + " --estimator fe,dfe-a,dfe-ss,ab,dab-ss:2 --lags 1 --trim 3 --boot 20 "
                "--seed 5 --scale100 --threads 3 --json " + again);
  CHECK(r2.out == r.out);
  CHECK(slurp(again) == slurp(json));
}

TEST_CASE("monte carlo runs are byte-identical") {
  TempDir dir;
  auto cfg = dir.file("s.cfg",
                      "# smoke\nN = 20\nT = 8\nalpha = 0.4\nrho = 0.5\nestimators = fe, dfe-a:3, dfe-ss, ab, dab-ss:2\n"
                      "replications = 2\nseed = 11\n");
  auto a = run("mc --config " + cfg + " --json " + dir / "a.json" + " --csv " + dir / "a.csv");
  auto b = run("mc --config " + cfg + " --json " + dir / "b.json" + " --threads 2");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.csv").find("DAB-SS2") != std::string::npos);
  CHECK(a.out.find("DFE-A") != std::string::npos);
}

TEST_CASE("invalid study config") {
  TempDir dir;
  auto cfg = dir.file("bad.cfg", "stay_prob = 1.3\n");
  const std::string cmd = std::string(PANELKIT_CLI) + " mc --config " + cfg + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[512];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int raw = pclose(pipe);
  CHECK(WEXITSTATUS(raw) == 2);
  CHECK(out.find("InvalidConfig") != std::string::npos);
  CHECK(out.find("stay_prob") != std::string::npos);
}

TEST_CASE("describe") {
  TempDir dir;
  auto csv = dir.file("d.csv", "unit,period,y,d\nA,1,1,0\nA,2,3,1\nB,1,5,1\nB,2,7,1\n");
  auto r = run("describe --data " + csv);
  CHECK(r.status == 0);
  CHECK(r.out.find("units 2, periods 2") != std::string::npos);
  CHECK(r.out.find("4.0000") != std::string::npos);
  CHECK(r.out.find("0.7500") != std::string::npos);
}
