// End-to-end checks of the command line tool: exit codes per error class,
// artifact schemas, flag/config-file precedence, cache round trips, and byte
// determinism of repeated runs.  The binary under test comes from the
// CIRCLELAB_BIN environment variable.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string& bin() {
  static const std::string b = [] {
    const char* e = std::getenv("CIRCLELAB_BIN");
    return e ? std::string(e) : std::string();
  }();
  return b;
}

fs::path tmp_root() {
  static const fs::path p = [] {
    fs::path root = fs::temp_directory_path() / "circlelab_cli_tests";
    fs::remove_all(root);
    fs::create_directories(root);
    return root;
  }();
  return p;
}

struct RunResult {
  int code = -1;
  std::string out;  // stdout + stderr
};

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path cap = tmp_root() / ("stdout_" + std::to_string(counter++) + ".txt");
  const std::string cmd = bin() + " " + args + " >" + cap.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
  std::ifstream f(cap, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> snap;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file())
      snap[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
  return snap;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("binary is configured") {
  REQUIRE_FALSE(bin().empty());
  REQUIRE(fs::exists(bin()));
}

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("arcs --help").code == 0);
  CHECK(run("").code == 2);                    // missing subcommand
  CHECK(run("arcs --bogus 1").code == 2);      // unknown flag
  CHECK(run("no-such-command").code == 2);
}

TEST_CASE("config errors exit 3") {
  const fs::path dir = tmp_root() / "cfg";
  fs::create_directories(dir);
  // library rejects the parameter range
  CHECK(run("arcs --s 1.5 --k 2 --X 64 --out " + (dir / "a").string()).code == 3);
  // unknown key in the config file
  const fs::path badkey = dir / "badkey.json";
  std::ofstream(badkey) << "{\"bogus\": 1}\n";
  CHECK(run("sieve --config " + badkey.string() + " --out " + (dir / "b").string()).code == 3);
  // wrong type in the config file
  const fs::path badtype = dir / "badtype.json";
  std::ofstream(badtype) << "{\"s\": \"four\"}\n";
  CHECK(run("arcs --config " + badtype.string() + " --out " + (dir / "c").string()).code == 3);
  // unreadable config file
  CHECK(run("arcs --config " + (dir / "missing.json").string()).code == 3);
  // malformed JSON
  const fs::path badjson = dir / "bad.json";
  std::ofstream(badjson) << "{not json";
  CHECK(run("arcs --config " + badjson.string()).code == 3);
}

TEST_CASE("capacity exits 4, stalled refinement exits 5, invariant violation exits 6") {
  const fs::path dir = tmp_root() / "codes";
  fs::create_directories(dir);
  CHECK(run("sieve --k 2 --X 1000 --table-capacity 10 --out " + (dir / "cap").string()).code == 4);
  CHECK(run("moment-scan --s 4 --k 2 --X 64 --quad-max-doublings 0 --out " +
            (dir / "nc").string()).code == 5);
  // forced arc cutoff makes neighbouring arcs overlap
  CHECK(run("arcs --s 4 --k 2 --X 64 --P 8 --out " + (dir / "inv").string()).code == 6);
}

TEST_CASE("arcs artifact matches the dissection census") {
  const fs::path dir = tmp_root() / "arcs1000";
  const RunResult r = run("arcs --s 4 --k 2 --X 1000 --out " + dir.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["version"] == "0.1.0");
  CHECK(j["config_hash"].get<std::string>().size() == 16);

  const auto lines = lines_of(slurp(dir / "arcs.csv"));
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0].rfind("# circlelab 0.1.0 config=", 0) == 0);
  CHECK(lines[1] == "q,a,center,halfwidth");
  // P = 1000^(4/35) is just above 2: exactly phi(1) + phi(2) = 2 arcs
  CHECK(lines.size() - 2 == 2);
  CHECK(j["count"].get<int>() == 2);
  const auto row0 = split_csv(lines[2]);
  REQUIRE(row0.size() == 4);
  CHECK(row0[0] == "1");
  CHECK(row0[1] == "0");
}

TEST_CASE("flags override config file values") {
  const fs::path dir = tmp_root() / "override";
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << "{\"s\": 4.0, \"k\": 2, \"X\": 1000}\n";

  const RunResult file_only =
      run("arcs --config " + cfg.string() + " --out " + (dir / "a").string());
  REQUIRE(file_only.code == 0);
  CHECK(json::parse(file_only.out)["count"].get<int>() == 2);  // X = 1000 from the file

  const RunResult flag_wins =
      run("arcs --config " + cfg.string() + " --X 64 --out " + (dir / "b").string());
  REQUIRE(flag_wins.code == 0);
  CHECK(json::parse(flag_wins.out)["count"].get<int>() == 1);  // X = 64: P < 2
}

TEST_CASE("verify-kernel single row matches the even closed form") {
  const fs::path dir = tmp_root() / "vk64";
  const RunResult r = run("verify-kernel --s 4 --X 64 --no-svg --out " + dir.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["As"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  // moment (2X^3+X)/3 vs main term (2/3)X^3: error X/3, scaled error 1/(3X)
  CHECK(j["max_scaled_error"].get<double>() == doctest::Approx(1.0 / 192.0).epsilon(1e-4));

  const auto lines = lines_of(slurp(dir / "kernel.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[1] == "X,s,moment,main_term,error,scaled_error");
  const auto row = split_csv(lines[2]);
  REQUIRE(row.size() == 6);
  CHECK(std::stod(row[2]) == doctest::Approx(174784.0).epsilon(1e-9));
  CHECK(std::stod(row[4]) == doctest::Approx(64.0 / 3.0).epsilon(1e-4));
  CHECK_FALSE(fs::exists(dir / "kernel.svg"));  // --no-svg respected
}

TEST_CASE("table cache round trip") {
  const fs::path dir = tmp_root() / "cache";
  fs::create_directories(dir);
  const std::string cache = (dir / "t.bin").string();
  const std::string args = "sieve --k 3 --X 500 --table-cache " + cache + " --out ";

  const RunResult first = run(args + (dir / "a").string());
  REQUIRE(first.code == 0);
  const json j1 = json::parse(first.out);
  CHECK(j1["loaded_from_cache"] == false);
  REQUIRE(fs::exists(cache));

  const RunResult second = run(args + (dir / "b").string());
  REQUIRE(second.code == 0);
  const json j2 = json::parse(second.out);
  CHECK(j2["loaded_from_cache"] == true);
  CHECK(j1["sum"] == j2["sum"]);
  CHECK(j1["max_value"] == j2["max_value"]);

  // a cache written for different parameters is rejected, not silently used
  CHECK(run("sieve --k 2 --X 500 --table-cache " + cache + " --out " +
            (dir / "c").string()).code == 3);
}

TEST_CASE("predict artifact carries the gamma series") {
  const fs::path dir = tmp_root() / "predict";
  const RunResult r =
      run("predict --s 4 --k 2 --X 1000 --p-trunc 3 --L 0 --out " + dir.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(slurp(dir / "predict.json"));
  CHECK(j["s"].get<double>() == 4.0);
  CHECK(j["k"].get<int>() == 2);
  CHECK(j["X"].get<int>() == 1000);
  CHECK(j["L"].get<int>() == 0);
  REQUIRE(j["gamma"].is_array());
  CHECK(j["gamma"].size() == 1);
  CHECK(j["gamma"][0].get<double>() > 0.0);
  CHECK(j["prediction"].get<double>() > 0.0);
  CHECK(j["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("full-report reruns are byte identical") {
  const fs::path dir = tmp_root() / "report";
  const std::string args = "full-report --s 4 --k 2 --X 256 --samples 50 --p-trunc 5 --seed 7 "
                           "--quad-rel-tol 1e-5 --out " + dir.string();
  const RunResult r1 = run(args);
  REQUIRE(r1.code == 0);
  const auto snap1 = snapshot_dir(dir);
  const RunResult r2 = run(args);
  REQUIRE(r2.code == 0);
  const auto snap2 = snapshot_dir(dir);

  CHECK(r1.out == r2.out);
  REQUIRE(snap1.size() == snap2.size());
  for (const auto& [name, bytes] : snap1) {
    REQUIRE(snap2.count(name) == 1);
    CHECK_MESSAGE(snap2.at(name) == bytes, "file differs between runs: ", name);
  }

  // the manifest carries the promised shape
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m.contains("config"));
  CHECK(m["config_hash"].get<std::string>().size() == 16);
  CHECK(m["version"] == "0.1.0");
  CHECK(m["started"].is_null());
  CHECK(m["finished"].is_null());
  REQUIRE(m.contains("results"));
  for (const char* key : {"sieve", "arcs", "kernel", "moments", "major_fit", "prediction",
                          "minor_scan"})
    CHECK(m["results"].contains(key));
  // every promised artifact exists on disk
  for (const char* name : {"sieve.json", "arcs.csv", "kernel.csv", "kernel.svg", "moments.csv",
                           "moments.svg", "major_fit.csv", "predict.json", "minor_scan.csv",
                           "minor_scan.json", "minor_scan.svg", "manifest.json"})
    CHECK_MESSAGE(fs::exists(dir / name), "missing artifact: ", name);
}

TEST_SUITE_END();
