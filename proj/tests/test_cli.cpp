#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "levy/error.hpp"

namespace fs = std::filesystem;
using levy::cli::parse_grid;
using levy::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result levy_run(std::vector<std::string> args) {
  args.insert(args.begin(), "levy");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream is(csv);
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto d = fs::current_path() / ("cli_tmp_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("grid expressions") {
  CHECK(parse_grid("1") == std::vector<double>{1.0});
  CHECK(parse_grid("0.5,1,2") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(parse_grid("0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  auto g = parse_grid("1:100:3log");
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 1.0);
  CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(g[2] == 100.0);
  CHECK(parse_grid("2:3:1") == std::vector<double>{2.0});
  for (const char* bad : {"", "1:2", "1:2:0", "1:2:x", "0:1:4log", "a,b", "1:2:3:4", "1:2:-3"})
    CHECK_THROWS_AS(parse_grid(bad), levy::ConfigError);
}

TEST_CASE("eval prints shortest round-trip CSV") {
  auto r = levy_run({"eval", "--alpha", "1/2", "--x", "1", "--format", "csv"});
  CHECK(r.code == 0);
  auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == "1,0.2196956447338612");
  CHECK(r.out.find("# alpha=1/2") != std::string::npos);
  CHECK(r.out.find("# columns: x,g") != std::string::npos);

  auto j = levy_run({"eval", "--alpha", "1/3", "--x", "0.5:2:4", "--format", "json"});
  CHECK(j.code == 0);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["x"].size() == 4);
  CHECK(doc["g"].size() == 4);
}

TEST_CASE("configuration errors exit 1") {
  for (auto alpha : {"2/2", "3/2"}) {
    auto r = levy_run({"eval", "--alpha", alpha, "--x", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("l < k") != std::string::npos);
    CHECK(r.err.find("gcd") != std::string::npos);
  }
  CHECK(levy_run({"eval", "--alpha", "2/4", "--x", "1"}).err.find("gcd(l, k) = 1") !=
        std::string::npos);
  CHECK(levy_run({"eval", "--alpha", "1/2", "--x", "1", "--bogus"}).code == 1);
  CHECK(levy_run({}).code == 1);
  CHECK(levy_run({"eval", "--alpha", "1/2", "--x", "-1"}).code == 1);
  CHECK(levy_run({"eval", "--alpha", "1/2", "--x", "1", "--format", "xml"}).code == 1);
  CHECK(levy_run({"verify", "--suite", "nope"}).code == 1);
  CHECK(levy_run({"compose", "--alpha", "1/2", "--beta", "1/2", "--check-against", "1/3"}).code == 1);
  CHECK(levy_run({"--help"}).code == 0);
  CHECK(levy_run({"--version"}).out == "levy 0.1.0\n");
}

TEST_CASE("verify char reports JSON and exit 0") {
  auto r = levy_run({"verify", "--suite", "char", "--alpha", "1/3", "--tol", "1e-8"});
  CHECK(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["passed"] == true);
  REQUIRE(doc["reports"].size() == 1);
  CHECK(doc["reports"][0]["passed"] == true);
  REQUIRE(doc["controls"].size() == 1);
  CHECK(doc["controls"][0]["passed"] == false);
  CHECK(doc["controls"][0]["max_rel_err"].get<double>() > 1e-2);
}

TEST_CASE("verification failure exits 2 and lists the failure") {
  auto r = levy_run({"verify", "--suite", "char", "--alpha", "1/2", "--p", "3", "--tol", "1e-40"});
  CHECK(r.code == 2);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["passed"] == false);
  REQUIRE(doc["failures"].size() == 1);
  CHECK(doc["failures"][0] == "char[alpha=1/2]");

  auto c = levy_run({"compose", "--alpha", "1/2", "--beta", "1/2", "--x", "1", "--check-against",
                     "1/4", "--tol", "1e-40"});
  CHECK(c.code == 2);
}

TEST_CASE("compose with a closed-form check") {
  auto r = levy_run({"compose", "--alpha", "1/2", "--beta", "1/2", "--check-against", "1/4",
                     "--tol", "1e-7"});
  CHECK(r.code == 0);
  CHECK(data_rows(r.out).size() == 40);
  auto w = levy_run({"compose", "--alpha", "1/2", "--beta", "1/3", "--orientation", "as-written",
                     "--x", "0.1:20:5log", "--check-against", "1/6", "--tol", "1e-6", "--format",
                     "json"});
  CHECK(w.code == 0);
  CHECK(nlohmann::json::parse(w.out)["passed"] == true);
}

TEST_CASE("laplace subcommand") {
  auto r = levy_run({"laplace", "--alpha", "1/4", "--p", "16", "--tol", "1e-8"});
  CHECK(r.code == 0);
  auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].rfind("16,0.13533528323661", 0) == 0);
  auto t = levy_run({"laplace", "--alpha", "1/3", "--p", "1,4", "--t", "2", "--tol", "1e-8"});
  CHECK(t.code == 0);
}

TEST_CASE("subordinate CSV") {
  auto r = levy_run({"subordinate", "--alpha", "1/2", "--tau", "1", "--x", "-2:2:5"});
  CHECK(r.code == 0);
  for (const char* h : {"# alpha=1/2", "# tau=1", "# abs_tol=", "# columns: x,p_alpha"})
    CHECK(r.out.find(h) != std::string::npos);
  auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[2].rfind("0,0.40802446954913", 0) == 0);
  // Even in x.
  CHECK(rows[0].substr(rows[0].find(',')) == rows[4].substr(rows[4].find(',')));
}

TEST_CASE("reruns are byte-identical") {
  const auto dir = scratch("idem");
  for (int i = 0; i < 2; ++i) {
    auto r = levy_run({"subordinate", "--alpha", "1/3", "--x", "0:3:7", "-o",
                       (dir / ("run" + std::to_string(i) + ".csv")).string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
  }
  CHECK(slurp(dir / "run0.csv") == slurp(dir / "run1.csv"));
  CHECK(!slurp(dir / "run0.csv").empty());
  auto a = levy_run({"verify", "--suite", "efros", "--alpha", "1/2", "--beta", "1/2"});
  auto b = levy_run({"verify", "--suite", "efros", "--alpha", "1/2", "--beta", "1/2"});
  CHECK(a.out == b.out);
  fs::remove_all(dir);
}

TEST_CASE("cache build, list, lookup and clear") {
  const auto dir = scratch("cache");
  setenv("LEVY_CACHE_DIR", dir.string().c_str(), 1);
  auto b = levy_run({"cache", "build", "--alpha", "1/2", "--power", "3"});
  CHECK(b.code == 0);
  CHECK(fs::exists(dir / "chain_1-2_1-2_1-2.json"));
  auto c = levy_run({"cache", "build", "--chain", "1/3,1/3"});
  CHECK(c.code == 0);

  auto e = levy_run({"eval", "--alpha", "1/8", "--x", "1"});
  CHECK(e.code == 0);
  CHECK(e.out.find("cached chain 1/2 1/2 1/2") != std::string::npos);
  CHECK(levy_run({"laplace", "--alpha", "1/9", "--p", "1,2", "--tol", "1e-6"}).code == 0);

  std::ofstream(dir / "broken.json") << "{ not json";
  auto l = levy_run({"cache", "list"});
  CHECK(l.code == 0);
  CHECK(l.out.find("broken.json,,,invalid") != std::string::npos);
  CHECK(l.out.find("chain_1-3_1-3.json,1/9,1/3 1/3,ok") != std::string::npos);
  auto w = levy_run({"eval", "--alpha", "1/8", "--x", "1"});
  CHECK(w.code == 0);
  CHECK(w.err.find("warning: skipping") != std::string::npos);

  // --cache-dir beats the environment.
  const auto other = scratch("cache_other");
  CHECK(levy_run({"--cache-dir", other.string(), "eval", "--alpha", "1/8", "--x", "1"}).code == 1);

  CHECK(levy_run({"cache", "build", "--alpha", "1/2", "--power", "5"}).code == 1);
  CHECK(levy_run({"cache", "build"}).code == 1);
  auto clr = levy_run({"cache", "clear"});
  CHECK(clr.out.find("removed 3") != std::string::npos);
  CHECK(levy_run({"eval", "--alpha", "1/8", "--x", "1"}).code == 1);
  unsetenv("LEVY_CACHE_DIR");
  fs::remove_all(dir);
  fs::remove_all(other);
}
