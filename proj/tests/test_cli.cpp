#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ggbm/cli.hpp"

using namespace ggbm;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("eval") {
  CHECK(run({"eval", "green-constant", "--beta", "1", "--alpha", "1", "--dim", "3"}).out == "0.159154943091895\n");
  CHECK(run({"eval", "ml", "--beta", "1", "--z", "-1"}).out == "0.367879441171442\n");
  CHECK(run({"eval", "mwright", "--beta", "0.5", "--tau", "0"}).out == "0.564189583547756\n");
  const Run r = run({"eval", "ml", "--beta", "0.5,1", "--z", "0,-1", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "beta,z,value\n0.5,0,1\n0.5,-1,0.427583576155807\n1,0,1\n1,-1,0.367879441171442\n");
  const auto j = nlohmann::json::parse(run({"eval", "ml", "--beta", "1", "--z", "-1", "--format", "json"}).out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.36787944117144233));
  CHECK(run({"eval", "density", "--beta", "1", "--alpha", "1", "--y", "0", "--t", "1"}).out == "0.398942280401433\n");
  CHECK(run({"eval", "charfun", "--beta", "1", "--alpha", "1", "--times", "1", "--theta", "1"}).out ==
        "0.606530659712633\n");
}

TEST_CASE("domain errors name the violated constraint") {
  Run r = run({"eval", "green-constant", "--beta", "0.5", "--alpha", "1", "--dim", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("requires alpha > 1") != std::string::npos);
  r = run({"eval", "green-constant", "--beta", "0.5", "--alpha", "1.5", "--dim", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("requires d*alpha > 2") != std::string::npos);
  r = run({"estimate-potential", "--beta", "0.5", "--alpha", "0.8", "--dim", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("requires d*alpha > 2") != std::string::npos);
  CHECK(run({"eval", "ml", "--beta", "1.5", "--z", "-1"}).code == 2);
  CHECK(run({"eval", "nothing"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"verify", "nosuchsuite"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sample") {
  CHECK(run({"sample", "ybeta", "--beta", "1", "-n", "5"}).out == "1\n1\n1\n1\n1\n");
  const Run g = run({"sample", "ggbm", "--beta", "0.8", "--alpha", "1.5", "--dim", "2", "--steps", "1024", "--seed", "7"});
  CHECK(g.code == 0);
  CHECK(count_lines(g.out) == 1026);  // header + 1025 grid points
  CHECK(g.out.rfind("t,x1,x2\n0,0,0\n", 0) == 0);
  const Run g2 = run({"sample", "ggbm", "--beta", "0.8", "--alpha", "1.5", "--dim", "2", "--steps", "1024", "--seed", "7"});
  CHECK(g.out == g2.out);
  const Run f1 = run({"sample", "fbm", "--hurst", "0.5", "--steps", "64", "--seed", "3"});
  CHECK(f1.out == run({"sample", "fbm", "--hurst", "0.5", "--steps", "64", "--seed", "3"}).out);
  CHECK(f1.out != run({"sample", "fbm", "--hurst", "0.5", "--steps", "64", "--seed", "4"}).out);
  CHECK(run({"sample", "ybeta", "--beta", "0.5", "-n", "3", "--out", "/nonexistent/dir/file"}).code != 0);
}

TEST_CASE("out file") {
  const std::string path = "test_cli_out.csv";
  CHECK(run({"sample", "ybeta", "--beta", "0.5", "-n", "4", "--seed", "1", "--out", path}).code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run({"sample", "ybeta", "--beta", "0.5", "-n", "4", "--seed", "1"}).out);
  std::remove(path.c_str());
}

TEST_CASE("default seed from the environment") {
  setenv("GGBM_DEFAULT_SEED", "123", 1);
  const std::string a = run({"sample", "ybeta", "--beta", "0.5", "-n", "3"}).out;
  unsetenv("GGBM_DEFAULT_SEED");
  CHECK(a == run({"sample", "ybeta", "--beta", "0.5", "-n", "3", "--seed", "123"}).out);
  CHECK(a != run({"sample", "ybeta", "--beta", "0.5", "-n", "3"}).out);
  setenv("GGBM_DEFAULT_SEED", "abc", 1);
  CHECK(run({"sample", "ybeta", "--beta", "0.5", "-n", "3"}).code == 2);
  unsetenv("GGBM_DEFAULT_SEED");
}

TEST_CASE("verify reports") {
  const Run r = run({"verify", "specfun"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["suite"] == "specfun");
  CHECK(j["pass"] == true);
  for (const auto& c : j["checks"])
    for (const char* key : {"name", "paper_anchor", "expected", "observed", "tolerance", "pass"}) CHECK(c.contains(key));

  const Run cov = run({"verify", "covariance", "--beta", "0.8", "--alpha", "1.2", "--paths", "20000"});
  CHECK(cov.code == 0);
}

TEST_CASE("verify green is independent of the thread count") {
  const std::vector<std::string> base = {"verify", "green", "--beta", "0.5", "--alpha", "1.5", "--dim", "3",
                                         "--paths", "300", "--steps", "256", "--seed", "42"};
  auto with = [&](const char* threads) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(threads);
    return run(a);
  };
  const Run one = with("1"), four = with("4");
  CHECK(one.out == four.out);
  CHECK(!one.out.empty());
}
