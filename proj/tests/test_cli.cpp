#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "pdo/oscint.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = pdo::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pdo_cli_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gallery listing is stable and has a JSON mode") {
  const Run a = run({"gallery"}), b = run({"gallery"});
  CHECK(a.code == 0);
  CHECK(a.out.find("bessel") != std::string::npos);
  CHECK(a.out == b.out);
  const Run j = run({"gallery", "--json"});
  REQUIRE(j.code == 0);
  const json list = json::parse(j.out);
  REQUIRE(list.is_array());
  std::vector<std::string> names;
  for (const auto& e : list) names.push_back(e.at("name"));
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(std::find(names.begin(), names.end(), "rough_elliptic") != names.end());
}

TEST_CASE("verify dispatches to the seminorm estimator") {
  const Run r = run({"verify", "--symbol", "rough_elliptic", "--tau", "0.3", "--grid", "1024"});
  REQUIRE(r.code == 0);
  const json d = r.doc();
  CHECK(d.at("command") == "verify");
  CHECK(d.at("report").at("symbol").get<std::string>().find("rough_elliptic") != std::string::npos);
  CHECK(d.at("report").at("pass") == true);
  CHECK(d.at("warnings").empty());
}

TEST_CASE("fredholm on the Bessel potential reports index 0") {
  const auto dir = scratch("fredholm");
  const Run r = run({"fredholm", "--symbol", "bessel", "--m", "1", "--s", "0.2", "--levels", "256,512,1024", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const json rep = r.doc().at("report");
  CHECK(rep.at("index") == 0);
  CHECK(rep.at("kernel_dim") == 0);
  CHECK(rep.at("cokernel_dim") == 0);
  CHECK(rep.at("fredholm_like") == true);
  CHECK(slurp(dir / "fredholm.json") == r.out);
  const std::string csv = slurp(dir / "singular_values.csv");
  CHECK(csv.rfind("series,points,k,sigma\n", 0) == 0);
  CHECK(csv.find("residual_left,1024,") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("oscint matches direct quadrature of an integrable amplitude") {
  const Run r = run({"oscint", "--amplitude", "gaussian"});
  REQUIRE(r.code == 0);
  const json v = r.doc().at("report").at("value");
  const pdo::Amplitude a = pdo::gaussian_amplitude();
  const std::complex<double> direct = oracle::direct_phase_integral_1d([&a](double y, double eta) { return a(y, eta); }, 9.0, 721);
  CHECK(std::abs(std::complex<double>(v.at("re"), v.at("im")) - direct) <= 1e-8);
}

TEST_CASE("reports are reproducible") {
  const std::vector<std::string> args = {"fredholm", "--symbol", "rough_elliptic:m=1,holder_int=1", "--levels", "64,128"};
  const Run a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const std::vector<std::string> probe = {"apply", "--symbol", "bessel", "--m", "1", "--input", "random", "--seed", "5"};
  CHECK(run(probe).out == run(probe).out);
  const std::vector<std::string> other = {"apply", "--symbol", "bessel", "--m", "1", "--input", "random", "--seed", "6"};
  CHECK(run(probe).doc().at("report").at("input_l2") != run(other).doc().at("report").at("input_l2"));
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch("config");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "run.toml");
    f << "symbol = \"rough_elliptic\"\nholder_int = 1\nlevels = [64, 128]\n\n[fredholm]\ns = 0.15\n";
  }
  const std::string cfg = (dir / "run.toml").string();
  const json a = run({"fredholm", "--config", cfg}).doc();
  CHECK(a.at("report").at("s") == 0.15);
  CHECK(a.at("report").at("kernel_levels").size() == 2);
  CHECK(a.at("warnings").empty());
  const json b = run({"fredholm", "--config", cfg, "--s", "0.05"}).doc();
  CHECK(b.at("report").at("s") == 0.05);
  CHECK(run({"fredholm", "--config", (dir / "missing.toml").string()}).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("warnings cite hypotheses and --strict turns them into exit 4") {
  const std::vector<std::string> args = {"fredholm", "--symbol", "rough_elliptic", "--levels", "64,128"};
  const Run loose = run(args);
  CHECK(loose.code == 0);
  const json w = loose.doc().at("warnings");
  REQUIRE(!w.empty());
  for (const auto& m : w) CHECK(m.get<std::string>().rfind("hypothesis ", 0) == 0);
  CHECK(loose.err.find("warning: hypothesis m~") != std::string::npos);
  std::vector<std::string> strict = args;
  strict.push_back("--strict");
  CHECK(run(strict).code == 4);
  const Run window = run({"fredholm", "--symbol", "bessel", "--m", "1", "--s", "5", "--levels", "64,128", "--strict"});
  CHECK(window.code == 4);
  CHECK(window.err.find("hypothesis s-window") != std::string::npos);
}

TEST_CASE("exit codes for configuration and numerical errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"verify", "--symbol", "nope"}).code == 2);
  CHECK(run({"verify", "--symbol", "bessel:q=1"}).code == 2);
  CHECK(run({"verify", "--dim", "3"}).code == 2);
  CHECK(run({"fredholm", "--levels", "128"}).code == 2);
  CHECK(run({"fredholm", "--symbol", "annihilation", "--levels", "64,128"}).code == 2);
  CHECK(run({"oscint", "--regularizer", "C:1"}).code == 2);
  CHECK(run({"compose", "--symbol", "bessel"}).code == 2);
  CHECK(run({"smooth", "--grid", "512", "--j-max", "6"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  const Run cond = run({"fredholm", "--symbol", "vanishing_bump", "--R", "0.05", "--levels", "64,128"});
  CHECK(cond.code == 3);
  CHECK(cond.err.find("winding") != std::string::npos);
  // A regular file where the output directory should go.
  const auto dir = scratch("io");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "blocker") << "x";
  CHECK(run({"gallery"}).code == 0);
  CHECK(run({"apply", "--grid", "32", "--out", (dir / "blocker" / "sub").string()}).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("the remaining commands produce reports") {
  const json apply = run({"apply", "--symbol", "bessel", "--m", "1", "--grid", "128"}).doc().at("report");
  CHECK(std::abs(apply.at("conjugated_norm").get<double>() - 1.0) <= 1e-10);
  const json p = run({"parametrix", "--symbol", "rough_elliptic:m=1,holder_int=1"}).doc().at("report");
  CHECK(p.at("identity_residual").get<double>() <= 1e-12);
  CHECK(p.at("R") == 1.0);
  CHECK(p.at("parametrix_spec").at("order") == -0.0);
  const json c = run({"compose", "--symbol", "multiplier:g=xi", "--right", "multiplication:v=sin_windowed", "--k", "2", "--grid", "4"})
                     .doc()
                     .at("report");
  CHECK(c.at("k") == 2);
  CHECK(c.at("remainder_sup").get<double>() <= 1e-8);
  const Run s = run({"smooth", "--symbol", "rough_elliptic:holder_int=1"});
  REQUIRE(s.code == 0);
  CHECK(s.doc().at("report").at("pass") == true);
  CHECK(s.doc().at("report").at("split_residual").get<double>() <= 1e-12);
}
