#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ptscatter/app.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ptscatter::app;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ptscatter_test_" + name)).string();
}

} // namespace

TEST_CASE("cell text output") {
  const auto r = call({"cell", "--k", "1", "--v", "40", "--b", "0.05"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("xi") != std::string::npos);
  CHECK(r.out.find("absdet_err") != std::string::npos);
}

TEST_CASE("invalid arguments exit with 1") {
  CHECK(call({"cell", "--k", "0", "--v", "40", "--b", "0.1"}).code == exit_invalid_arguments);
  CHECK(call({"cell", "--k", "1", "--v", "-1", "--b", "0.1"}).code == exit_invalid_arguments);
  CHECK(call({"cell", "--k", "banana"}).code == exit_invalid_arguments);
  CHECK(call({"sweep", "--n-min", "0"}).code == exit_invalid_arguments);
  CHECK(call({"sweep", "--k-min", "5", "--k-max", "1"}).code == exit_invalid_arguments);
  CHECK(call({"sweep", "--format", "xml"}).code == exit_invalid_arguments);
  CHECK(call({"nonsense"}).code == exit_invalid_arguments);
  CHECK(call({}).code == exit_invalid_arguments);
  CHECK(call({"converge", "--n-spacing", "quadratic"}).code == exit_invalid_arguments);
}

TEST_CASE("help exits cleanly") {
  CHECK(call({"--help"}).code == exit_ok);
  CHECK(call({"sweep", "--help"}).code == exit_ok);
}

TEST_CASE("sweep csv shape") {
  const auto r = call({"sweep", "--n-min", "10", "--n-max", "100", "--n-count", "3", "--k-count", "4"});
  REQUIRE(r.code == exit_ok);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 1 + 3 * 4);
  CHECK(lines[0] == "N,k,T,R_left,R_right,absdet_err");
  CHECK(r.out.find("# k_grid_note") != std::string::npos);
}

TEST_CASE("vanishing V sweep transmits fully") {
  const auto r = call({"sweep", "--v", "1e-12", "--n-count", "4", "--k-count", "5", "--format", "json"});
  REQUIRE(r.code == exit_ok);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["rows"].size() == 20);
  for (const auto& row : doc["rows"]) {
    CHECK(std::abs(row["T"].get<double>() - 1.0) <= 1e-10);
    CHECK(row["R_left"].get<double>() <= 1e-20);
  }
}

TEST_CASE("fig3 preset grid") {
  const auto r = call({"sweep", "--fig3"});
  REQUIRE(r.code == exit_ok);
  const auto lines = data_lines(r.out);
  CHECK(lines.size() == 1 + 151 * 181);
  CHECK(r.out.find("fig3") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"converge", "--n-count", "6"};
  CHECK(call(args).out == call(args).out);
  const std::vector<std::string> g = {"general", "--n-count", "3", "--format", "json"};
  CHECK(call(g).out == call(g).out);
}

TEST_CASE("converge reports slope and predictor ratio") {
  const auto r = call({"converge"});
  REQUIRE(r.code == exit_ok);
  CHECK(r.out.find("# slope=") != std::string::npos);
  CHECK(data_lines(r.out)[0] == "N,k,deviation_inf,offdiag_measured,offdiag_predicted,predictor_ratio,diag_measured_err");
  CHECK(data_lines(r.out).size() == 1 + 16);
}

TEST_CASE("general json shape") {
  const auto r = call({"general", "--n-count", "3", "--format", "json"});
  REQUIRE(r.code == exit_ok);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["converged"].get<bool>());
  REQUIRE(doc["effective_height"].is_array());
  CHECK(std::abs(doc["effective_height"][0].get<double>() - 7.0) <= 0.05);
  CHECK(doc["records"].size() == 3);
}

TEST_CASE("oracle check passes") {
  const auto r = call({"oracle-check"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("status=pass") != std::string::npos);
  CHECK(call({"oracle-check", "--tolerance", "1e-20"}).code == exit_numerical_failure);
}

TEST_CASE("config file and flag precedence") {
  const std::string path = temp_path("cfg.txt");
  {
    std::ofstream f(path);
    f << "# comment\n\nk = 2\nv=10\n b = 0.1 \nformat=json\n";
  }
  const auto from_file = call({"cell", "--config", path});
  REQUIRE(from_file.code == exit_ok);
  const auto doc = nlohmann::json::parse(from_file.out);
  CHECK(doc["k"].get<double>() == 2.0);
  CHECK(doc["v"].get<double>() == 10.0);

  const auto flag_wins = call({"cell", "--config", path, "--k", "3"});
  REQUIRE(flag_wins.code == exit_ok);
  CHECK(nlohmann::json::parse(flag_wins.out)["k"].get<double>() == 3.0);

  {
    std::ofstream f(path);
    f << "not a pair\n";
  }
  CHECK(call({"cell", "--config", path}).code == exit_invalid_arguments);
  {
    std::ofstream f(path);
    f << "colour=blue\n";
  }
  CHECK(call({"cell", "--config", path}).code == exit_invalid_arguments);
  std::remove(path.c_str());
  CHECK(call({"cell", "--config", path}).code == exit_invalid_arguments);
}

TEST_CASE("key=value parser") {
  std::istringstream in("a=1\n# x\n  b = two words \n");
  const auto kv = parse_key_value(in);
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "two words");
  std::istringstream bad("=3\n");
  CHECK_THROWS(parse_key_value(bad));
}

TEST_CASE("output file") {
  const std::string path = temp_path("out.csv");
  CHECK(call({"sweep", "--n-count", "2", "--k-count", "2", "--output", path}).code == exit_ok);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(data_lines(ss.str()).size() == 5);
  std::remove(path.c_str());
  CHECK(call({"sweep", "--output", "/nonexistent-dir/x.csv"}).code != exit_ok);
}

TEST_CASE("grids") {
  CHECK(integer_grid(Range{1, 1000, 4, Spacing::log}) == std::vector<std::int64_t>{1, 10, 100, 1000});
  const auto g = real_grid(Range{1, 10, 181, Spacing::linear});
  CHECK(g.size() == 181);
  CHECK(g.back() == 10.0);
  CHECK(g[1] == doctest::Approx(1.05));
  CHECK_THROWS(validate_range(Range{2, 1, 3, Spacing::linear}, "k"));
}
