#include <sstream>

#include "doctest.h"
#include "hardy/cli.hpp"
#include "hardy/errors.hpp"

using namespace hardy;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

}  // namespace

TEST_CASE("constants command") {
  auto r = run({"constants", "--n", "1", "--s", "0.75", "--p", "2", "--alpha", "0"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["sharp"].get<double>() > 0);
  CHECK(j["meta"]["seed"] == 1);
  CHECK(j["meta"].contains("version"));
  CHECK(j["meta"].contains("tolerances"));
  CHECK(j["config"]["s"] == 0.75);
  CHECK(j.contains("euclid_halfspace"));

  auto bad = run({"constants", "--n", "1", "--s", "0.4", "--p", "2", "--alpha", "0"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("sp+alpha>1") != std::string::npos);

  auto csv = run({"constants", "--format", "csv"});
  CHECK(csv.code == 0);
  int lines = 0;
  for (char c : csv.out) lines += c == '\n';
  CHECK(lines == 2);
}

TEST_CASE("verify commands") {
  CHECK(run({"verify", "lemma51", "--n", "1", "--theta", "1", "--alpha", "0", "--m", "1"}).code == 0);
  auto f = run({"verify", "feps", "--beta", "0", "--s", "0.6", "--p", "2"});
  REQUIRE(f.code == 0);
  const auto j = nlohmann::json::parse(f.out);
  CHECK(j["reports"][0]["rel_err"].get<double>() < 1e-8);
  CHECK(run({"verify", "nope"}).code == 2);
  CHECK(run({"verify", "lambda-limit", "--beta", "0.3", "--s", "0.75", "--p", "3"}).code == 0);
  // a failing check exits 1 and echoes the report on stderr
  auto fail = run({"verify", "lambda-limit", "--beta", "-0.2", "--s", "0.75", "--p", "2"});
  CHECK(fail.code == 1);
  CHECK(fail.err.find("lambda_limit") != std::string::npos);
  CHECK(run({"verify", "lemma42", "--samples", "100000"}).code == 0);
  CHECK(run({"verify", "feps", "--tau", ""}).code == 2);
}

TEST_CASE("scan commands") {
  auto b = run({"scan", "beta", "--s", "0.75", "--p", "2", "--alpha", "0", "--grid", "41", "--format", "csv"});
  REQUIRE(b.code == 0);
  CHECK(b.out.rfind("beta,lambda,is_argmax\n", 0) == 0);
  auto bj = nlohmann::json::parse(run({"scan", "beta", "--s", "0.75", "--p", "2", "--grid", "41"}).out);
  CHECK(std::abs(bj["argmax_beta"].get<double>() - 0.25) <= bj["grid_step"].get<double>());
  CHECK(run({"scan", "beta", "--grid", "0"}).code == 2);
  CHECK(run({"scan", "convergence", "--R0", ""}).code == 2);
  auto c = run({"scan", "convergence", "--R0", "2,4,8", "--samples", "200000", "--format", "csv"});
  CHECK(c.code == 0);
  int lines = 0;
  for (char ch : c.out) lines += ch == '\n';
  CHECK(lines == 4);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"constants", "--format", "xml"}).code == 2);
  CHECK(run({"constants", "--bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("report hash is reproducible") {
  const std::vector<std::string> args = {"verify", "geps", "--samples", "64000", "--seed", "5"};
  auto a = nlohmann::json::parse(run(args).out);
  auto b = nlohmann::json::parse(run(args).out);
  CHECK(a["meta"]["report_hash"] == b["meta"]["report_hash"]);
  auto c = nlohmann::json::parse(run({"verify", "geps", "--samples", "64000", "--seed", "6"}).out);
  CHECK(a["meta"]["report_hash"] != c["meta"]["report_hash"]);
  auto t1 = nlohmann::json::parse(run({"verify", "geps", "--samples", "64000", "--seed", "5", "--threads", "3"}).out);
  CHECK(t1["meta"]["report_hash"] == a["meta"]["report_hash"]);

  nlohmann::json doc = {{"x", 1}, {"meta", {{"timestamp", "a"}}}, {"r", {{"runtime_s", 0.1}}}};
  nlohmann::json doc2 = {{"x", 1}, {"meta", {{"timestamp", "b"}}}, {"r", {{"runtime_s", 9.0}}}};
  CHECK(cli::report_hash(doc) == cli::report_hash(doc2));
}

TEST_CASE("list parsing") {
  CHECK(cli::parse_list("1, 2.5,1e-3") == std::vector<double>{1.0, 2.5, 1e-3});
  CHECK(cli::parse_list("").empty());
  CHECK_THROWS_AS(cli::parse_list("1,x"), ParameterError);
  CHECK_THROWS_AS(cli::parse_list("1,2y"), ParameterError);
}
