#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "haardigits/digit_law.hpp"
#include "haardigits/sphere_laws.hpp"
#include "haardigits/stats.hpp"
#include "json.hpp"

using namespace haardigits;
using json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream s(text);
  std::string line;
  while (std::getline(s, line)) {
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ls(line);
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

// Re-emits parsed CSV, reformatting every numeric field.
std::string reemit_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c) out += ',';
      const std::string& f = rows[r][c];
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      const bool numeric = r > 0 && !f.empty() && *end == '\0';
      out += numeric ? cli::format_number(v) : f;
    }
    out += '\n';
  }
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("haar_digits_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(cli::format_number(0.30102999566398120) == "0.301029995664");
  CHECK(cli::format_number(1.0) == "1");
  CHECK(cli::format_number(1e-20) == "1e-20");
  CHECK(cli::round_number(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("law command") {
  const auto benford = run({"law", "--law", "benford", "--base", "10"});
  REQUIRE(benford.code == 0);
  const auto rows = parse_csv(benford.out);
  CHECK(rows[0] == std::vector<std::string>{"section", "x", "cdf", "density", "digit_prob"});
  CHECK(rows.size() == 1 + 99 + 9);
  bool found = false;
  for (const auto& r : rows) {
    if (r[0] == "grid" && r[1] == "2") {
      found = true;
      CHECK(std::stod(r[2]) == doctest::Approx(0.301030).epsilon(1e-6));
    }
  }
  CHECK(found);

  const auto sphere = run({"law", "--law", "sphere-exact", "--n", "2", "--base", "10"});
  REQUIRE(sphere.code == 0);
  for (const auto& r : parse_csv(sphere.out)) {
    if (r[0] != "grid") continue;
    CHECK(std::fabs(std::stod(r[2]) - (std::stod(r[1]) - 1.0) / 9.0) < 1e-9);
  }

  CHECK(run({"law", "--law", "power", "--k", "1", "--base", "10"}).out == benford.out);

  const auto j = run({"law", "--law", "sphere-limit", "--n", "7", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = json::parse(j.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["grid"].size() == 99);
  CHECK(doc["digits"].size() == 9);
}

TEST_CASE("law command usage errors") {
  CHECK(run({"law", "--law", "benford", "--k", "2"}).code == 2);
  CHECK(run({"law", "--law", "uniform", "--n", "3"}).code == 2);
  CHECK(run({"law", "--law", "power"}).code == 2);
  CHECK(run({"law", "--law", "sphere-exact"}).code == 2);
  CHECK(run({"law", "--law", "nope"}).code == 2);
  CHECK(run({"law"}).code == 2);
  CHECK(run({"law", "--law", "benford", "--base", "1"}).code == 2);
  CHECK(run({"law", "--law", "sphere-erf", "--n", "1"}).code == 2);
  CHECK(run({"law", "--law", "benford", "--format", "xml"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sample: GL_3 determinants are Benford") {
  const auto r = run({"sample", "--group", "gln-det", "--n", "3", "--N", "1000000", "--seed", "42"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["workers"] == 1);
  const auto& chi = doc["tests"][1];
  CHECK(chi["test"] == "chi2-first-digit");
  CHECK(chi["dof"] == 8);
  CHECK(chi["statistic"].get<double>() < 26.12);
}

TEST_CASE("sample: orthogonal (1,1) entry follows the S^9 law") {
  const auto r = run({"sample", "--group", "orthogonal", "--n", "10", "--N", "100000", "--seed", "42",
                      "--entry", "1,1"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["law"] == "sphere-exact(B=10,n=9)");
  CHECK(doc["tests"][0]["statistic"].get<double>() < 0.01);
}

TEST_CASE("sample: S^2 significands are uniform") {
  const std::string path = temp_path("sphere.csv");
  const auto r = run({"sample", "--group", "sphere", "--n", "2", "--N", "1000000", "--seed", "7",
                      "--samples", path});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(slurp(path));
  REQUIRE(rows.size() == 1'000'001);
  CHECK(rows[0] == std::vector<std::string>{"index", "value", "significand"});
  std::vector<double> values;
  for (std::size_t i = 1; i < rows.size(); ++i) values.push_back(std::stod(rows[i][1]));
  const auto emp = build_empirical(values, Base(10));
  CHECK(ks_statistic(emp, DigitLaw::uniform(Base(10))).statistic < 0.005);
  std::filesystem::remove(path);
}

TEST_CASE("sample: every group runs") {
  for (const std::vector<std::string>& extra :
       {std::vector<std::string>{"--group", "rplus"},
        {"--group", "power", "--k", "3"},
        {"--group", "triangular", "--n", "3", "--entry", "2,2"},
        {"--group", "triangular", "--n", "3", "--entry", "1,3", "--side", "right"},
        {"--group", "diagonal", "--n", "3", "--det-one", "--entry", "3,3"},
        {"--group", "sln", "--n", "3", "--entry", "2,1", "--permute"},
        {"--group", "unitary", "--n", "4"},
        {"--group", "sphere", "--n", "30"}}) {
    std::vector<std::string> args{"sample", "--N", "20000", "--seed", "42"};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run(args);
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    for (const auto& t : doc["tests"]) CHECK(t["pass"] == true);
  }
}

TEST_CASE("sample usage errors") {
  CHECK(run({"sample", "--group", "nope"}).code == 2);
  CHECK(run({"sample", "--group", "triangular", "--entry", "2,1"}).code == 2);
  CHECK(run({"sample", "--group", "triangular", "--entry", "1,9"}).code == 2);
  CHECK(run({"sample", "--group", "triangular", "--entry", "x"}).code == 2);
  CHECK(run({"sample", "--group", "triangular", "--side", "up"}).code == 2);
  CHECK(run({"sample", "--group", "diagonal", "--entry", "1,2"}).code == 2);
  CHECK(run({"sample", "--group", "diagonal", "--n", "1", "--det-one"}).code == 2);
  CHECK(run({"sample", "--group", "rplus", "--permute"}).code == 2);
  CHECK(run({"sample", "--group", "rplus", "--N", "0"}).code == 2);
  CHECK(run({"sample", "--group", "rplus", "--workers", "0"}).code == 2);
  CHECK(run({"sample", "--group", "power", "--k", "0"}).code == 2);
  CHECK(run({"sample", "--group", "orthogonal", "--n", "1"}).code == 2);
  CHECK(run({"sample", "--group", "sphere", "--n", "0"}).code == 2);
  CHECK(run({"sample", "--group", "rplus", "--eps", "-1"}).code == 2);
}

TEST_CASE("outputs are byte-deterministic") {
  const std::vector<std::string> args{"sample", "--group", "sln", "--n", "3", "--N", "50000",
                                      "--seed", "9", "--workers", "3", "--permute"};
  const auto a = run(args), b = run(args);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["workers"] == 3);
  const std::vector<std::string> f{"fig1", "--dims", "3,30", "--N", "20000", "--seed", "5", "--workers", "2"};
  CHECK(run(f).out == run(f).out);
  CHECK(run({"verify", "--suite", "cone", "--trials", "100000"}).out ==
        run({"verify", "--suite", "cone", "--trials", "100000"}).out);

  const std::string p1 = temp_path("det1.json"), p2 = temp_path("det2.json");
  REQUIRE(run({"sample", "--group", "rplus", "--N", "1000", "--output", p1}).code == 0);
  REQUIRE(run({"sample", "--group", "rplus", "--N", "1000", "--output", p2}).code == 0);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(!slurp(p1).empty());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("seed falls back to the environment") {
  const std::vector<std::string> base{"sample", "--group", "rplus", "--N", "1000"};
  auto with_seed = base;
  with_seed.insert(with_seed.end(), {"--seed", "1234"});
  ::setenv("HAAR_DIGITS_SEED", "1234", 1);
  const auto from_env = run(base);
  ::unsetenv("HAAR_DIGITS_SEED");
  CHECK(from_env.out == run(with_seed).out);
  CHECK(json::parse(from_env.out)["seed"] == 1234);
  CHECK(json::parse(run(base).out)["seed"] == 42);
  ::setenv("HAAR_DIGITS_SEED", "-3", 1);
  CHECK(run(base).code == 2);
  ::unsetenv("HAAR_DIGITS_SEED");
}

TEST_CASE("fig1 command") {
  const auto r = run({"fig1", "--dims", "100,10000", "--N", "1000000", "--seed", "42"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"dimension", "digit", "frequency", "predicted"});
  REQUIRE(rows.size() == 1 + 18);
  std::vector<std::uint64_t> c100, c10k;
  double sum100 = 0.0, sum10k = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool small = rows[i][0] == "100";
    const double f = std::stod(rows[i][2]);
    (small ? c100 : c10k).push_back(static_cast<std::uint64_t>(std::llround(f * 1e6)));
    (small ? sum100 : sum10k) += f;
    if (small) {
      const int d = std::stoi(rows[i][1]);
      const double mass = sphere_limit_F(100, Base(10), d + 1.0) - sphere_limit_F(100, Base(10), d);
      CHECK(std::fabs(std::stod(rows[i][3]) - mass) < 1e-9);
    }
  }
  CHECK(std::fabs(sum100 - 1.0) <= 1e-12);
  CHECK(std::fabs(sum10k - 1.0) <= 1e-12);
  CHECK(tv_distance(DigitHistogram::from_counts(Base(10), c100),
                    DigitHistogram::from_counts(Base(10), c10k)) < 0.01);

  CHECK(run({"fig1", "--dims", ""}).code == 2);
  CHECK(run({"fig1", "--dims", "10,-3"}).code == 2);
  CHECK(run({"fig1", "--dims", "10,abc"}).code == 2);
}

TEST_CASE("verify command") {
  const auto adj = run({"verify", "--suite", "adjoint"});
  CHECK(adj.code == 0);
  const auto doc = json::parse(adj.out);
  for (const auto& c : doc["checks"]) {
    if (c["name"].get<std::string>().rfind("adjoint_product_identity", 0) == 0) {
      CHECK(c["value"].get<double>() < 1e-9);
    }
  }
  const auto cone = run({"verify", "--suite", "cone", "--eps", "0.1"});
  CHECK(cone.code == 0);
  for (const auto& c : json::parse(cone.out)["checks"]) CHECK(c["pass"] == true);
  CHECK(run({"verify", "--suite", "all"}).code == 0);
  CHECK(run({"verify", "--suite", "cone", "--eps", "1.5"}).code == 2);
  // Too few trials: the Monte Carlo volume cannot land within 2%.
  CHECK(run({"verify", "--suite", "cone", "--trials", "20"}).code == 1);
}

TEST_CASE("emissions round-trip") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"law", "--law", "sphere-exact", "--n", "5"},
        {"sample", "--group", "rplus", "--N", "2000", "--format", "csv"},
        {"fig1", "--dims", "4,400", "--N", "3000"}}) {
    const auto r = run(args);
    REQUIRE(r.code == 0);
    CHECK(reemit_csv(parse_csv(r.out)) == r.out);
  }
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"law", "--law", "power", "--k", "2.5", "--format", "json"},
        {"sample", "--group", "unitary", "--n", "3", "--N", "2000"},
        {"fig1", "--dims", "4,400", "--N", "3000", "--format", "json"},
        {"verify", "--suite", "all", "--trials", "100000"}}) {
    const auto r = run(args);
    REQUIRE(r.code <= 1);
    CHECK(json::parse(r.out).dump(2) + "\n" == r.out);
  }
}
