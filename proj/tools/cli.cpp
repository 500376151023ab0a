#include "cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "haardigits/digit_law.hpp"
#include "haardigits/errors.hpp"
#include "haardigits/lie_verify.hpp"
#include "haardigits/rng.hpp"
#include "haardigits/samplers.hpp"
#include "haardigits/significand.hpp"
#include "haardigits/sphere_laws.hpp"
#include "haardigits/stats.hpp"
#include "json.hpp"

namespace haardigits::cli {

using json = nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round_number(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

namespace {

constexpr int kSchema = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_number(x);
}

json report_json(const GofReport& r) {
  json j;
  j["test"] = r.test;
  j["statistic"] = num(r.statistic);
  if (r.dof > 0) j["dof"] = r.dof;
  j["p_approx"] = num(r.p_approx);
  j["critical"] = num(r.critical);
  j["alpha"] = num(r.alpha);
  j["samples"] = r.samples;
  j["pass"] = r.pass;
  return j;
}

// Writes to --output if given, else to out.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HAAR_DIGITS_SEED"); env && *env) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') {
      throw UsageError(std::string("HAAR_DIGITS_SEED is not an unsigned integer: ") + env);
    }
    return v;
  }
  return 42;
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
}

// ---- law -----------------------------------------------------------------

struct LawOptions {
  std::string law;
  std::optional<double> k;
  std::optional<std::int64_t> n;
  int base = 10;
  std::string format = "csv";
  std::string output;
};

DigitLaw make_law(const LawOptions& o) {
  const Base b(o.base);
  const bool is_sphere = o.law.rfind("sphere-", 0) == 0;
  if (o.k && o.law != "power") throw UsageError("--k only applies to --law power");
  if (o.n && !is_sphere) throw UsageError("--n only applies to sphere laws");
  if (o.law == "benford") return DigitLaw::benford(b);
  if (o.law == "uniform") return DigitLaw::uniform(b);
  if (o.law == "power") {
    if (!o.k) throw UsageError("--law power needs --k");
    return DigitLaw::power(b, *o.k);
  }
  if (is_sphere) {
    if (!o.n) throw UsageError("sphere laws need --n");
    const SphereLawParams p{*o.n, b};
    if (o.law == "sphere-exact") return DigitLaw::sphere_exact(p);
    if (o.law == "sphere-erf") return DigitLaw::sphere_erf(p);
    if (o.law == "sphere-limit") return DigitLaw::sphere_limit(p);
  }
  throw UsageError("unknown --law " + o.law);
}

std::string cmd_law(const LawOptions& o) {
  check_format(o.format);
  const DigitLaw law = make_law(o);
  const double B = o.base;
  const auto probs = first_digit_probs(law);
  if (o.format == "csv") {
    std::ostringstream s;
    s << "section,x,cdf,density,digit_prob\n";
    for (int i = 0; i <= 98; ++i) {
      const double x = 1.0 + (B - 1.0) * i / 99.0;
      s << "grid," << format_number(x) << ',' << format_number(law_cdf(law, x)) << ','
        << format_number(law_density(law, x)) << ",\n";
    }
    for (std::size_t d = 0; d < probs.size(); ++d) {
      s << "digit," << d + 1 << ",,," << format_number(probs[d]) << '\n';
    }
    return s.str();
  }
  json j;
  j["schema"] = kSchema;
  j["command"] = "law";
  j["law"] = law.name();
  j["base"] = o.base;
  json grid = json::array();
  for (int i = 0; i <= 98; ++i) {
    const double x = 1.0 + (B - 1.0) * i / 99.0;
    grid.push_back({{"x", num(x)}, {"cdf", num(law_cdf(law, x))}, {"density", num(law_density(law, x))}});
  }
  j["grid"] = grid;
  json digits = json::array();
  for (std::size_t d = 0; d < probs.size(); ++d) {
    digits.push_back({{"digit", d + 1}, {"probability", num(probs[d])}});
  }
  j["digits"] = digits;
  return dump(j);
}

// ---- sample --------------------------------------------------------------

struct SampleOptions {
  std::string group;
  int n = 3;
  std::int64_t count = 100000;
  std::optional<std::uint64_t> seed;
  int base = 10;
  int m = 3;
  double eps = 0.1;
  double k = 2.0;
  std::string entry = "1,1";
  std::string side = "left";
  bool det_one = false;
  bool permute = false;
  int workers = 1;
  std::string format = "json";
  std::string output;
  std::string samples;
};

std::pair<int, int> parse_entry(const std::string& text, int n) {
  int i = 0, j = 0;
  char comma = 0;
  std::istringstream s(text);
  if (!(s >> i >> comma >> j) || comma != ',' || !s.eof()) {
    throw UsageError("--entry must look like i,j");
  }
  if (i < 1 || j < 1 || i > n || j > n) throw UsageError("--entry out of range for --n");
  return {i - 1, j - 1};
}

struct Plan {
  std::function<double(RngStream&)> draw;
  DigitLaw law;
  json params;
};

Plan plan_sample(const SampleOptions& o) {
  const Base b(o.base);
  if (o.n < 1) throw UsageError("--n must be >= 1");
  WindowSpec window{o.eps, o.m};
  window.validate();
  const int n = o.n;
  json params;
  params["n"] = n;
  const auto& g = o.group;
  if (o.permute && g != "sln") throw UsageError("--permute only applies to --group sln");
  if (o.det_one && g != "diagonal") throw UsageError("--det-one only applies to --group diagonal");

  if (g == "rplus") {
    params = {{"m", o.m}};
    return {[b, m = o.m](RngStream& r) { return sample_log_uniform(b, m, r); }, DigitLaw::benford(b),
            params};
  }
  if (g == "power") {
    if (!(o.k > 0.0)) throw UsageError("--k must be > 0");
    params = {{"m", o.m}, {"k", num(o.k)}};
    return {[b, k = o.k, m = o.m](RngStream& r) { return sample_power_density(b, k, m, r); },
            DigitLaw::power(b, o.k), params};
  }
  if (g == "sphere") {
    return {[n](RngStream& r) { return sample_sphere_leading(n, 1, r)[0]; },
            DigitLaw::sphere_exact({n, b}), params};
  }
  const auto [i, j] = parse_entry(o.entry, n);
  params["entry"] = {i + 1, j + 1};
  if (g == "orthogonal") {
    return {[n, i, j](RngStream& r) { return sample_orthogonal_haar(n, r)(i, j); },
            DigitLaw::sphere_exact({n - 1, b}), params};
  }
  if (g == "unitary") {
    return {[n, i, j](RngStream& r) { return sample_unitary_haar(n, r)(i, j).real(); },
            DigitLaw::sphere_exact({2 * n - 1, b}), params};
  }
  if (g == "triangular") {
    if (i > j) throw UsageError("--entry below the diagonal of an upper triangular matrix");
    if (o.side != "left" && o.side != "right") throw UsageError("--side must be left or right");
    const HaarSide side = o.side == "left" ? HaarSide::left : HaarSide::right;
    params["side"] = o.side;
    params["m"] = o.m;
    params["eps"] = num(o.eps);
    return {[=](RngStream& r) { return sample_upper_triangular_window(n, b, window, side, r)(i, j); },
            upper_triangular_component_law(n, b, side, i, j), params};
  }
  if (g == "diagonal") {
    if (i != j) throw UsageError("--entry must be on the diagonal");
    if (o.det_one && n == 1) throw UsageError("--det-one with --n 1 is the constant 1");
    params["m"] = o.m;
    params["det_one"] = o.det_one;
    return {[=, det_one = o.det_one, m = o.m](RngStream& r) {
              return sample_diagonal_window(n, b, m, det_one, r)(i, j);
            },
            DigitLaw::benford(b), params};
  }
  if (g == "sln") {
    if (n < 2) throw UsageError("--group sln needs --n >= 2");
    params["m"] = o.m;
    params["eps"] = num(o.eps);
    params["permute"] = o.permute;
    return {[=, permute = o.permute](RngStream& r) {
              const auto s = sample_sln_lud_window(n, b, window, r);
              if (!permute) return s.g(i, j);
              const auto p = random_even_permutation(n, r);
              const auto q = random_even_permutation(n, r);
              return apply_even_permutations(s.g, p, q)(i, j);
            },
            DigitLaw::benford(b), params};
  }
  if (g == "gln-det") {
    params.erase("entry");
    params["m"] = o.m;
    params["eps"] = num(o.eps);
    return {[=, m = o.m](RngStream& r) { return sample_gln_pos_window(n, b, m, window, r).g.determinant(); },
            DigitLaw::benford(b), params};
  }
  throw UsageError("unknown --group " + g);
}

std::string cmd_sample(const SampleOptions& o, std::ostream& out) {
  check_format(o.format);
  if (o.count < 1) throw UsageError("--N must be >= 1");
  if (o.workers < 1) throw UsageError("--workers must be >= 1");
  if (o.group == "orthogonal" && o.n < 2) throw UsageError("--group orthogonal needs --n >= 2");
  const std::uint64_t seed = resolve_seed(o.seed);
  const Base b(o.base);
  Plan plan = plan_sample(o);
  const auto values =
      draw_parallel(seed, o.workers, static_cast<std::size_t>(o.count), plan.draw);
  const auto emp = build_empirical(values, b);

  std::vector<GofReport> reports{ks_statistic(emp, plan.law)};
  if (emp.size() >= static_cast<std::size_t>(5 * (o.base - 1))) {
    reports.push_back(chi_square_first_digit(emp, plan.law));
  }

  if (!o.samples.empty()) {
    std::ostringstream s;
    s << "index,value,significand\n";
    for (std::size_t t = 0; t < values.size(); ++t) {
      s << t << ',' << format_number(values[t]) << ',';
      if (values[t] != 0.0 && std::isfinite(values[t])) s << format_number(significand(values[t], b).significand);
      s << '\n';
    }
    emit(s.str(), o.samples, out);
  }

  if (o.format == "csv") {
    std::ostringstream s;
    s << "test,statistic,dof,p_approx,critical,alpha,samples,pass\n";
    for (const auto& r : reports) {
      s << r.test << ',' << format_number(r.statistic) << ',' << r.dof << ','
        << format_number(r.p_approx) << ',' << format_number(r.critical) << ','
        << format_number(r.alpha) << ',' << r.samples << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return s.str();
  }
  json j;
  j["schema"] = kSchema;
  j["command"] = "sample";
  j["group"] = o.group;
  j["base"] = o.base;
  j["N"] = o.count;
  j["seed"] = seed;
  j["workers"] = o.workers;
  j["params"] = plan.params;
  j["law"] = plan.law.name();
  j["rejected"] = emp.rejected();
  j["digit_counts"] = emp.digit_counts();
  json tests = json::array();
  for (const auto& r : reports) tests.push_back(report_json(r));
  j["tests"] = tests;
  return dump(j);
}

// ---- fig1 ----------------------------------------------------------------

struct Fig1Options {
  std::string dims = "100,200,500,10000,20000,50000";
  std::int64_t count = 100000;
  std::optional<std::uint64_t> seed;
  int base = 10;
  int workers = 1;
  std::string format = "csv";
  std::string output;
};

std::vector<std::int64_t> parse_dims(const std::string& text) {
  std::vector<std::int64_t> dims;
  std::istringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    char* end = nullptr;
    const long long v = std::strtoll(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0' || v < 1) throw UsageError("--dims must be positive integers");
    dims.push_back(v);
  }
  if (dims.empty()) throw UsageError("--dims is empty");
  return dims;
}

std::string cmd_fig1(const Fig1Options& o) {
  check_format(o.format);
  if (o.count < 1) throw UsageError("--N must be >= 1");
  if (o.workers < 1) throw UsageError("--workers must be >= 1");
  const auto dims = parse_dims(o.dims);
  const std::uint64_t seed = resolve_seed(o.seed);
  const Base b(o.base);

  struct Row {
    std::int64_t dim;
    std::vector<double> freq;
    std::vector<double> predicted;
  };
  std::vector<Row> rows;
  for (const auto n : dims) {
    // Each dimension gets its own seed so the list order does not matter.
    const auto values = draw_parallel(splitmix64_mix(seed ^ static_cast<std::uint64_t>(n)), o.workers,
                                      static_cast<std::size_t>(o.count),
                                      [n](RngStream& r) { return sample_sphere_leading(n, 1, r)[0]; });
    const auto hist = DigitHistogram::from_empirical(build_empirical(values, b));
    std::vector<double> pred;
    for (int d = 1; d < o.base; ++d) {
      pred.push_back(sphere_limit_F(n, b, d + 1.0) - sphere_limit_F(n, b, d));
    }
    rows.push_back({n, hist.probabilities, pred});
  }

  if (o.format == "csv") {
    std::ostringstream s;
    s << "dimension,digit,frequency,predicted\n";
    for (const auto& r : rows) {
      for (std::size_t d = 0; d < r.freq.size(); ++d) {
        s << r.dim << ',' << d + 1 << ',' << format_number(r.freq[d]) << ','
          << format_number(r.predicted[d]) << '\n';
      }
    }
    return s.str();
  }
  json j;
  j["schema"] = kSchema;
  j["command"] = "fig1";
  j["base"] = o.base;
  j["N"] = o.count;
  j["seed"] = seed;
  j["workers"] = o.workers;
  json arr = json::array();
  for (const auto& r : rows) {
    json f = json::array(), p = json::array();
    for (double v : r.freq) f.push_back(num(v));
    for (double v : r.predicted) p.push_back(num(v));
    arr.push_back({{"dimension", r.dim}, {"frequency", f}, {"predicted", p}});
  }
  j["dimensions"] = arr;
  return dump(j);
}

// ---- verify --------------------------------------------------------------

struct VerifyOptions {
  std::string suite = "all";
  double eps = 0.1;
  std::uint64_t trials = 10'000'000;
  std::optional<std::uint64_t> seed;
  std::string output;
};

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

RealMatrix random_diagonal(int n, RngStream& rng) {
  RealMatrix d = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = (rng.uniform() < 0.5 ? -1 : 1) * std::exp(rng.uniform(-2.0, 2.0));
  return d;
}

RealMatrix random_unit_upper(int n, RngStream& rng) {
  RealMatrix u = RealMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) u(i, j) = rng.uniform(-3.0, 3.0);
  return u;
}

void adjoint_checks(std::uint64_t seed, std::vector<Check>& checks) {
  RngStream rng(seed, 1);
  for (int n = 2; n <= 5; ++n) {
    double residual = 0.0, triangular = 0.0, u_spread = 0.0;
    for (int t = 0; t < 100; ++t) {
      const RealMatrix u = random_unit_upper(n, rng);
      const RealMatrix d = random_diagonal(n, rng);
      const auto ad = restricted_adjoint_on_l(u, d);
      triangular = std::max(triangular, ad.max_below_diagonal / std::max(1.0, ad.matrix.cwiseAbs().maxCoeff()));
      const double l = adjoint_det_on_l(u, d);
      residual = std::max(residual, std::fabs(std::fabs(l * adjoint_det_on_u(d)) - 1.0));
      if (t < 10) {
        const double at_identity = adjoint_det_on_l(RealMatrix::Identity(n, n), d);
        u_spread = std::max(u_spread, std::fabs(l / at_identity - 1.0));
      }
    }
    const std::string tag = "n=" + std::to_string(n);
    checks.push_back({"adjoint_product_identity " + tag, residual, 1e-9, residual < 1e-9});
    checks.push_back({"lower_adjoint_triangular " + tag, triangular, 1e-12, triangular <= 1e-12});
    checks.push_back({"lower_adjoint_u_independent " + tag, u_spread, 1e-10, u_spread <= 1e-10});
  }
}

void cone_checks(double eps, std::uint64_t trials, std::uint64_t seed, std::vector<Check>& checks) {
  const ConeProblem p{10.0, eps, Base(10)};
  p.validate();
  const double c = sl2_cone_coefficient(p);
  double spread = 0.0;
  for (double x : {2.0, 5.0, 10.0}) spread = std::max(spread, std::fabs(sl2_cone_volume(p, x) / std::log(x) - c) / c);
  checks.push_back({"cone_volume_over_log_constant", spread, 1e-9, spread <= 1e-9});

  double cdf_gap = 0.0;
  for (int i = 1; i <= 98; ++i) {
    const double x = 1.0 + 9.0 * i / 99.0;
    cdf_gap = std::max(cdf_gap, std::fabs(sl2_cone_cdf(p, x) - std::log10(x)));
  }
  checks.push_back({"cone_cdf_log_base", cdf_gap, 1e-9, cdf_gap <= 1e-9});

  RngStream rng(seed, 2);
  const auto mc = sl2_cone_volume_mc(p, 10.0, trials, rng);
  const double exact = sl2_cone_volume(p, 10.0);
  const double gap = std::fabs(mc.value - exact) / exact;
  checks.push_back({"cone_volume_monte_carlo_gap", gap, 0.02, gap < 0.02});

  const auto area = hyperbolic_cone_area_mc(1.0, 4.0, trials, rng);
  const double z = std::fabs(area.value - hyperbolic_cone_area(1.0, 4.0)) / area.std_error;
  checks.push_back({"hyperbolic_area_monte_carlo_sigmas", z, 3.0, z < 3.0});
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  if (o.suite != "adjoint" && o.suite != "cone" && o.suite != "all") {
    throw UsageError("--suite must be adjoint, cone or all");
  }
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  if (!(o.eps > 0.0) || !(o.eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
  const std::uint64_t seed = resolve_seed(o.seed);
  std::vector<Check> checks;
  if (o.suite != "cone") adjoint_checks(seed, checks);
  if (o.suite != "adjoint") cone_checks(o.eps, o.trials, seed, checks);

  bool all = true;
  json arr = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    arr.push_back({{"name", c.name}, {"value", num(c.value)}, {"threshold", num(c.threshold)}, {"pass", c.pass}});
  }
  json j;
  j["schema"] = kSchema;
  j["command"] = "verify";
  j["suite"] = o.suite;
  j["seed"] = seed;
  if (o.suite != "adjoint") {
    j["eps"] = num(o.eps);
    j["trials"] = o.trials;
  }
  j["checks"] = arr;
  j["pass"] = all;
  emit(dump(j), o.output, out);
  return all ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leading-digit laws of Haar measures and sphere components", "haar_digits"};
  app.require_subcommand(1);

  LawOptions law;
  auto* law_cmd = app.add_subcommand("law", "Tabulate a significand law on a 99-point grid");
  law_cmd->add_option("--law", law.law, "benford|power|uniform|sphere-exact|sphere-erf|sphere-limit")
      ->required();
  law_cmd->add_option("--k", law.k, "power-law exponent");
  law_cmd->add_option("--n", law.n, "sphere dimension");
  law_cmd->add_option("--base", law.base)->capture_default_str();
  law_cmd->add_option("--format", law.format)->capture_default_str();
  law_cmd->add_option("--output", law.output);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw significands from a group and test them");
  sample_cmd
      ->add_option("--group", sample.group,
                   "rplus|power|triangular|diagonal|sln|gln-det|orthogonal|unitary|sphere")
      ->required();
  sample_cmd->add_option("--n", sample.n)->capture_default_str();
  sample_cmd->add_option("--N", sample.count)->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed);
  sample_cmd->add_option("--base", sample.base)->capture_default_str();
  sample_cmd->add_option("--m", sample.m, "decades in the diagonal window")->capture_default_str();
  sample_cmd->add_option("--eps", sample.eps, "unipotent box half-width")->capture_default_str();
  sample_cmd->add_option("--k", sample.k, "power-density exponent")->capture_default_str();
  sample_cmd->add_option("--entry", sample.entry, "1-based i,j")->capture_default_str();
  sample_cmd->add_option("--side", sample.side, "left|right")->capture_default_str();
  sample_cmd->add_flag("--det-one", sample.det_one);
  sample_cmd->add_flag("--permute", sample.permute, "random even row/column permutations");
  sample_cmd->add_option("--workers", sample.workers)->capture_default_str();
  sample_cmd->add_option("--format", sample.format)->capture_default_str();
  sample_cmd->add_option("--output", sample.output, "report path");
  sample_cmd->add_option("--samples", sample.samples, "CSV path for the raw samples");

  Fig1Options fig1;
  auto* fig1_cmd = app.add_subcommand("fig1", "First-digit frequencies of sphere components");
  fig1_cmd->add_option("--dims", fig1.dims)->capture_default_str();
  fig1_cmd->add_option("--N", fig1.count)->capture_default_str();
  fig1_cmd->add_option("--seed", fig1.seed);
  fig1_cmd->add_option("--base", fig1.base)->capture_default_str();
  fig1_cmd->add_option("--workers", fig1.workers)->capture_default_str();
  fig1_cmd->add_option("--format", fig1.format)->capture_default_str();
  fig1_cmd->add_option("--output", fig1.output);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Adjoint-determinant and SL2 cone checks");
  verify_cmd->add_option("--suite", verify.suite, "adjoint|cone|all")->capture_default_str();
  verify_cmd->add_option("--eps", verify.eps)->capture_default_str();
  verify_cmd->add_option("--trials", verify.trials)->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--output", verify.output);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*law_cmd) {
      emit(cmd_law(law), law.output, out);
    } else if (*sample_cmd) {
      emit(cmd_sample(sample, out), sample.output, out);
    } else if (*fig1_cmd) {
      emit(cmd_fig1(fig1), fig1.output, out);
    } else if (*verify_cmd) {
      return cmd_verify(verify, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace haardigits::cli
