#include "hardy/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hardy/constants.hpp"
#include "hardy/errors.hpp"
#include "hardy/functionals.hpp"
#include "hardy/mc.hpp"
#include "hardy/testfamilies.hpp"
#include "hardy/verify.hpp"

#ifndef HARDY_VERSION
#define HARDY_VERSION "0.0.0"
#endif

namespace hardy::cli {

using nlohmann::json;

namespace {

struct Options {
  int n = 1;
  double s = 0.75, p = 2.0, alpha = 0.0;
  double beta = 0.0, eps = 0.1;
  double theta = 1.0, m = 1.0;
  double tol = -1.0;  // < 0: per-check default
  std::string tau = "0.5,1,2";
  std::string eps_seq = "0.1,0.01,0.001,0.0001";
  std::string R0 = "2,4,8";
  int grid = 41;
  int corpus = 10;
  std::string check;
  std::uint64_t seed = 1;
  int threads = 0;
  std::int64_t samples = 0;  // 0: per-check default
  std::string format = "json";
  std::string output;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HARDY_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 1;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void strip_volatile(json& j) {
  if (j.is_object()) {
    j.erase("runtime_s");
    j.erase("timestamp");
    j.erase("report_hash");
    for (auto& [k, v] : j.items()) strip_volatile(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_volatile(v);
  }
}

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    std::ostringstream o;
    o << std::setprecision(17) << v.get<double>();
    return o.str();
  }
  return v.dump();
}

void write_csv(std::ostream& o, const std::vector<std::string>& cols, const json& rows) {
  for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << cols[i];
  o << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << csv_cell(r.value(cols[i], json()));
    o << "\n";
  }
}

const std::vector<std::string> kReportCols = {"identity", "pass",     "lhs",    "rhs",
                                              "abs_err",  "rel_err",  "tolerance", "stderr",
                                              "relation", "active_criterion", "seed"};

struct Outcome {
  json doc;                       // everything but meta
  std::vector<std::string> cols;  // csv projection
  json rows = json::array();
  bool pass = true;
};

Outcome from_reports(const std::vector<VerificationReport>& reps) {
  Outcome o;
  o.cols = kReportCols;
  json arr = json::array();
  for (const auto& r : reps) {
    arr.push_back(r.to_json());
    o.pass = o.pass && r.pass;
  }
  o.doc["reports"] = arr;
  o.doc["pass"] = o.pass;
  o.rows = arr;
  return o;
}

HardyParams params_of(const Options& op) {
  HardyParams hp{op.n, op.s, op.p, op.alpha};
  hp.validate();
  return hp;
}

std::vector<double> nonempty(const std::string& text, const char* what) {
  auto v = parse_list(text);
  if (v.empty()) throw ParameterError("grid_nonempty", std::string(what) + " is empty");
  return v;
}

Outcome cmd_constants(const Options& op) {
  const HardyParams hp = params_of(op);
  const auto br = constants::sharp_constant(hp);
  Outcome o;
  o.doc["params"] = {{"n", hp.n}, {"s", hp.s}, {"p", hp.p}, {"alpha", hp.alpha}};
  o.doc["lambda_capital"] = br.lambda_capital;
  o.doc["C_geom"] = br.C_geom;
  o.doc["sharp"] = br.product;
  o.doc["sharp_error_estimate"] = br.error_estimate;
  json row = {{"n", hp.n}, {"s", hp.s}, {"p", hp.p}, {"alpha", hp.alpha}, {"lambda_capital", br.lambda_capital},
              {"C_geom", br.C_geom}, {"sharp", br.product}, {"sharp_error_estimate", br.error_estimate}};
  o.cols = {"n", "s", "p", "alpha", "lambda_capital", "C_geom", "sharp", "sharp_error_estimate"};
  if (hp.alpha == 0.0 && std::abs(hp.sp() - 1.0) > 1e-14) {
    const auto eu = constants::euclidean_halfspace_constant(2 * hp.n + 1, hp.p, hp.s);
    o.doc["euclid_halfspace"] = {{"dimension", 2 * hp.n + 1}, {"value", eu.value}, {"error", eu.error_estimate}};
    row["euclid_halfspace"] = eu.value;
    o.cols.push_back("euclid_halfspace");
  }
  o.rows.push_back(row);
  return o;
}

Outcome cmd_verify(const Options& op) {
  const auto tol = [&](double d) { return op.tol >= 0.0 ? op.tol : d; };
  const auto samples = [&](std::int64_t d) { return op.samples > 0 ? op.samples : d; };
  verify::McScheme mc{samples(400000), op.seed, op.threads};
  std::vector<VerificationReport> reps;
  if (op.check == "lemma51") {
    reps.push_back(verify::verify_lemma51(op.n, op.theta, op.alpha, op.m, mc, tol(1e-6)));
    reps.push_back(verify::verify_lemma51_scaling(op.n, op.theta, op.alpha, op.m, mc, tol(1e-6)));
  } else if (op.check == "feps") {
    reps.push_back(verify::verify_Feps(op.beta, op.s, op.p, op.eps, nonempty(op.tau, "tau grid"),
                                       tol(op.beta == 0.0 ? 1e-8 : 1e-6)));
  } else if (op.check == "lambda-limit") {
    reps.push_back(verify::verify_lambda_limit(op.beta, op.s, op.p, nonempty(op.eps_seq, "eps sequence"), tol(1e-3)));
  } else if (op.check == "geps") {
    reps = verify::verify_geps_limits(op.s, op.p, op.n, mc).reports;
  } else if (op.check == "lemma42") {
    reps.push_back(lemma42_check(samples(1000000), op.seed));
  } else if (op.check == "inequality") {
    const HardyParams hp = params_of(op);
    SeminormScheme sc;
    sc.samples = samples(400000);
    sc.seed = op.seed;
    sc.threads = op.threads;
    for (const auto& f : families::bump_corpus(hp.n, op.corpus, op.seed)) {
      reps.push_back(verify::verify_inequality(f, hp, sc));
    }
  } else if (op.check == "convergence") {
    const HardyParams hp = params_of(op);
    SeminormScheme sc;
    sc.samples = samples(1000000);
    sc.seed = op.seed;
    sc.threads = op.threads;
    auto st = verify::convergence_study(hp, nonempty(op.R0, "R0 list"), std::nullopt, sc);
    reps = {st.monotone, st.final_within, st.lower_bound};
  } else {
    throw ParameterError("known_check", "unknown check '" + op.check + "'");
  }
  return from_reports(reps);
}

Outcome cmd_scan_beta(const Options& op) {
  if (op.grid < 2) throw ParameterError("grid_nonempty", "beta grid needs at least 2 points");
  const auto sc = families::beta_scan(op.s, op.p, op.alpha, families::default_beta_grid(op.s, op.p, op.alpha, op.grid));
  Outcome o;
  o.cols = {"beta", "lambda", "is_argmax"};
  for (const auto& r : sc.table) {
    o.rows.push_back({{"beta", r.beta}, {"lambda", r.lambda}, {"is_argmax", r.beta == sc.argmax_beta}});
  }
  o.doc["params"] = {{"s", op.s}, {"p", op.p}, {"alpha", op.alpha}, {"grid", op.grid}};
  o.doc["argmax_beta"] = sc.argmax_beta;
  o.doc["max_lambda"] = sc.max_lambda;
  o.doc["optimum_closed_form"] = sc.optimum_closed_form;
  o.doc["grid_step"] = sc.grid_step;
  o.doc["table"] = o.rows;
  return o;
}

Outcome cmd_scan_convergence(const Options& op) {
  const HardyParams hp = params_of(op);
  SeminormScheme sc;
  sc.samples = op.samples > 0 ? op.samples : 1000000;
  sc.seed = op.seed;
  sc.threads = op.threads;
  const auto st = verify::convergence_study(hp, nonempty(op.R0, "R0 list"), std::nullopt, sc);
  Outcome o;
  o.cols = {"R0", "quotient", "stderr", "ratio_to_sharp", "reduced_gap"};
  for (const auto& r : st.rows) {
    o.rows.push_back({{"R0", r.R0}, {"quotient", r.rayleigh.quotient}, {"stderr", r.rayleigh.stderr_q},
                      {"ratio_to_sharp", r.ratio_to_sharp}, {"reduced_gap", r.reduced_gap}});
  }
  o.doc["sharp"] = st.sharp;
  o.doc["reduced_1d"] = st.reduced_1d;
  o.doc["fitted_exponent"] = st.fitted_exponent ? json(*st.fitted_exponent) : json(nullptr);
  o.doc["predicted_exponent"] = st.predicted_exponent;
  o.doc["table"] = o.rows;
  o.doc["reports"] = {st.monotone.to_json(), st.final_within.to_json(), st.lower_bound.to_json()};
  o.pass = st.monotone.pass && st.final_within.pass && st.lower_bound.pass;
  o.doc["pass"] = o.pass;
  return o;
}

json config_of(const Options& op, const std::string& command) {
  return {{"command", command}, {"n", op.n},          {"s", op.s},         {"p", op.p},
          {"alpha", op.alpha},  {"beta", op.beta},    {"eps", op.eps},     {"theta", op.theta},
          {"m", op.m},          {"tol", op.tol},      {"tau", op.tau},     {"eps_seq", op.eps_seq},
          {"R0", op.R0},        {"grid", op.grid},    {"corpus", op.corpus}, {"check", op.check},
          {"seed", op.seed},    {"samples", op.samples}, {"format", op.format}};
}

void emit_text(std::ostream& o, const json& doc) {
  for (const auto& [k, v] : doc.items()) {
    if (k == "meta" || k == "config") continue;
    if (v.is_array()) {
      o << k << ":\n";
      for (const auto& e : v) o << "  " << e.dump() << "\n";
    } else {
      o << k << ": " << v.dump() << "\n";
    }
  }
  o << "seed: " << doc["meta"]["seed"] << "  version: " << doc["meta"]["version"].get<std::string>()
    << "  hash: " << doc["meta"]["report_hash"].get<std::string>() << "\n";
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParameterError("numeric_list", "cannot parse '" + item + "' as a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ParameterError("numeric_list", "cannot parse '" + item + "' as a number");
    }
    out.push_back(v);
  }
  return out;
}

std::string report_hash(const json& doc) {
  json c = doc;
  strip_volatile(c);
  const std::string text = c.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options op;
  op.seed = default_seed();
  CLI::App app{"Sharp fractional Hardy constants on the Heisenberg half-space", "hardy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HARDY_VERSION);

  auto common = [&](CLI::App* c) {
    c->add_option("--seed", op.seed, "RNG seed (default: HARDY_SEED or 1)");
    c->add_option("--threads", op.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    c->add_option("--samples", op.samples, "Monte-Carlo budget, 0 = per-check default")
        ->check(CLI::NonNegativeNumber);
    c->add_option("--format", op.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    c->add_option("--output", op.output, "write to file instead of stdout");
  };
  auto hardy_params = [&](CLI::App* c) {
    c->add_option("--n", op.n, "Heisenberg dimension n");
    c->add_option("--s", op.s, "fractional order s");
    c->add_option("--p", op.p, "integrability exponent p");
    c->add_option("--alpha", op.alpha, "weight exponent alpha");
  };

  CLI::App* cc = app.add_subcommand("constants", "sharp constant and its factors");
  hardy_params(cc);
  common(cc);

  CLI::App* cv = app.add_subcommand("verify", "run one verification check");
  cv->add_option("check", op.check, "lemma51 | feps | lambda-limit | geps | lemma42 | inequality | convergence")
      ->required();
  hardy_params(cv);
  cv->add_option("--beta", op.beta, "exponent of u_beta");
  cv->add_option("--eps", op.eps, "excluded-interval parameter");
  cv->add_option("--theta", op.theta, "exponent theta of the x1-gap reduction");
  cv->add_option("--m", op.m, "x1 gap m > 0");
  cv->add_option("--tau", op.tau, "comma-separated tau grid");
  cv->add_option("--eps-seq", op.eps_seq, "comma-separated eps sequence");
  cv->add_option("--R0", op.R0, "comma-separated R0 list");
  cv->add_option("--corpus", op.corpus, "number of corpus functions")->check(CLI::PositiveNumber);
  cv->add_option("--tol", op.tol, "override the check's tolerance");
  common(cv);

  CLI::App* cs = app.add_subcommand("scan", "plot-ready tables");
  cs->require_subcommand(1);
  CLI::App* sb = cs->add_subcommand("beta", "lambda(beta, s', p) on a grid");
  sb->add_option("--s", op.s);
  sb->add_option("--p", op.p);
  sb->add_option("--alpha", op.alpha);
  sb->add_option("--grid", op.grid, "number of grid points");
  common(sb);
  CLI::App* sv = cs->add_subcommand("convergence", "near-optimizer quotients against R0");
  hardy_params(sv);
  sv->add_option("--R0", op.R0, "comma-separated R0 list");
  common(sv);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << HARDY_VERSION << "\n";
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  std::string command;
  Outcome res;
  try {
    if (cc->parsed()) {
      command = "constants";
      res = cmd_constants(op);
    } else if (cv->parsed()) {
      command = "verify " + op.check;
      res = cmd_verify(op);
    } else if (sb->parsed()) {
      command = "scan beta";
      res = cmd_scan_beta(op);
    } else {
      command = "scan convergence";
      res = cmd_scan_convergence(op);
    }
  } catch (const ParameterError& e) {
    err << "parameter error [" << e.predicate() << "]: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kFail;
  }

  json doc = res.doc;
  doc["schema"] = 1;
  doc["config"] = config_of(op, command);
  doc["meta"] = {{"seed", op.seed},
                 {"version", HARDY_VERSION},
                 {"threads", mc::resolve_threads(op.threads)},
                 {"tolerances", {{"quadrature_rel", quad::kDefaultRelTol},
                                 {"semi_infinite_rel", quad::kDefaultSemiInfiniteRelTol},
                                 {"k_sigma", 3.0}}},
                 {"timestamp", utc_timestamp()}};
  // thread count does not change results, so it stays out of the hash
  json hashed = doc;
  hashed["meta"].erase("threads");
  doc["meta"]["report_hash"] = report_hash(hashed);

  std::ofstream file;
  if (!op.output.empty()) {
    file.open(op.output);
    if (!file) {
      err << "cannot open " << op.output << "\n";
      return kUsage;
    }
  }
  std::ostream& o = op.output.empty() ? out : file;
  if (op.format == "json") {
    o << doc.dump(2) << "\n";
  } else if (op.format == "csv") {
    write_csv(o, res.cols, res.rows);
  } else {
    emit_text(o, doc);
  }
  if (!res.pass) {
    for (const auto& r : res.doc.value("reports", json::array())) {
      if (!r.value("pass", true)) err << "FAILED " << r.dump() << "\n";
    }
  }
  return res.pass ? kPass : kFail;
}

}  // namespace hardy::cli
