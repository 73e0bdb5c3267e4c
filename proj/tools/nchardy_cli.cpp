// Batch front-end: one job per process, JSON in, JSON report out.
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nchardy/classical.hpp"
#include "nchardy/factorization.hpp"
#include "nchardy/io.hpp"
#include "nchardy/kernels.hpp"
#include "nchardy/transforms.hpp"

using namespace nchardy;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitDiagnostic = 2;

struct JobConfig {
  std::string command;
  std::string input;
  int degree = 8;
  std::optional<int> d;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  int threads = 1;
  std::string out;
  bool force = false;
  std::string pairs;
  std::string point;
  std::string poly;
  int samples = 1000;
  int sampleLevel = 3;
  double sampleRowNorm = 0.7;
  int probe = 0;
  std::string w;
  double t = 1.0;
};

// Input problem tied to a file; path locates the offending JSON node.
struct InputError {
  std::string file;
  std::string path;
  std::string message;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json load(const std::string& file) {
  try {
    return read_json_file(file);
  } catch (const ParseError& e) {
    throw InputError{file, e.path, e.what()};
  }
}

template <class F>
auto parse_or_throw(const std::string& file, F parse) {
  try {
    return parse(load(file));
  } catch (const ParseError& e) {
    throw InputError{file, e.path, e.what()};
  }
}

Series load_series(const JobConfig& cfg) {
  Series f = parse_or_throw(cfg.input, [](const Json& j) { return series_from_json(j); });
  if (cfg.d && *cfg.d != f.alphabet())
    throw InputError{cfg.input, "$.d", "series has d = " + std::to_string(f.alphabet()) + " but --d " + std::to_string(*cfg.d)};
  return f;
}

std::vector<SingularityPair> load_pairs(const JobConfig& cfg, int d) {
  if (cfg.pairs.empty()) return {};
  auto pairs = parse_or_throw(cfg.pairs, [](const Json& j) { return pairs_from_json(j); });
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].Z.d != d)
      throw InputError{cfg.pairs, "$[" + std::to_string(i) + "].Z.d", "pair alphabet does not match the series"};
  return pairs;
}

Complex parse_complex(const std::string& s, const std::string& flag) {
  std::istringstream in(s);
  double re = 0, im = 0;
  char comma = 0;
  in >> re;
  if (!in) throw InputError{"", flag, "expected re,im but got '" + s + "'"};
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw InputError{"", flag, "expected re,im but got '" + s + "'"};
  }
  std::string rest;
  if (in >> rest) throw InputError{"", flag, "trailing characters in '" + s + "'"};
  return {re, im};
}

OrderedJson singular_json(const SingularReport& r) {
  OrderedJson out;
  out["singular"] = r.singular;
  out["constant_sigma"] = r.constantSigma;
  out["min_sample_sigma"] = r.minSampleSigma;
  out["sample_tail_bound"] = r.sampleTailBound;
  out["samples"] = r.samples;
  OrderedJson radii = OrderedJson::array();
  for (const auto& [rad, sig] : r.radiusSigma) radii.push_back({{"r", rad}, {"sigma_min", sig}});
  out["radius_sigma"] = std::move(radii);
  return out;
}

struct Report {
  OrderedJson inputs = OrderedJson::object();
  OrderedJson parameters = OrderedJson::object();
  OrderedJson outputs = OrderedJson::object();
  OrderedJson defects = OrderedJson::object();
  OrderedJson timings = OrderedJson::object();
  bool diagnostic = false;
};

std::vector<NcPoint> sample_points(const JobConfig& cfg, int d, std::mt19937_64& rng) {
  return random_points(d, cfg.samples, cfg.sampleLevel, cfg.sampleRowNorm, rng);
}

void run_factor(const JobConfig& cfg, Report& rep) {
  Series h = load_series(cfg);
  auto pairs = load_pairs(cfg, h.alphabet());
  rep.inputs["series"] = series_to_json(h);
  OrderedJson pj = OrderedJson::array();
  for (const auto& p : pairs) pj.push_back(pair_to_json(p));
  rep.inputs["pairs"] = std::move(pj);
  const double tol = cfg.tol.value_or(kSingularTol);
  rep.parameters["tol"] = tol;
  std::mt19937_64 rng(cfg.seed);
  auto samples = sample_points(cfg, h.alphabet(), rng);
  auto t0 = Clock::now();
  BsoResult r = bso_factor(h, cfg.degree, pairs, samples, tol);
  rep.timings["factor"] = seconds_since(t0);
  rep.outputs["B"] = series_to_json(r.B);
  rep.outputs["S"] = series_to_json(r.S);
  rep.outputs["F"] = series_to_json(r.F);
  rep.outputs["inner"] = series_to_json(r.innerOuter.inner);
  rep.outputs["wandering_dim"] = r.innerOuter.wanderingDim;
  rep.outputs["inner_outer_method"] = r.innerOuter.method;
  rep.outputs["split_method"] = r.split.method;
  rep.outputs["valid_degree"] = std::min(r.innerOuter.validDegree, r.split.validDegree);
  rep.defects["inner"] = r.innerOuter.defects.innerDefect;
  rep.defects["inner_truncated"] = r.innerOuter.defects.truncatedInnerDefect;
  // Vacuum distance to the window range of F(L); decays with the degree rather than vanishing.
  rep.defects["outer"] = r.innerOuter.defects.outerDefect;
  rep.defects["inner_outer_reconstruction"] = r.innerOuter.defects.reconstructionError;
  rep.defects["split_reconstruction"] = r.split.reconstructionError;
  rep.defects["singular_inner"] = r.split.sInnerDefect;
  rep.defects["blaschke"] = r.split.blaschkeDefect;
  rep.defects["blaschke_inner"] = r.split.thetaBlaschkeDefect;
  rep.defects["reconstruction"] = r.reconstructionError;
  rep.defects["singular_test"] = singular_json(r.split.singular);
  rep.diagnostic = r.split.samplingInsufficient;
}

void run_eval(const JobConfig& cfg, Report& rep) {
  Series f = load_series(cfg);
  if (cfg.point.empty()) throw InputError{"", "--point", "eval needs --point"};
  NcPoint z = parse_or_throw(cfg.point, [](const Json& j) { return point_from_json(j); });
  if (z.d != f.alphabet()) throw InputError{cfg.point, "$.d", "point alphabet does not match the series"};
  rep.inputs["series"] = series_to_json(f);
  rep.inputs["point"] = point_to_json(z);
  auto t0 = Clock::now();
  CMatrix v = eval(f, z);
  rep.timings["eval"] = seconds_since(t0);
  rep.outputs["value"] = matrix_to_json(v);
  rep.outputs["row_norm"] = z.rowNorm;
  rep.defects["tail_bound"] = tail_bound(f, z.rowNorm, f.maxDegree());
}

void run_kernel(const JobConfig& cfg, Report& rep) {
  SingularityPair p = parse_or_throw(cfg.input, [](const Json& j) { return pair_from_json(j); });
  if (cfg.d && *cfg.d != p.Z.d) throw InputError{cfg.input, "$.Z.d", "pair has a different alphabet than --d"};
  if (cfg.probe < 0 || cfg.probe >= p.Z.n)
    throw InputError{"", "--probe", "probe index must lie in [0, " + std::to_string(p.Z.n) + ")"};
  rep.inputs["pair"] = pair_to_json(p);
  rep.parameters["probe"] = cfg.probe;
  CVector v = CVector::Unit(p.Z.n, cfg.probe);
  auto t0 = Clock::now();
  KernelVector k = szego_kernel(p.Z, p.y, v, cfg.degree);
  rep.timings["kernel"] = seconds_since(t0);
  rep.outputs["kernel"] = series_to_json(k.series);
  rep.defects["tail_bound"] = tail_bound(p.y.norm() * v.norm(), p.Z.rowNorm, cfg.degree);
}

void run_classify(const JobConfig& cfg, Report& rep) {
  Series th = load_series(cfg);
  auto pairs = load_pairs(cfg, th.alphabet());
  rep.inputs["series"] = series_to_json(th);
  OrderedJson pj = OrderedJson::array();
  for (const auto& p : pairs) pj.push_back(pair_to_json(p));
  rep.inputs["pairs"] = std::move(pj);
  const double tol = cfg.tol.value_or(kSingularTol);
  rep.parameters["tol"] = tol;
  std::mt19937_64 rng(cfg.seed);
  auto samples = sample_points(cfg, th.alphabet(), rng);
  auto t0 = Clock::now();
  const int window = std::min(2, std::max(0, cfg.degree - std::max(th.degree(), 0)));
  rep.defects["inner"] = series_isometry_defect(th.withMaxDegree(cfg.degree), window);
  SplitResult s = blaschke_singular_split(th, pairs, cfg.degree, samples, tol);
  rep.timings["classify"] = seconds_since(t0);
  // A sampled zero of Theta without pairs to build B from cannot be attributed.
  std::string label;
  if (s.samplingInsufficient) {
    label = "inconclusive";
  } else if (s.method == "no-pairs") {
    label = s.singular.singular ? "singular" : "inconclusive";
  } else {
    Series s0 = Series::constant(th.alphabet(), s.S.constantTerm(), s.S.maxDegree());
    label = max_coeff_diff(s.S, s0, s.validDegree) <= 1e-8 ? "blaschke" : "mixed";
  }
  rep.outputs["class"] = label;
  rep.outputs["split_method"] = s.method;
  rep.outputs["wandering_dim"] = s.wanderingDim;
  rep.outputs["B"] = series_to_json(s.B);
  rep.outputs["S"] = series_to_json(s.S);
  rep.defects["split_reconstruction"] = s.reconstructionError;
  rep.defects["singular_inner"] = s.sInnerDefect;
  rep.defects["blaschke"] = s.blaschkeDefect;
  rep.defects["blaschke_inner"] = s.thetaBlaschkeDefect;
  rep.defects["singular_test"] = singular_json(s.singular);
  rep.diagnostic = label == "inconclusive";
}

void run_shift(const JobConfig& cfg, Report& rep, bool isFrostman) {
  Series th = load_series(cfg);
  if (cfg.w.empty()) throw InputError{"", "--w", "missing --w re,im"};
  const Complex w = parse_complex(cfg.w, "--w");
  if (!(std::abs(w) < 1)) throw InputError{"", "--w", "need |w| < 1"};
  rep.inputs["series"] = series_to_json(th);
  rep.parameters["w"] = complex_to_json(w);
  auto t0 = Clock::now();
  Series out = isFrostman ? frostman(th, w, cfg.degree) : crofoot(th, w, cfg.degree);
  rep.timings[isFrostman ? "frostman" : "crofoot"] = seconds_since(t0);
  rep.outputs["series"] = series_to_json(out);
  if (isFrostman) rep.defects["inner"] = series_isometry_defect(out, std::min(1, cfg.degree));
}

void run_semigroup(const JobConfig& cfg, Report& rep) {
  Series b = load_series(cfg);
  if (!(cfg.t >= 0)) throw InputError{"", "--t", "need t >= 0"};
  rep.inputs["series"] = series_to_json(b);
  rep.parameters["t"] = cfg.t;
  const double tol = cfg.tol.value_or(kSingularTol);
  rep.parameters["tol"] = tol;
  std::mt19937_64 rng(cfg.seed);
  auto samples = sample_points(cfg, b.alphabet(), rng);
  auto t0 = Clock::now();
  Series bt = semigroup_inner(b, cfg.t, cfg.degree);
  rep.timings["semigroup"] = seconds_since(t0);
  t0 = Clock::now();
  SingularReport sr = singular_test(bt, samples, tol);
  rep.timings["singular_test"] = seconds_since(t0);
  rep.outputs["series"] = series_to_json(bt);
  rep.defects["singular_test"] = singular_json(sr);
}

void run_idempotent(const JobConfig& cfg, Report& rep) {
  Series e = load_series(cfg);
  const double tol = cfg.tol.value_or(kIdempotentTol);
  rep.inputs["series"] = series_to_json(e);
  rep.parameters["tol"] = tol;
  auto t0 = Clock::now();
  IdempotentSplit s = idempotent_split(e, cfg.degree, tol);
  rep.timings["idempotent"] = seconds_since(t0);
  rep.outputs["S"] = series_to_json(s.S);
  rep.outputs["S_inverse"] = series_to_json(s.Stilde);
  rep.outputs["P"] = matrix_to_json(s.P);
  rep.outputs["m"] = s.m;
  rep.outputs["k"] = s.k;
  rep.defects["idempotent"] = s.idempotentDefect;
  rep.defects["conjugation_residual"] = s.residual;
}

void run_compare(const JobConfig& cfg, Report& rep) {
  if (cfg.poly.empty()) throw InputError{"", "--poly", "compare-classical needs --poly"};
  std::vector<Complex> coeffs = parse_or_throw(cfg.poly, [](const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("$", "expected a nonempty array of [re, im] coefficients");
    std::vector<Complex> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(complex_from_json(j[i], "$[" + std::to_string(i) + "]"));
    return c;
  });
  OrderedJson cj = OrderedJson::array();
  for (Complex c : coeffs) cj.push_back(complex_to_json(c));
  rep.inputs["poly"] = std::move(cj);
  auto t0 = Clock::now();
  ClassicalComparison c = compare_with_nc(coeffs, cfg.degree);
  rep.timings["compare"] = seconds_since(t0);
  OrderedJson zeros = OrderedJson::array();
  for (Complex z : c.classical.zeros) zeros.push_back(complex_to_json(z));
  rep.outputs["zeros"] = std::move(zeros);
  OrderedJson blocks = OrderedJson::array();
  for (const auto& b : c.blocks)
    blocks.push_back({{"w", complex_to_json(b.w)}, {"multiplicity", b.multiplicity}, {"epsilon", b.epsilon}, {"binding", b.binding}});
  rep.outputs["jordan_blocks"] = std::move(blocks);
  rep.outputs["valid_degree"] = c.validDegree;
  rep.outputs["classical"] = {{"B", series_to_json(c.classical.blaschke)},
                              {"S", series_to_json(c.classical.singular)},
                              {"F", series_to_json(c.classical.outer)}};
  rep.outputs["nc"] = {{"B", series_to_json(c.nc.B)}, {"S", series_to_json(c.nc.S)}, {"F", series_to_json(c.nc.F)}};
  rep.defects["blaschke_diff"] = c.blaschkeDiff;
  rep.defects["singular_diff"] = c.singularDiff;
  rep.defects["outer_diff"] = c.outerDiff;
  rep.defects["classical_reconstruction"] = c.classical.reconstructionError;
  rep.defects["nc_reconstruction"] = c.nc.reconstructionError;
  rep.diagnostic = c.nc.split.samplingInsufficient;
}

void emit(const JobConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  f << text;
  if (!f) throw InputError{cfg.out, "--out", "cannot write report"};
}

int fail(const JobConfig& cfg, const std::string& kind, const std::string& file, const std::string& path,
         const std::string& message, int code) {
  OrderedJson err;
  err["kind"] = kind;
  if (!file.empty()) err["file"] = file;
  if (!path.empty()) err["path"] = path;
  err["message"] = message;
  OrderedJson top;
  top["command"] = cfg.command;
  top["error"] = std::move(err);
  std::cout << top.dump(2) << "\n";
  return code;
}

int run(const JobConfig& cfg) {
  const auto start = Clock::now();
  const std::string startedUtc = utc_now();
  Report rep;
  OrderedJson warnings = OrderedJson::array();
  set_warning_handler([&](const std::string& msg) { warnings.push_back(msg); });
  try {
    if (!cfg.out.empty() && std::filesystem::exists(cfg.out) && !cfg.force)
      throw InputError{cfg.out, "--out", "report exists; pass --force to overwrite"};
    Eigen::setNbThreads(cfg.threads);
    rep.parameters["degree"] = cfg.degree;
    rep.parameters["seed"] = cfg.seed;
    rep.parameters["threads"] = cfg.threads;
    rep.parameters["samples"] = cfg.samples;
    rep.parameters["sample_level"] = cfg.sampleLevel;
    rep.parameters["sample_row_norm"] = cfg.sampleRowNorm;
    if (cfg.command == "factor") run_factor(cfg, rep);
    else if (cfg.command == "eval") run_eval(cfg, rep);
    else if (cfg.command == "kernel") run_kernel(cfg, rep);
    else if (cfg.command == "classify") run_classify(cfg, rep);
    else if (cfg.command == "frostman") run_shift(cfg, rep, true);
    else if (cfg.command == "crofoot") run_shift(cfg, rep, false);
    else if (cfg.command == "semigroup") run_semigroup(cfg, rep);
    else if (cfg.command == "idempotent") run_idempotent(cfg, rep);
    else if (cfg.command == "compare-classical") run_compare(cfg, rep);
  } catch (const InputError& e) {
    return fail(cfg, "input", e.file, e.path, e.message, kExitInput);
  } catch (const Diagnostic& e) {
    return fail(cfg, "diagnostic", "", "", e.what(), kExitDiagnostic);
  } catch (const Error& e) {
    return fail(cfg, "validation", "", "", e.what(), kExitInput);
  }
  rep.timings["total"] = seconds_since(start);

  OrderedJson report;
  report["command"] = cfg.command;
  report["status"] = rep.diagnostic ? "diagnostic" : "ok";
  report["inputs"] = std::move(rep.inputs);
  report["parameters"] = std::move(rep.parameters);
  report["outputs"] = std::move(rep.outputs);
  report["defects"] = std::move(rep.defects);
  report["warnings"] = std::move(warnings);
  // Everything that varies between identical runs lives under this one key.
  report["timestamp"] = {{"utc", startedUtc}, {"timings_seconds", std::move(rep.timings)}};
  try {
    emit(cfg, report.dump(2) + "\n");
  } catch (const InputError& e) {
    return fail(cfg, "input", e.file, e.path, e.message, kExitInput);
  }
  return rep.diagnostic ? kExitDiagnostic : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noncommutative Hardy-space computations driven by JSON inputs."};
  app.require_subcommand(1);
  JobConfig cfg;

  auto common = [&](CLI::App* sub, const std::string& tolHelp) {
    sub->add_option("--degree", cfg.degree, "Truncation degree N")->capture_default_str()->check(CLI::Range(1, 4096));
    sub->add_option("--d", cfg.d, "Expected alphabet size; the input must match")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Seed for every randomized step")->capture_default_str();
    if (!tolHelp.empty()) sub->add_option("--tol", cfg.tol, tolHelp)->check(CLI::PositiveNumber);
    sub->add_option("--threads", cfg.threads, "Thread cap for the linear algebra")->capture_default_str()->check(CLI::Range(1, 1024));
    sub->add_option("--out", cfg.out, "Report file (stdout when absent)");
    sub->add_flag("--force", cfg.force, "Overwrite an existing report");
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--samples", cfg.samples, "Random points for the singular test")->capture_default_str()->check(CLI::Range(0, 10000000));
    sub->add_option("--sample-level", cfg.sampleLevel, "Largest sampled level")->capture_default_str()->check(CLI::Range(1, 64));
    sub->add_option("--sample-row-norm", cfg.sampleRowNorm, "Largest sampled row norm")->capture_default_str()->check(CLI::Range(0.0, 0.99));
  };
  auto input = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("input", cfg.input, what)->required()->check(CLI::ExistingFile);
  };

  auto* factor = app.add_subcommand("factor", "Blaschke-singular-outer factorization of a series");
  input(factor, "Series JSON");
  common(factor, "Singular-test threshold on sigma_min (default 1e-12)");
  sampling(factor);
  factor->add_option("--pairs", cfg.pairs, "Singularity pairs JSON (one pair or an array)")->check(CLI::ExistingFile);

  auto* ev = app.add_subcommand("eval", "Evaluate a series at a matrix point");
  input(ev, "Series JSON");
  common(ev, "");
  ev->add_option("--point", cfg.point, "Point JSON")->required()->check(CLI::ExistingFile);

  auto* kernel = app.add_subcommand("kernel", "Szego kernel vector of a pair (Z, y) with probe e_j");
  input(kernel, "Pair JSON");
  common(kernel, "");
  kernel->add_option("--probe", cfg.probe, "Index j of the probe vector e_j")->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Classify an inner series as Blaschke, singular or mixed");
  input(classify, "Series JSON");
  common(classify, "Singular-test threshold on sigma_min (default 1e-12)");
  sampling(classify);
  classify->add_option("--pairs", cfg.pairs, "Singularity pairs JSON")->check(CLI::ExistingFile);

  auto* fro = app.add_subcommand("frostman", "Frostman shift (Theta - w)(1 - conj(w) Theta)^{-1}");
  input(fro, "Series JSON");
  common(fro, "");
  fro->add_option("--w", cfg.w, "Parameter w as re,im with |w| < 1")->required();

  auto* cro = app.add_subcommand("crofoot", "Crofoot multiplier sqrt(1 - |w|^2)(1 - conj(w) Theta)^{-1}");
  input(cro, "Series JSON");
  common(cro, "");
  cro->add_option("--w", cfg.w, "Parameter w as re,im with |w| < 1")->required();

  auto* semi = app.add_subcommand("semigroup", "Singular inner exp(-t (1 + B)(1 - B)^{-1})");
  input(semi, "Series JSON");
  common(semi, "Singular-test threshold on sigma_min (default 1e-12)");
  sampling(semi);
  semi->add_option("--t", cfg.t, "Semigroup parameter t >= 0")->capture_default_str();

  auto* idem = app.add_subcommand("idempotent", "Similarity of an idempotent series to a constant projection");
  input(idem, "Series JSON");
  common(idem, "Largest accepted idempotent defect max|E^2 - E| (default 1e-9)");

  auto* cmp = app.add_subcommand("compare-classical", "Classical and NC factorizations of a one-variable polynomial");
  common(cmp, "");
  cmp->add_option("--poly", cfg.poly, "JSON array of [re, im] coefficients, ascending powers")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    cfg.command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    return fail(cfg, "usage", "", "", e.what(), kExitInput);
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg);
}
