#include "ggbm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ggbm/errors.hpp"
#include "ggbm/fbm.hpp"
#include "ggbm/green.hpp"
#include "ggbm/io.hpp"
#include "ggbm/montecarlo.hpp"
#include "ggbm/process.hpp"
#include "ggbm/randvar.hpp"
#include "ggbm/specfun.hpp"
#include "ggbm/verify.hpp"

namespace ggbm {
namespace {

constexpr int kEvalDigits = 15;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--" + flag + ": not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--" + flag + ": empty value");
  return out;
}

struct Options {
  std::string beta, alpha, z, tau, t;
  std::optional<int> dim;
  std::optional<std::uint64_t> seed;
  std::int64_t paths = 100000;
  double t_max = 50.0;
  int steps = 2048;
  std::string out;
  std::string format = "text";
  int threads = 0;
  double hurst = 0.5;
  std::int64_t count = 1;
  std::string y, times, theta, x;
  double sigma = 1.0;
  std::string function = "gaussian";
  std::string representation = "product";
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("GGBM_DEFAULT_SEED")) {
    try {
      std::size_t used = 0;
      const std::string s(env);
      const unsigned long long v = std::stoull(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("GGBM_DEFAULT_SEED is not an unsigned integer: '" + std::string(env) + "'");
  }
  return 42;
}

int resolve_threads(const Options& o) {
  if (o.threads > 0) return o.threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Representation parse_representation(const std::string& s) {
  if (s == "product") return Representation::Product;
  if (s == "subordinated") return Representation::Subordinated;
  throw UsageError("--representation must be product or subordinated");
}

// Output sink: --out file or the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void finish(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw std::runtime_error("write failed: " + (path.empty() ? std::string("stdout") : path));
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// ---------------------------------------------------------------- eval

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

std::vector<double> required(const std::string& text, const std::string& flag) {
  if (text.empty()) throw UsageError("missing --" + flag);
  return parse_list(text, flag);
}

std::vector<double> optional_list(const std::string& text, const std::string& flag, double fallback) {
  return text.empty() ? std::vector<double>{fallback} : parse_list(text, flag);
}

Eigen::MatrixXd theta_matrix(const std::vector<double>& flat, std::size_t n, int dim) {
  if (flat.size() != n * static_cast<std::size_t>(dim))
    throw UsageError("--theta needs times*dim = " + std::to_string(n * dim) + " values (row-major)");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), dim);
  for (std::size_t k = 0; k < n; ++k)
    for (int j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(k), j) = flat[k * dim + j];
  return m;
}

int cmd_eval(const std::string& function, const Options& o, std::ostream& out) {
  std::vector<SweepAxis> axes;
  std::function<double(const std::map<std::string, double>&)> eval;
  const int dim = o.dim.value_or(1);

  if (function == "ml") {
    axes = {{"beta", required(o.beta, "beta")}, {"z", required(o.z, "z")}};
    eval = [](const auto& v) {
      ModelParams{v.at("beta"), 1.0, 1}.validate();
      return mittag_leffler(v.at("beta"), v.at("z")).value;
    };
  } else if (function == "mwright") {
    axes = {{"beta", required(o.beta, "beta")}, {"tau", required(o.tau, "tau")}};
    eval = [](const auto& v) {
      ModelParams{v.at("beta"), 1.0, 1}.validate();
      if (v.at("beta") == 1.0) throw DomainError("requires beta < 1 (M_1 is a point mass)");
      return m_wright(v.at("beta"), v.at("tau")).value;
    };
  } else if (function == "green-constant") {
    axes = {{"beta", required(o.beta, "beta")}, {"alpha", required(o.alpha, "alpha")}};
    eval = [dim](const auto& v) {
      const ModelParams p{v.at("beta"), v.at("alpha"), dim};
      if (auto why = p.green_violation()) throw DomainError(*why);
      return green_constant(p);
    };
  } else if (function == "density" || function == "charfun") {
    axes = {{"beta", required(o.beta, "beta")}, {"alpha", required(o.alpha, "alpha")}};
    const bool density = function == "density";
    std::vector<double> times;
    if (!o.times.empty()) {
      times = parse_list(o.times, "times");
    } else {
      axes.push_back({"t", optional_list(o.t, "t", 1.0)});
    }
    const std::string point_flag = density && times.empty() ? "y" : "theta";
    const std::string& point_text = point_flag == "y" ? o.y : o.theta;
    if (point_text.empty()) throw UsageError("missing --" + point_flag);
    const std::vector<double> point = parse_list(point_text, point_flag);
    eval = [=](const auto& v) {
      const ModelParams p{v.at("beta"), v.at("alpha"), dim};
      p.validate();
      const std::vector<double> ts = times.empty() ? std::vector<double>{v.at("t")} : times;
      if (density && times.empty()) {
        if (point.size() != static_cast<std::size_t>(dim)) throw UsageError("--y needs dim values");
        return marginal_density(p, point, ts[0]);
      }
      const Eigen::MatrixXd theta = theta_matrix(point, ts.size(), dim);
      return density ? fdd_density(p, ts, theta) : fdd_charfun(p, ts, theta);
    };
  } else {
    throw UsageError("unknown eval function '" + function + "' (ml, mwright, green-constant, density, charfun)");
  }

  // Cartesian product of the axes, last axis fastest.
  std::vector<std::map<std::string, double>> rows(1);
  for (const auto& axis : axes) {
    std::vector<std::map<std::string, double>> next;
    for (const auto& r : rows)
      for (double v : axis.values) {
        auto copy = r;
        copy[axis.name] = v;
        next.push_back(std::move(copy));
      }
    rows = std::move(next);
  }

  std::vector<double> values;
  for (const auto& r : rows) values.push_back(eval(r));

  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  if (o.format == "csv") {
    for (const auto& axis : axes) s << axis.name << ',';
    s << "value\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const auto& axis : axes) s << format_number(rows[i].at(axis.name)) << ',';
      s << format_number(values[i], kEvalDigits) << '\n';
    }
  } else if (o.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      nlohmann::json row = {{"function", function}};
      for (const auto& axis : axes) row[axis.name] = rows[i].at(axis.name);
      if (function == "green-constant" || function == "density" || function == "charfun") row["dim"] = dim;
      row["value"] = values[i];
      arr.push_back(row);
    }
    s << (arr.size() == 1 ? arr[0] : arr).dump(2) << '\n';
  } else {
    for (double v : values) s << format_number(v, kEvalDigits) << '\n';
  }
  sink.finish(o.out);
  return kExitOk;
}

// ---------------------------------------------------------------- sample

double single(const std::string& text, const std::string& flag) {
  const auto v = required(text, flag);
  if (v.size() != 1) throw UsageError("--" + flag + " takes a single value here");
  return v[0];
}

int cmd_sample(const std::string& what, const Options& o, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(o);
  if (what == "ybeta") {
    const double beta = single(o.beta, "beta");
    ModelParams{beta, 1.0, 1}.validate();
    if (o.count < 1) throw UsageError("-n must be positive");
    Sink sink(o.out, out);
    for (std::int64_t i = 0; i < o.count; ++i) {
      RngStream rng(SeedSpec{seed, static_cast<std::uint64_t>(i)});
      sink.get() << format_number(sample_y_beta(beta, rng).value) << '\n';
    }
    sink.finish(o.out);
    return kExitOk;
  }
  const GridSpec grid{o.t_max, o.steps};
  grid.validate();
  Path path;
  if (what == "fbm") {
    if (!(o.hurst > 0.0 && o.hurst <= 1.0)) throw DomainError("requires 0 < hurst <= 1");
    path = generate_fbm(o.hurst, grid, o.dim.value_or(1), SeedSpec{seed, 0});
  } else if (what == "ggbm") {
    const ModelParams p{single(o.beta, "beta"), single(o.alpha, "alpha"), o.dim.value_or(1)};
    p.validate();
    path = GgbmSampler(p, grid).draw(SeedSpec{seed, 0}, parse_representation(o.representation));
  } else {
    throw UsageError("unknown sample kind '" + what + "' (ybeta, fbm, ggbm)");
  }
  Sink sink(o.out, out);
  write_path_csv(sink.get(), path);
  sink.finish(o.out);
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int default_suite_dim(const std::string& suite) {
  if (suite == "covariance") return 2;
  if (suite == "green") return 3;
  return 1;
}

int cmd_verify(const std::string& suite, const Options& o, std::ostream& out) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw UsageError("unknown suite '" + suite + "'");
  VerifyConfig cfg;
  if (!o.beta.empty() || !o.alpha.empty()) {
    const ModelParams p{o.beta.empty() ? 1.0 : single(o.beta, "beta"), o.alpha.empty() ? 1.0 : single(o.alpha, "alpha"),
                        o.dim.value_or(default_suite_dim(suite))};
    p.validate();
    if (suite == "green")
      if (auto why = p.green_violation()) throw DomainError(*why);
    cfg.params = p;
  }
  if (o.paths < 2) throw UsageError("--paths must be at least 2");
  cfg.paths = o.paths;
  cfg.seed = resolve_seed(o);
  cfg.threads = resolve_threads(o);
  cfg.t_max = o.t_max;
  cfg.steps = o.steps;
  const Report report = run_suite(suite, cfg);
  Sink sink(o.out, out);
  sink.get() << report.to_json().dump(2) << '\n';
  sink.finish(o.out);
  return report.pass() ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------- estimate-potential

int cmd_estimate(const Options& o, std::ostream& out) {
  const ModelParams p{single(o.beta, "beta"), single(o.alpha, "alpha"), o.dim.value_or(3)};
  p.validate();
  if (auto why = p.green_violation()) throw DomainError(*why);
  std::vector<double> x(p.dim, 0.0);
  if (!o.x.empty()) {
    x = parse_list(o.x, "x");
    if (x.size() != static_cast<std::size_t>(p.dim)) throw UsageError("--x needs dim values");
  }
  if (!(o.sigma > 0.0)) throw DomainError("requires sigma > 0");
  TestFunction f;
  if (o.function == "gaussian") {
    f = gaussian_function(p.dim, o.sigma);
  } else if (o.function == "bump") {
    f = bump_function(p.dim, o.sigma);
  } else {
    throw UsageError("--function must be gaussian or bump");
  }
  PerpetualSpec spec;
  spec.t_max = o.t_max;
  spec.n_steps = o.steps;
  spec.n_paths = o.paths;
  spec.seed = resolve_seed(o);
  spec.threads = resolve_threads(o);
  spec.representation = parse_representation(o.representation);
  spec.validate();
  const Estimate est = estimate_potential_mc(p, f, x, spec);
  const PotentialResult analytic = potential(make_green_density(p), f, x);
  nlohmann::json j = to_json(est, p, f, x);
  j["analytic_potential"] = analytic.value;
  j["analytic_abs_error"] = analytic.abs_error;
  j["continuity_constant"] = analytic.continuity_constant;
  Sink sink(o.out, out);
  sink.get() << j.dump(2) << '\n';
  sink.finish(o.out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized grey Brownian motion: special functions, samplers, Green potentials"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_model = [&o](CLI::App* c) {
    c->add_option("--beta", o.beta, "mixing parameter 0 < beta <= 1 (comma list sweeps in eval)");
    c->add_option("--alpha", o.alpha, "0 < alpha <= 2, Hurst = alpha/2 (comma list sweeps in eval)");
    c->add_option("--dim", o.dim, "dimension d >= 1");
  };
  auto add_run = [&o](CLI::App* c) {
    c->add_option("--seed", o.seed, "master seed (default: $GGBM_DEFAULT_SEED, else 42)");
    c->add_option("--paths", o.paths, "number of Monte Carlo paths");
    c->add_option("--t-max", o.t_max, "time horizon");
    c->add_option("--steps", o.steps, "grid steps");
    c->add_option("--threads", o.threads, "worker cap (default: hardware concurrency)");
    c->add_option("--representation", o.representation, "product or subordinated");
  };
  auto add_out = [&o](CLI::App* c) { c->add_option("--out", o.out, "output file (default stdout)"); };

  std::string function, what, suite;

  auto* eval = app.add_subcommand("eval", "evaluate ml, mwright, green-constant, density or charfun");
  eval->add_option("function", function, "ml | mwright | green-constant | density | charfun")->required();
  add_model(eval);
  add_out(eval);
  eval->add_option("--z", o.z, "argument z <= 0 of E_beta (comma list sweeps)");
  eval->add_option("--tau", o.tau, "argument of M_beta (comma list sweeps)");
  eval->add_option("--t", o.t, "time for density/charfun (comma list sweeps)");
  eval->add_option("--y", o.y, "point y in R^d, comma separated");
  eval->add_option("--times", o.times, "times t_1..t_n for the joint density/charfun");
  eval->add_option("--theta", o.theta, "n x d matrix, row-major, comma separated");
  eval->add_option("--format", o.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));

  auto* sample = app.add_subcommand("sample", "draw ybeta samples, an fbm path or a ggbm path");
  sample->add_option("what", what, "ybeta | fbm | ggbm")->required();
  add_model(sample);
  add_run(sample);
  add_out(sample);
  sample->add_option("--hurst", o.hurst, "Hurst index for fbm");
  sample->add_option("-n", o.count, "number of ybeta samples");
  sample->add_option("--format", o.format, "csv")->check(CLI::IsMember({"text", "csv"}));

  auto* verify = app.add_subcommand("verify", "run a verification suite and print a JSON report");
  verify->add_option("suite", suite, "specfun | moments | covariance | charfun | representation | green")->required();
  add_model(verify);
  add_run(verify);
  add_out(verify);
  verify->add_option("--format", o.format, "json")->check(CLI::IsMember({"text", "json"}));

  auto* estimate = app.add_subcommand("estimate-potential", "Monte Carlo perpetual integral vs the Green potential");
  add_model(estimate);
  add_run(estimate);
  add_out(estimate);
  estimate->add_option("--x", o.x, "starting point, comma separated (default origin)");
  estimate->add_option("--sigma", o.sigma, "width of the test function");
  estimate->add_option("--function", o.function, "gaussian or bump");
  estimate->add_option("--format", o.format, "json")->check(CLI::IsMember({"text", "json"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(function, o, out);
    if (sample->parsed()) return cmd_sample(what, o, out);
    if (verify->parsed()) return cmd_verify(suite, o, out);
    if (estimate->parsed()) return cmd_estimate(o, out);
  } catch (const std::exception& e) {  // domain, usage and I/O errors alike
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ggbm
