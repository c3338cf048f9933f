#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "dunkl/certify.hpp"
#include "dunkl/heatkernel.hpp"
#include "dunkl/newton.hpp"
#include "dunkl/selftest.hpp"
#include "dunkl/spherical.hpp"
#include "dunkl/stable.hpp"

namespace {

using namespace dunkl;

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct SystemArgs {
  int n = 1;
  double k = 1.0;
  int dim = 0;
  bool trace_zero = false;
  int nodes = 0;
};

RootSystemA make_system(const SystemArgs& a) {
  if (a.trace_zero) return RootSystemA::trace_zero(a.n, a.k);
  return RootSystemA(a.n, a.k, a.dim == 0 ? -1 : a.dim);
}

Vector point(const RootSystemA& rs, const std::string& text, const char* name) {
  if (text.empty()) throw DomainError(std::string("missing --") + name);
  Vector v = parse_vector(text);
  if (v.size() != rs.storage_size())
    throw DomainError(std::string(name) + " needs " + std::to_string(rs.storage_size()) +
                      " coordinates, got " + std::to_string(v.size()));
  return v;
}

Range parse_range(const std::string& text, bool log) {
  const Vector v = parse_vector(text);
  if (v.size() != 3) throw DomainError("a range is lo,hi,count");
  if (v(2) != std::floor(v(2))) throw DomainError("range count must be an integer");
  return Range{v(0), v(1), static_cast<int>(v(2)), log};
}

std::vector<double> parse_list(const std::string& text) {
  const Vector v = parse_vector(text);
  return {v.data(), v.data() + v.size()};
}

void print_value(const char* label, double log_value) {
  std::cout << label << ": " << log_decimal(log_value) << '\n';
}

int cmd_eval(const std::string& kernel, const SystemArgs& sa, const std::string& lam_s,
             const std::string& x_s, const std::string& y_s, double t, double s) {
  const RootSystemA rs = make_system(sa);
  SphericalOptions q;
  q.nodes = sa.nodes;
  KernelValue v;
  double env = 0.0;
  if (kernel == "spherical") {
    const Vector lam = point(rs, lam_s, "lambda"), X = point(rs, x_s, "X");
    v = spherical_exact(rs, lam, X, q);
    env = log_spherical_envelope(rs, lam, X);
  } else if (kernel == "heat") {
    const Vector X = point(rs, x_s, "X"), Y = point(rs, y_s, "Y");
    v = heat_exact(rs, t, X, Y, q);
    env = log_heat_envelope(rs, t, X, Y);
  } else if (kernel == "newton") {
    const Vector X = point(rs, x_s, "X"), Y = point(rs, y_s, "Y");
    v = newton_exact(NewtonParams{rs, X, Y, q, 16});
    env = log_newton_envelope(rs, X, Y);
  } else if (kernel == "stable") {
    const Vector X = point(rs, x_s, "X"), Y = point(rs, y_s, "Y");
    v = stable_exact(StableParams{rs, s, t, X, Y, q, SubordinatorMethod::Auto, 10});
    env = log_stable_envelope(rs, s, t, X, Y);
  } else {
    throw DomainError("unknown kernel '" + kernel + "'");
  }
  std::cout.precision(17);
  print_value("value", v.log_value);
  std::cout << "log_value: " << v.log_value << '\n';
  print_value("envelope", env);
  std::cout << "ratio: " << std::exp(v.log_value - env) << '\n';
  std::cout << "err_indicator: " << v.rel_error << '\n';
  std::cout << "evaluations: " << v.evaluations << '\n';
  return kPass;
}

struct SweepArgs {
  SystemArgs sys;
  std::string k_list, product, t_range, s_list, error, output, format = "csv";
  bool linear = false, quiet = false;
  double spread = 0.0, slope = 0.0, scale = 0.0;
  int threads = 0;
};

SweepConfig build_config(const std::string& kernel, const SweepArgs& a, const CLI::App& sub) {
  SweepConfig c = default_config(kernel);
  auto given = [&](const char* name) {
    const CLI::Option* o = sub.get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--n")) c.n = a.sys.n;
  if (given("--dim")) c.dim = a.sys.dim;
  if (given("--trace-zero")) {
    c.trace_zero = a.sys.trace_zero;
    c.dim = 0;
  }
  if (given("--nodes")) c.nodes = a.sys.nodes;
  if (given("--k")) c.k = parse_list(a.k_list);
  if (given("--product")) c.product = parse_range(a.product, !a.linear);
  if (given("--t")) c.t = parse_range(a.t_range, true);
  if (given("--s")) c.s = parse_list(a.s_list);
  if (given("--error")) c.error = a.error;
  if (given("--spread-limit")) c.spread_limit = a.spread;
  if (given("--slope-limit")) c.slope_limit = a.slope;
  if (given("--scale")) c.scale = a.scale;
  c.threads = a.threads;
  c.output = a.output;
  c.format = a.format;
  c.budget = budget_from_env(kDefaultSweepBudget);
  return c;
}

int cmd_sweep(const SweepConfig& c, bool quiet) {
  const auto progress = [quiet](std::size_t done, std::size_t total) {
    if (!quiet) std::fprintf(stderr, "\r%zu/%zu", done, total);
    if (!quiet && done == total) std::fputc('\n', stderr);
  };
  const RatioReport r = run_sweep(c, progress);
  if (!c.output.empty()) {
    std::ofstream out(c.output);
    if (!out) throw DomainError("cannot write " + c.output);
    if (c.format == "json")
      write_json(r, out);
    else
      write_csv(r, out);
  }
  std::cout << summary_text(r);
  std::cout << (r.pass() ? "PASS" : "FAIL") << '\n';
  return r.pass() ? kPass : kFail;
}

void add_system_options(CLI::App* app, SystemArgs& a) {
  app->add_option("--n", a.n, "rank of A_n");
  app->add_option("--k", a.k, "multiplicity");
  app->add_option("--dim", a.dim, "ambient dimension (default n + 1)");
  app->add_flag("--trace-zero", a.trace_zero, "trace-zero realization (d = n)");
  app->add_option("--nodes", a.nodes, "spherical nodes per level");
}

void add_sweep_options(CLI::App* app, SweepArgs& a) {
  app->add_option("--n", a.sys.n, "rank of A_n");
  app->add_option("--k", a.k_list, "multiplicities, comma separated");
  app->add_option("--dim", a.sys.dim, "ambient dimension");
  app->add_flag("--trace-zero", a.sys.trace_zero, "trace-zero realization");
  app->add_option("--nodes", a.sys.nodes, "spherical nodes per level");
  app->add_option("--product", a.product, "grid axis lo,hi,count");
  app->add_flag("--linear", a.linear, "linear instead of log spacing for --product");
  app->add_option("--t", a.t_range, "time grid lo,hi,count");
  app->add_option("--s", a.s_list, "stability indices, comma separated");
  app->add_option("--error", a.error, "refine, coarsen, none or auto");
  app->add_option("--spread-limit", a.spread, "maximum max/min ratio per group");
  app->add_option("--slope-limit", a.slope, "maximum drift slope");
  app->add_option("--threads", a.threads, "worker threads (0 = all cores)");
  app->add_option("--output,-o", a.output, "report file");
  app->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--quiet,-q", a.quiet, "no progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dunkl kernels of type A: evaluation and ratio certification"};
  app.require_subcommand(1);

  SystemArgs ea;
  std::string e_kernel, lam_s, x_s, y_s;
  double t = 1.0, s = 1.0;
  CLI::App* eval = app.add_subcommand("eval", "evaluate one kernel value");
  eval->add_option("kernel", e_kernel, "spherical, heat, newton or stable")->required();
  add_system_options(eval, ea);
  eval->add_option("--lambda", lam_s, "spectral point, comma separated");
  eval->add_option("--X", x_s, "first point");
  eval->add_option("--Y", y_s, "second point");
  eval->add_option("--t", t, "time");
  eval->add_option("--s", s, "stability index");

  SweepArgs ca;
  std::string c_kernel = "spherical";
  CLI::App* certify = app.add_subcommand("certify", "exact/envelope sweep for a kernel");
  certify->add_option("--kernel", c_kernel, "spherical, heat, newton, stable or lemma:<id>");
  add_sweep_options(certify, ca);

  SweepArgs la;
  std::string claim;
  CLI::App* lemma = app.add_subcommand("lemma", "ratio sweep for one integral claim");
  lemma->add_option("id", claim, "lemma_A, lemma_ai, lemma_a1, lemma_a2, prop_In, prop_truncated")
      ->required();
  add_sweep_options(lemma, la);
  lemma->add_option("--scale", la.scale, "rescale (a, b), or shift x for lemma_A");

  double c_offset = 0.0;
  CLI::App* selftest = app.add_subcommand("selftest", "fast invariant suite");
  selftest->add_option("--log-c-offset", c_offset, "perturb log c_norm (fault injection)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(e_kernel, ea, lam_s, x_s, y_s, t, s);
    if (certify->parsed()) return cmd_sweep(build_config(c_kernel, ca, *certify), ca.quiet);
    if (lemma->parsed()) return cmd_sweep(build_config("lemma:" + claim, la, *lemma), la.quiet);
    if (selftest->parsed()) {
      SelftestOptions o;
      o.log_c_offset = c_offset;
      const SelftestResult r = run_selftest(o);
      std::cout << r.text();
      std::printf("%s selftest in %.1f s\n", r.pass() ? "PASS" : "FAIL", r.seconds);
      return r.pass() ? kPass : kFail;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kBudget;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "evaluation failed: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
