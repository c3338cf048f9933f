#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace dunkl {

/// count values from lo to hi, log- or linear-spaced (count == 1 gives lo).
struct Range {
  double lo = 1.0;
  double hi = 1.0;
  int count = 1;
  bool log = true;

  std::vector<double> values() const;
};

/// Default cap on the estimated evaluations of a whole sweep.
inline constexpr std::int64_t kDefaultSweepBudget = 100'000'000'000;

/// Reads DUNKL_BUDGET; returns `fallback` when unset. Throws DomainError on a
/// malformed or non-positive value.
std::int64_t budget_from_env(std::int64_t fallback);

struct SweepConfig {
  /// spherical, heat, newton, stable, or lemma:<claim id>.
  std::string kernel = "spherical";
  int n = 1;
  /// Ambient dimension; 0 means n + 1.
  int dim = 0;
  bool trace_zero = false;
  std::vector<double> k = {1.0};
  /// The pairing-product axis (spherical, heat, prop_*), alpha(X)alpha(Y)/|X-Y|^2
  /// (newton), |X-Y|^2 / t^{2/s} (stable), x (lemma_A) or b/a (other lemmas).
  Range product{1e-3, 1e4, 8, true};
  Range t{1e-2, 1e2, 5, true};
  std::vector<double> s = {1.0};
  /// Lemma sweeps: multiplies (a, b), or x for lemma_A.
  double scale = 1.0;
  /// Spherical nodes per level; 0 keeps the defaults.
  int nodes = 0;
  /// refine, coarsen, none, or auto (refine up to rank 2, coarsen above).
  std::string error = "auto";
  double spread_limit = 1e3;
  /// Bound on |d log ratio / d log product| where a drift axis exists.
  double slope_limit = 0.02;
  int threads = 0;
  std::int64_t budget = kDefaultSweepBudget;
  std::string output;
  std::string format = "csv";

  /// Throws DomainError on an unknown kernel, empty grid or bad values.
  void validate() const;
};

/// Defaults per kernel: grid axis, multiplicities and spread limit (10^3 for
/// spherical, 10^2 for heat, newton and stable, 10^6 for the lemma claims).
SweepConfig default_config(const std::string& kernel);

struct SweepRow {
  std::string group;
  std::vector<double> inputs;
  double log_exact = 0.0;
  double log_envelope = 0.0;
  double ratio = 0.0;
  double err_indicator = std::numeric_limits<double>::quiet_NaN();
};

struct GroupSummary {
  std::string label;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double spread = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  std::size_t samples = 0;
  /// Least-squares slope of log ratio against log of the drift column; NaN
  /// when the sweep has no drift axis.
  double slope = std::numeric_limits<double>::quiet_NaN();
  double bracket_lo = 0.0;
  double bracket_hi = std::numeric_limits<double>::infinity();
  bool pass = false;
};

struct RatioReport {
  SweepConfig config;
  std::vector<std::string> columns;
  /// Index into columns of the drift axis, or -1.
  int drift_column = -1;
  std::vector<SweepRow> rows;
  std::vector<GroupSummary> groups;

  bool pass() const;
};

/// Per-group statistics over report.rows, in row order. Deterministic.
void summarize(RatioReport& report);

/// Estimated evaluation count; compared against config.budget before launch.
double estimate_cost(const SweepConfig& config);

/// Builds the grid, checks the budget (BudgetExceeded before any evaluation),
/// evaluates points on a worker pool and summarizes. Rows follow grid order.
/// `progress`, if set, is called after each point with (done, total).
RatioReport run_sweep(const SweepConfig& config,
                      const std::function<void(std::size_t, std::size_t)>& progress = {});

/// Decimal text of e^{log_value} with 17 significant digits and an unbounded
/// exponent ("1.2345678901234567e+4321"); read back by parse_log_decimal.
std::string log_decimal(double log_value);
double parse_log_decimal(const std::string& text);

void write_csv(const RatioReport& report, std::ostream& out);
void write_json(const RatioReport& report, std::ostream& out);
/// Rows and columns only; summaries are recomputed by summarize().
RatioReport read_csv(std::istream& in);
RatioReport read_json(std::istream& in);

/// "group min max spread slope PASS|FAIL" lines.
std::string summary_text(const RatioReport& report);

}  // namespace dunkl
