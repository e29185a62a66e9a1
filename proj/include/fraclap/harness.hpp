#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fraclap/bounds.hpp"
#include "fraclap/corelap.hpp"
#include "fraclap/prism.hpp"
#include "json.hpp"

namespace fraclap {

enum class AverageKind { mvp1, mvp2, mvp3, midpoint, ball_mean };
const char* to_string(AverageKind k);
AverageKind parse_average(const std::string& name);

/// Geometric grid from eta/4 down by a factor sqrt(2) per step.
std::vector<double> default_eps_grid(double eta, int n = 12);

struct SweepConfig {
  std::string entry = "cosine";
  std::optional<Vec> x;  // defaults to the entry's catalog point
  std::vector<double> s_values{0.75};
  std::vector<double> eps;  // empty: default_eps_grid(eta_x)
  int n_eps = 12;
  AverageKind average = AverageKind::mvp1;
  /// MVP3 geometry: the R, alpha schedule of the prism corollary, or fixed values.
  bool prism_schedule = true;
  double prism_R = 2.0;
  double prism_alpha = 0.1;
  int fit_window = 6;
  /// Expected residual order; unset picks the default for the average.
  std::optional<double> expected_order;
  double order_tolerance = 0.15;
  double quad_allowance = 10.0;
  CoreSpec core;
  /// 0: FRACLAP_THREADS or the hardware count.
  int threads = 0;
};

struct SweepRow {
  double s = 0.0;
  double eps = 0.0;
  double value = 0.0;
  double phi_x = 0.0;
  double deviation = 0.0;  // value - phi(x)
  double predicted = 0.0;  // leading term
  double residual = 0.0;   // deviation - predicted
  std::string bound_name;  // empty when no bound applies
  double bound = 0.0;
  double allowance = 0.0;  // quadrature allowance added to the bound
  double margin = 0.0;     // bound + allowance - |residual|
  double quad_error = 0.0;
  double noise = 0.0;  // rounding plus quadrature estimate; smaller residuals count as zero
  bool pass = true;
  std::string error;  // evaluation failure, row excluded from fits
};

struct OrderFit {
  double order = 0.0;
  double r_squared = 0.0;
  int points = 0;
  bool infinite = false;  // all residuals zero
};

struct SeriesSummary {
  double s = 0.0;
  double reference = 0.0;  // L_s[phi](x), or the local operator for local averages
  OrderFit fit;
  std::optional<double> expected_order;
  bool order_pass = true;
  int unresolved = 0;  // window rows whose residual is below the noise level
};

struct ExpansionReport {
  std::string entry;
  Vec x;
  AverageKind average = AverageKind::mvp1;
  std::vector<SweepRow> rows;
  std::vector<SeriesSummary> series;
  bool pass = true;
  bool numerical_failure = false;
};

/// Least-squares slope of log|r| against log eps.
OrderFit fit_order(const std::vector<double>& eps, const std::vector<double>& residuals);

ExpansionReport run_sweep(const SweepConfig& cfg);

struct AuditConfig {
  std::vector<std::string> entries;  // empty: the full catalog
  std::vector<double> s_values{0.55, 0.6, 0.75, 0.9, 0.99};
  int n_eps = 12;
  bool theorems = true;
  bool prism = false;
  double quad_allowance = 10.0;
  CoreSpec core;
  int threads = 0;
};

struct AuditRow {
  std::string entry;
  double s = 0.0;
  double eps = 0.0;
  std::string bound;
  double lhs = 0.0;
  double rhs = 0.0;
  double allowance = 0.0;
  bool pass = true;
  std::string note;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  int violations = 0;
  int failures = 0;  // rows that could not be evaluated
  int skipped = 0;   // rows outside a bound's regime
};

AuditReport audit_bounds(const AuditConfig& cfg);

struct ProbeRow {
  double s = 0.0;
  double residual_o = 0.0;      // MVP1 residual
  double residual_mixed = 0.0;  // MVP2 residual
  double limit_expression = 0.0;
  bool mixed_within_limit = false;  // |residual_mixed| <= 1.1 limit
};

struct ProbeReport {
  std::string entry;
  double eps = 0.0;
  std::vector<ProbeRow> rows;
  bool o_grows = false;
  bool mixed_bounded = false;
};

ProbeReport s_uniformity_probe(const TestFunction& phi, const Vec& x, double eps,
                               const std::vector<double>& s_values = {0.9, 0.95, 0.99}, const CoreSpec& core = {});

/// Worker count: explicit value, else FRACLAP_THREADS, else the hardware count.
int resolve_threads(int requested);
/// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

/// Shortest round-trip decimal form.
std::string format_double(double v);
/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

void write_csv(std::ostream& os, const ExpansionReport& r);
void write_csv(std::ostream& os, const AuditReport& r);
void write_csv(std::ostream& os, const ProbeReport& r);
nlohmann::ordered_json to_json(const ExpansionReport& r);
nlohmann::ordered_json to_json(const AuditReport& r);
nlohmann::ordered_json to_json(const ProbeReport& r);

}  // namespace fraclap
