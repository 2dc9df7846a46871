#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kreisslab/shift_families.hpp"

namespace kreisslab {

/// One row of the power-vs-bound verification: the closed-form lower bound,
/// the corner entry it passes through, and the measured power norm.
struct BoundReport {
  long long N = 0;
  double eps = std::numeric_limits<double>::quiet_NaN(); // filled by callers that chose c via c_of_eps
  int m = 0;
  double bound_value = 0.0;
  double measured_power = 0.0;
  double corner = 0.0;
  bool valid = false;
  bool chain_ok = false;
};

/// Weight scale that keeps the absolute Cesaro constant of the depth-m family
/// at most 1 + eps:  eps / (m (2^{m-1/2} + 2^{3m-1/2} m^m sqrt(6))).
double c_of_eps(double eps, int m);

/// kappa_m = (4m)^m [2^{m-1/2} + 2^{3m-1/2} m^m sqrt(6)]^m.
double kappa(int m);
double log_kappa(int m);

/// (8m)^{m^2+m}, the clean over-estimate of kappa_m.
double kappa_bound(int m);
double log_kappa_bound(int m);

struct LogBound {
  double value = 0.0;
  bool valid = false;
};

/// (eps^m / kappa_m) ln^m N; valid when N >= m^2 4^m.
LogBound lower_bound_log_m(double N, double eps, int m);

struct IteratedBound {
  double value = 0.0;
  int m_used = 0;
  bool valid = false;
};

/// exp(alpha v^2 / ln v) with v = ln(eps ln N) and m = floor(v / (2 ln v));
/// the guards from the selection rule are reported in `valid`.
IteratedBound lower_bound_iterated(double N, double eps, double alpha);

struct ComparisonBounds {
  double spijker = 0.0;                // e K N
  std::optional<double> nikolski;      // N^{1-2/K}/5, needs K > pi + 1
};

ComparisonBounds comparison_bounds(double N, double K);

/// Measures ||X_{m,N}^{N-1}(c)||, the corner entry, and the closed-form
/// c^m ln^m(N/m); chain_ok iff bound <= corner <= measured within 1e-9.
BoundReport verify_power_vs_bound(const ShiftFamilySpec& spec, long long N);

struct GrowthRow {
  long long N = 0;
  double measured = 0.0;
  double predicted = 0.0; // c^m ln^m(ln(N+2)/ln 2), shape-only normalization
  bool ok = false;
};

/// Power growth of the strong-Kreiss telescoping family against the
/// log-log shape; asserts measured >= predicted per row via `ok`.
std::vector<GrowthRow> strong_kreiss_growth_table(double c, int m,
                                                  const std::vector<long long>& N_list);

std::string bound_report_to_json(const BoundReport& r);
std::string bound_reports_to_csv(const std::vector<BoundReport>& rows);

} // namespace kreisslab
