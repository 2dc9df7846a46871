#include "kreisslab/bounds.hpp"

#include <cmath>
#include <sstream>

#include "kreisslab/json_writer.hpp"

namespace kreisslab {

namespace {
const double kSqrt6 = std::sqrt(6.0);
const double kLogDblMax = std::log(std::numeric_limits<double>::max());

double exp_checked(double logv, const char* who) {
  if (logv > kLogDblMax)
    throw range_error(std::string(who) + ": overflows double, use the log-space variant");
  return std::exp(logv);
}
} // namespace

double c_of_eps(double eps, int m) {
  if (!(eps > 0.0)) throw input_error("c_of_eps: require eps > 0");
  if (m < 1) throw input_error("c_of_eps: require m >= 1");
  const double md = m;
  const double k = std::pow(2.0, md - 0.5) + std::pow(2.0, 3.0 * md - 0.5) * std::pow(md, md) * kSqrt6;
  return eps / (md * k);
}

double log_kappa(int m) {
  if (m < 1) throw input_error("kappa: require m >= 1");
  const double md = m;
  const double k = std::pow(2.0, md - 0.5) + std::pow(2.0, 3.0 * md - 0.5) * std::pow(md, md) * kSqrt6;
  return md * std::log(4.0 * md) + md * std::log(k);
}

double kappa(int m) { return exp_checked(log_kappa(m), "kappa"); }

double log_kappa_bound(int m) {
  if (m < 1) throw input_error("kappa_bound: require m >= 1");
  const double md = m;
  return (md * md + md) * std::log(8.0 * md);
}

double kappa_bound(int m) { return exp_checked(log_kappa_bound(m), "kappa_bound"); }

LogBound lower_bound_log_m(double N, double eps, int m) {
  if (!(N >= 2.0)) throw input_error("lower_bound_log_m: require N >= 2");
  if (!(eps > 0.0) || m < 1) throw input_error("lower_bound_log_m: require eps > 0, m >= 1");
  LogBound out;
  const double md = m;
  out.value = std::exp(md * std::log(eps) - log_kappa(m) + md * std::log(std::log(N)));
  out.valid = N >= md * md * std::pow(2.0, 2.0 * md);
  return out;
}

IteratedBound lower_bound_iterated(double N, double eps, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.25))
    throw input_error("lower_bound_iterated: require 0 < alpha < 1/4");
  if (!(N >= 2.0) || !(eps > 0.0) || !std::isfinite(N))
    throw input_error("lower_bound_iterated: require finite N >= 2, eps > 0");
  IteratedBound out;
  const double el = eps * std::log(N);
  if (!(el > 1.0)) return out; // v undefined or <= 0
  const double v = std::log(el);
  if (!(v > 1.0)) return out; // flagged invalid, value absent
  out.m_used = static_cast<int>(std::floor(v / (2.0 * std::log(v))));
  if (out.m_used < 1) return out;
  const double md = out.m_used;
  if (md * md * std::pow(2.0, 2.0 * md) > N) return out;
  out.value = std::exp(alpha * v * v / std::log(v));
  out.valid = true;
  return out;
}

ComparisonBounds comparison_bounds(double N, double K) {
  if (!(N >= 1.0) || !(K >= 1.0))
    throw input_error("comparison_bounds: require N >= 1, K >= 1");
  ComparisonBounds out;
  out.spijker = std::exp(1.0) * K * N;
  const double pi = 3.141592653589793;
  if (K > pi + 1.0) out.nikolski = std::pow(N, 1.0 - 2.0 / K) / 5.0;
  return out;
}

BoundReport verify_power_vs_bound(const ShiftFamilySpec& spec, long long N) {
  if (spec.variant != ShiftVariant::cesaro)
    throw precondition_error("verify_power_vs_bound: cesaro family only");
  if (N <= spec.m) throw input_error("verify_power_vs_bound: require N > m");
  TruncationSpec trunc{N};
  trunc.validate(spec);
  BoundReport r;
  r.N = N;
  r.m = spec.m;
  r.corner = corner_entry(spec, N);
  r.measured_power = shift_power_norm(spec, trunc, N - 1);
  r.bound_value = spec.m == 0
                      ? 1.0
                      : std::pow(spec.c, spec.m) *
                            std::pow(std::log(static_cast<double>(N) / spec.m), spec.m);
  const long long total = static_cast<long long>(spec.block_dim()) * N;
  r.valid = N > spec.m &&
            total >= static_cast<long long>(spec.m) * spec.m * (1ll << (2 * spec.m));
  r.chain_ok = r.bound_value <= r.corner + 1e-9 &&
               r.corner <= r.measured_power * (1.0 + 1e-9);
  return r;
}

std::vector<GrowthRow> strong_kreiss_growth_table(double c, int m,
                                                  const std::vector<long long>& N_list) {
  ShiftFamilySpec spec{ShiftVariant::strong_kreiss_telescoping, m, c};
  spec.validate();
  std::vector<GrowthRow> rows;
  for (long long N : N_list) {
    TruncationSpec trunc{N};
    trunc.validate(spec);
    GrowthRow row;
    row.N = N;
    row.measured = shift_power_norm(spec, trunc, N - 1);
    row.predicted = std::pow(c, m) *
                    std::pow(std::log(std::log(static_cast<double>(N) + 2.0) / std::log(2.0)),
                             m);
    row.ok = row.measured >= row.predicted;
    rows.push_back(row);
  }
  return rows;
}

std::string bound_report_to_json(const BoundReport& r) {
  JsonWriter w;
  w.begin_object();
  w.kv("N", r.N);
  if (std::isfinite(r.eps)) w.kv("eps", r.eps); else w.key("eps").null_value();
  w.kv("m", r.m);
  w.kv("bound", r.bound_value);
  w.kv("corner", r.corner);
  w.kv("power", r.measured_power);
  w.kv("valid", r.valid);
  w.kv("chain_ok", r.chain_ok);
  w.end_object();
  return w.str();
}

std::string bound_reports_to_csv(const std::vector<BoundReport>& rows) {
  std::ostringstream os;
  os << "N,eps,m,bound,corner,power,valid,chain_ok\n";
  for (const auto& r : rows) {
    os << r.N << ',' << (std::isfinite(r.eps) ? JsonWriter::number(r.eps) : "") << ','
       << r.m << ',' << JsonWriter::number(r.bound_value) << ','
       << JsonWriter::number(r.corner) << ',' << JsonWriter::number(r.measured_power)
       << ',' << (r.valid ? "true" : "false") << ',' << (r.chain_ok ? "true" : "false")
       << '\n';
  }
  return os.str();
}

} // namespace kreisslab
