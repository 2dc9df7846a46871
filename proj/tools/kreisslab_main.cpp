// kreisslab: batch experiment runner for the operator-constant workbench.
// Subcommands: construct, constants, power-growth, bounds-table, kreiss-scan,
// dlp-verify, counterexample. Every run emits a deterministic JSON report
// (wall time lives in its own provenance field so reports are otherwise
// byte-identical across reruns with the same seed).

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kreisslab/bounds.hpp"
#include "kreisslab/constants.hpp"
#include "kreisslab/counterexamples.hpp"
#include "kreisslab/csr.hpp"
#include "kreisslab/dlp.hpp"
#include "kreisslab/json_writer.hpp"
#include "kreisslab/linalg.hpp"
#include "kreisslab/matrix_io.hpp"
#include "kreisslab/parallel.hpp"
#include "kreisslab/shift_families.hpp"

namespace kl = kreisslab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string out_path;
  std::string csv_path;
  int threads = 0;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  long long nmax = 4096;
  int grid = 2048;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out_path, "write the JSON report here");
  cmd->add_option("--csv", c.csv_path, "write the CSV table here");
  cmd->add_option("--threads", c.threads, "worker threads (default: KREISSLAB_THREADS or 1)");
  cmd->add_option("--seed", c.seed, "seed recorded in provenance and used for random draws");
  cmd->add_option("--tol", c.tol, "refinement tolerance");
  cmd->add_option("--nmax", c.nmax, "hard cap on power/average indices");
  cmd->add_option("--grid", c.grid, "angular grid size");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kl::input_error("cannot open output file " + path);
  out << text;
}

// report envelope: everything deterministic, wall time segregated at the end
std::string finish_report(const std::string& command, const std::string& inputs_json,
                          const std::string& results_json, const CommonOpts& c,
                          long long wall_ms) {
  std::ostringstream os;
  os << "{\"command\":\"" << command << "\",\"inputs\":" << inputs_json
     << ",\"results\":" << results_json << ",\"provenance\":{\"seed\":" << c.seed
     << ",\"tolerances\":{\"tol\":" << kl::JsonWriter::number(c.tol)
     << ",\"nmax\":" << c.nmax << ",\"grid\":" << c.grid << "},\"version\":\"" << kVersion
     << "\",\"threads\":" << kl::thread_count() << ",\"wall_ms\":" << wall_ms << "}}";
  return os.str();
}

kl::ConstantsOptions constants_opts(const CommonOpts& c) {
  kl::ConstantsOptions o;
  o.n_max = c.nmax;
  o.tol = c.tol;
  o.seed = c.seed;
  return o;
}

std::vector<long long> parse_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  if (out.empty()) throw kl::input_error("empty list");
  return out;
}

std::vector<double> parse_dlist(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw kl::input_error("empty list");
  return out;
}

// "power:beta=1,p=0.5,delta=1" | "sampled:file=..." (not supported from CLI)
kl::VTypeCurve parse_curve(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || text.substr(0, colon) != "power")
    throw kl::input_error("curve spec: expected power:beta=..,p=..[,delta=..]");
  double beta = 1.0, p = 0.5, delta = 1.0;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw kl::input_error("curve spec: bad item " + item);
    const std::string k = item.substr(0, eq);
    const double v = std::stod(item.substr(eq + 1));
    if (k == "beta") beta = v;
    else if (k == "p") p = v;
    else if (k == "delta") delta = v;
    else throw kl::input_error("curve spec: unknown key " + k);
  }
  return kl::VTypeCurve::power_law(beta, p, delta);
}

// "power:eps0=0.5,q=1" | "loginvsqrt:c=0.5,nu0=0.5"
kl::EpsilonProfile parse_eps(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw kl::input_error("eps spec: expected form:k=v,...");
  const std::string head = text.substr(0, colon);
  double eps0 = 0.5, q = 1.0, cval = 0.5, nu0 = 16.0;
  bool have_nu0 = false;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw kl::input_error("eps spec: bad item " + item);
    const std::string k = item.substr(0, eq);
    const double v = std::stod(item.substr(eq + 1));
    if (k == "eps0") eps0 = v;
    else if (k == "q") q = v;
    else if (k == "c") cval = v;
    else if (k == "nu0") { nu0 = v; have_nu0 = true; }
    else throw kl::input_error("eps spec: unknown key " + k);
  }
  if (head == "power") return kl::EpsilonProfile::power(eps0, q, nu0);
  if (head == "loginvsqrt")
    return kl::EpsilonProfile::log_inv_sqrt(cval, have_nu0 ? nu0 : 0.5);
  throw kl::input_error("eps spec: unknown form " + head);
}

// matrix source shared by constants / kreiss-scan
kl::CMatrix load_operator(const std::string& matrix_path, const std::string& spec_text,
                          const std::string& muller, const std::string& plain) {
  int provided = !matrix_path.empty() + !spec_text.empty() + !muller.empty() + !plain.empty();
  if (provided != 1)
    throw kl::input_error("provide exactly one of --matrix, --spec, --muller, --plain");
  if (!matrix_path.empty()) return kl::read_matrix_file(matrix_path);
  if (!spec_text.empty()) {
    auto [spec, trunc] = kl::parse_shift_spec(spec_text);
    return kl::build_truncated_shift(spec, trunc);
  }
  if (!muller.empty()) {
    const auto comma = muller.find(',');
    if (comma == std::string::npos) throw kl::input_error("--muller expects N,a");
    return kl::build_muller_shift(std::stoll(muller.substr(0, comma)),
                                  std::stod(muller.substr(comma + 1)));
  }
  const auto comma = plain.find(',');
  if (comma == std::string::npos) throw kl::input_error("--plain expects N,blockdim");
  return kl::build_plain_shift(std::stoll(plain.substr(0, comma)),
                               std::stoll(plain.substr(comma + 1)));
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"kreisslab: weighted-shift constructions, resolvent-condition "
               "constants, power-growth bound tables, and double-layer-potential "
               "K-spectral certificates"};
  app.require_subcommand(1);

  // ---- construct ----------------------------------------------------------
  auto* c_construct = app.add_subcommand("construct", "build a catalog matrix and serialize it");
  CommonOpts o_construct;
  std::string construct_spec;
  long long construct_power = 0;
  add_common(c_construct, o_construct);
  c_construct->add_option("--spec", construct_spec,
                          "shift spec, e.g. cesaro:m=1,c=0.1,N=8")->required();
  c_construct->add_option("--power", construct_power, "serialize this power instead");

  // ---- constants ----------------------------------------------------------
  auto* c_constants = app.add_subcommand("constants", "estimate a resolvent/averaging constant");
  CommonOpts o_constants;
  std::string constants_matrix, constants_spec, constants_muller, constants_plain;
  std::string constants_kind = "kreiss";
  bool constants_upper = false;
  add_common(c_constants, o_constants);
  c_constants->add_option("--matrix", constants_matrix, "matrix JSON file");
  c_constants->add_option("--spec", constants_spec, "shift family spec");
  c_constants->add_option("--muller", constants_muller, "weighted shift N,a");
  c_constants->add_option("--plain", constants_plain, "plain shift N,blockdim");
  c_constants->add_option("--kind", constants_kind,
                          "kreiss|uniform_kreiss|strong_kreiss|cesaro|abs_cesaro|power_bound");
  c_constants->add_flag("--upper", constants_upper, "also certify an upper bound (kreiss)");

  // ---- power-growth -------------------------------------------------------
  auto* c_power = app.add_subcommand("power-growth", "||X^{N-1}|| against the corner entry");
  CommonOpts o_power;
  std::string power_spec_text, power_N_list;
  add_common(c_power, o_power);
  c_power->add_option("--spec", power_spec_text, "family spec without N, e.g. cesaro:m=1,c=0.1")
      ->required();
  c_power->add_option("--N", power_N_list, "comma list of truncation sizes")->required();

  // ---- bounds-table -------------------------------------------------------
  auto* c_bounds = app.add_subcommand("bounds-table", "closed-form bounds vs measured powers");
  CommonOpts o_bounds;
  int bounds_m = 1;
  std::string bounds_eps = "1", bounds_N = "64,256";
  add_common(c_bounds, o_bounds);
  c_bounds->add_option("--m", bounds_m, "doubling depth");
  c_bounds->add_option("--eps", bounds_eps, "comma list of epsilon values");
  c_bounds->add_option("--N", bounds_N, "comma list of truncation sizes");

  // ---- kreiss-scan --------------------------------------------------------
  auto* c_scan = app.add_subcommand("kreiss-scan", "annulus scan of (|z|-1)||(zI-A)^{-1}||");
  CommonOpts o_scan;
  std::string scan_matrix, scan_spec, scan_muller, scan_plain;
  int scan_rgrid = 13, scan_agrid = 64;
  bool scan_upper = false;
  add_common(c_scan, o_scan);
  c_scan->add_option("--matrix", scan_matrix, "matrix JSON file");
  c_scan->add_option("--spec", scan_spec, "shift family spec");
  c_scan->add_option("--muller", scan_muller, "weighted shift N,a");
  c_scan->add_option("--plain", scan_plain, "plain shift N,blockdim");
  c_scan->add_option("--rgrid", scan_rgrid, "radial samples");
  c_scan->add_option("--agrid", scan_agrid, "angular samples");
  c_scan->add_flag("--upper", scan_upper, "certify an upper bound too");

  // ---- dlp-verify ---------------------------------------------------------
  auto* c_dlp = app.add_subcommand("dlp-verify",
                                   "positivity decomposition and K-spectral certificate");
  CommonOpts o_dlp;
  long long dlp_N = 32;
  double dlp_cond = 10.0;
  std::string dlp_curve = "power:beta=1,p=0.5,delta=1";
  std::string dlp_eps = "power:eps0=0.5,q=1";
  std::string dlp_nlist = "1,2,3,4";
  int dlp_trials = 64;
  add_common(c_dlp, o_dlp);
  c_dlp->add_option("--N", dlp_N, "catalog operator dimension");
  c_dlp->add_option("--cond", dlp_cond, "similarity condition number");
  c_dlp->add_option("--curve", dlp_curve, "v-type curve spec");
  c_dlp->add_option("--epsprofile", dlp_eps, "epsilon profile spec");
  c_dlp->add_option("--nlist", dlp_nlist, "circle indices");
  c_dlp->add_option("--trials", dlp_trials, "random polynomials for the ratio check");

  // ---- counterexample -----------------------------------------------------
  auto* c_cx = app.add_subcommand("counterexample", "finite truncations of the counterexample families");
  c_cx->require_subcommand(1);
  auto* c_resolvent = c_cx->add_subcommand("resolvent", "envelope and power growth of X_{1,N}(c_N)");
  CommonOpts o_resolvent;
  long long cx_Nmax = 1024;
  std::string cx_cn = "inv_sqrt_log";
  add_common(c_resolvent, o_resolvent);
  c_resolvent->add_option("--Nmax", cx_Nmax, "largest truncation (powers of two from 16)");
  c_resolvent->add_option("--cN", cx_cn, "c_N sequence (inv_sqrt_log)");

  auto* c_pisier = c_cx->add_subcommand("pisier", "Foguel-Hankel power norms and corner exactness");
  CommonOpts o_pisier;
  std::string cx_beta = "inv_log";
  long long cx_M = 256;
  add_common(c_pisier, o_pisier);
  c_pisier->add_option("--beta", cx_beta, "beta sequence (inv_log)");
  c_pisier->add_option("--M", cx_M, "truncation size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e); // prints the usage text
    return code == 0 ? 0 : 1;
  }

  bool claims_ok = true;
  try {
    Timer timer;
    std::string report, csv;
    std::string command;
    CommonOpts* common = nullptr;

    if (*c_construct) {
      command = "construct";
      common = &o_construct;
      if (common->threads > 0) kl::set_thread_count(common->threads);
      auto [spec, trunc] = kl::parse_shift_spec(construct_spec);
      kl::CMatrix x = kl::build_truncated_shift(spec, trunc);
      if (construct_power > 0) {
        kl::Csr sa(x, 0.0);
        kl::CMatrix p = kl::CMatrix::Identity(x.rows(), x.cols());
        for (long long k = 0; k < construct_power; ++k) p = sa.apply_left(p);
        x = p;
      }
      if (common->out_path.empty()) throw kl::input_error("construct: --out is required");
      kl::write_matrix_file(common->out_path, x);
      kl::JsonWriter inputs;
      inputs.begin_object();
      inputs.kv("spec", construct_spec);
      inputs.kv("power", construct_power);
      inputs.end_object();
      kl::JsonWriter results;
      results.begin_object();
      results.kv("rows", static_cast<long long>(x.rows()));
      results.kv("cols", static_cast<long long>(x.cols()));
      results.kv("op_norm", kl::op_norm(x));
      results.kv("file", common->out_path);
      results.end_object();
      // report alongside the matrix file
      std::ostringstream os;
      os << "{\"command\":\"construct\",\"inputs\":" << inputs.str()
         << ",\"results\":" << results.str() << ",\"provenance\":{\"seed\":" << common->seed
         << ",\"version\":\"" << kVersion << "\",\"wall_ms\":" << timer.ms() << "}}";
      std::cout << os.str() << "\n";
      return 0;
    }

    if (*c_constants) {
      command = "constants";
      common = &o_constants;
      if (common->threads > 0) kl::set_thread_count(common->threads);
      kl::CMatrix a =
          load_operator(constants_matrix, constants_spec, constants_muller, constants_plain);
      kl::ConstantsOptions opts = constants_opts(*common);
      opts.certify_upper = constants_upper;
      kl::ConstantEstimate est;
      if (constants_kind == "kreiss") est = kl::kreiss_constant(a, opts);
      else if (constants_kind == "uniform_kreiss") est = kl::uniform_kreiss_constant(a, opts);
      else if (constants_kind == "strong_kreiss") est = kl::strong_kreiss_constant(a, opts);
      else if (constants_kind == "cesaro") est = kl::cesaro_constant(a, opts);
      else if (constants_kind == "abs_cesaro") est = kl::abs_cesaro_constant(a, opts);
      else if (constants_kind == "power_bound") est = kl::power_bound(a, opts);
      else throw kl::input_error("unknown --kind " + constants_kind);
      kl::JsonWriter inputs;
      inputs.begin_object();
      inputs.kv("kind", constants_kind);
      inputs.kv("dim", static_cast<long long>(a.rows()));
      if (!constants_matrix.empty()) inputs.kv("matrix", constants_matrix);
      if (!constants_spec.empty()) inputs.kv("spec", constants_spec);
      if (!constants_muller.empty()) inputs.kv("muller", constants_muller);
      if (!constants_plain.empty()) inputs.kv("plain", constants_plain);
      inputs.end_object();
      report = finish_report(command, inputs.str(),
                             kl::constant_estimate_to_json(est), *common, timer.ms());
      if (est.upper_bound && est.lower_estimate > *est.upper_bound * (1.0 + 1e-9))
        claims_ok = false;
      if (!common->out_path.empty()) write_text(common->out_path, report + "\n");
      std::cout << report << "\n";
      return claims_ok ? 0 : 2;
    }

    if (*c_power) {
      command = "power-growth";
      common = &o_power;
      if (common->threads > 0) kl::set_thread_count(common->threads);
      auto [spec, trunc0] = kl::parse_shift_spec(power_spec_text + ",N=2");
      const std::vector<long long> Ns = parse_list(power_N_list);
      std::ostringstream csvs;
      csvs << "N,power,corner_or_predicted\n";
      kl::JsonWriter results;
      results.begin_object();
      results.key("rows").begin_array();
      for (long long N : Ns) {
        kl::TruncationSpec trunc{N};
        trunc.validate(spec);
        const double power = kl::shift_power_norm(spec, trunc, N - 1);
        double reference = 0.0;
        if (spec.variant == kl::ShiftVariant::cesaro) {
          reference = kl::corner_entry(spec, N);
          if (power + 1e-9 < reference) claims_ok = false;
        } else {
          reference = std::pow(spec.c, spec.m) *
                      std::pow(std::log(std::log(static_cast<double>(N) + 2.0) / std::log(2.0)),
                               spec.m);
          if (power < reference) claims_ok = false;
        }
        results.begin_object();
        results.kv("N", N);
        results.kv("power", power);
        results.kv("reference", reference);
        results.end_object();
        csvs << N << ',' << kl::JsonWriter::number(power) << ','
             << kl::JsonWriter::number(reference) << "\n";
      }
      results.end_array();
      results.kv("all_rows_ok", claims_ok);
      results.end_object();
      kl::JsonWriter inputs;
      inputs.begin_object();
      inputs.kv("spec", power_spec_text);
      inputs.kv("N", power_N_list);
      inputs.end_object();
      report = finish_report(command, inputs.str(), results.str(), *common,
                             timer.ms());
      csv = csvs.str();
      if (!common->csv_path.empty()) write_text(common->csv_path, csv);
      if (!common->out_path.empty()) write_text(common->out_path, report + "\n");
      std::cout << report << "\n";
      return claims_ok ? 0 : 2;
    }

    if (*c_bounds) {
      command = "bounds-table";
      common = &o_bounds;
      if (common->threads > 0) kl::set_thread_count(common->threads);
      const std::vector<double> eps_list = parse_dlist(bounds_eps);
      const std::vector<long long> Ns = parse_list(bounds_N);
      std::vector<kl::BoundReport> rows;
      for (double eps : eps_list)
        for (long long N : Ns) {
          kl::ShiftFamilySpec spec{kl::ShiftVariant::cesaro, bounds_m,
                                   kl::c_of_eps(eps, bounds_m)};
          kl::BoundReport r = kl::verify_power_vs_bound(spec, N);
          r.eps = eps;
          if (!r.chain_ok) claims_ok = false;
          rows.push_back(r);
        }
      std::string allrows;
      for (const auto& r : rows) {
        if (!allrows.empty()) allrows += ",";
        allrows += kl::bound_report_to_json(r);
      }
      std::ostringstream rs;
      rs << "{\"rows\":[" << allrows << "],\"all_chain_ok\":" << (claims_ok ? "true" : "false")
         << "}";
      kl::JsonWriter inputs;
      inputs.begin_object();
      inputs.kv("m", bounds_m);
      inputs.kv("eps", bounds_eps);
      inputs.kv("N", bounds_N);
      inputs.end_object();
      report = finish_report(command, inputs.str(), rs.str(), *common,
                             timer.ms());
      csv = kl::bound_reports_to_csv(rows);
      if (!common->csv_path.empty()) write_text(common->csv_path, csv);
      if (!common->out_path.empty()) write_text(common->out_path, report + "\n");
      std::cout << report << "\n";
      return claims_ok ? 0 : 2;
    }

    if (*c_scan) {
      command = "kreiss-scan";
      common = &o_scan;
      if (common->threads > 0) kl::set_thread_count(common->threads);
      kl::CMatrix a = load_operator(scan_matrix, scan_spec, scan_muller, scan_plain);
      kl::ConstantsOptions opts = constants_opts(*common);
      opts.radial_points = scan_rgrid;
      opts.angle_points = scan_agrid;
      opts.certify_upper = scan_upper;
      const kl::ConstantEstimate est = kl::kreiss_constant(a, opts);
      // annulus scan CSV: level sets of the objective
      std::ostringstream csvs;
      csvs << "r,theta,value\n";
      const double a_norm = kl::op_norm(a);
      for (int i = 0; i < scan_rgrid; ++i) {
        const double r = 1.0 + std::pow(10.0, -i) * (a_norm + 1.0);
        for (int j = 0; j < scan_agrid; ++j) {
          const double th = -3.141592653589793 + (j + 0.5) * 2.0 * 3.141592653589793 / scan_agrid;
          const kl::cd z = r * kl::cd(std::cos(th), std::sin(th));
          csvs << kl::JsonWriter::number(r) << ',' << kl::JsonWriter::number(th) << ','
               << kl::JsonWriter::number(kl::kreiss_objective(a, z)) << "\n";
        }
      }
      kl::JsonWriter inputs;
      inputs.begin_object();
      inputs.kv("dim", static_cast<long long>(a.rows()));
      inputs.kv("rgrid", scan_rgrid);
      inputs.kv("agrid", scan_agrid);
      inputs.end_object();
      report = finish_report(command, inputs.str(),
                             kl::constant_estimate_to_json(est), *common, timer.ms());
      csv = csvs.str();
      if (!common->csv_path.empty()) write_text(common->csv_path, csv);
      if (!common->out_path.empty()) write_text(common->out_path, report + "\n");
      std::cout << report << "\n";
      return 0;
    }

    if (*c_dlp) {
      command = "dlp-verify";
      common = &o_dlp;
      if (common->threads > 0) kl::set_thread_count(common->threads);
      const kl::VTypeCurve curve = parse_curve(dlp_curve);
      const kl::EpsilonProfile eps = parse_eps(dlp_eps);
      eps.validate();
      const kl::CMatrix t = kl::ritt_test(dlp_N, dlp_cond, common->seed);
      const std::vector<long long> ns = parse_list(dlp_nlist);
      const kl::KSpectralCertificate cert =
          kl::k_spectral_estimate(t, curve, eps, ns, common->grid);
      double worst_margin = 0.0, worst_residual = 0.0, max_ratio = 0.0;
      for (const auto& per : cert.per_n) {
        worst_margin = std::min(worst_margin, per.min_psd_margin);
        worst_residual = std::max(worst_residual, per.max_reassembly_residual);
        const double ratio =
            kl::verify_k_spectral(t, per.K_n, per.r_n, dlp_trials, common->seed);
        max_ratio = std::max(max_ratio, ratio);
        if (ratio > per.K_n * (1.0 + 1e-6)) claims_ok = false;
      }
      if (worst_margin < -1e-9 || worst_residual > 1e-9) claims_ok = false;
      std::ostringstream rs;
      rs << "{\"certificate\":" << kl::certificate_to_json(cert)
         << ",\"max_ratio\":" << kl::JsonWriter::number(max_ratio)
         << ",\"worst_psd_margin\":" << kl::JsonWriter::number(worst_margin)
         << ",\"worst_reassembly_residual\":" << kl::JsonWriter::number(worst_residual)
         << ",\"claims_ok\":" << (claims_ok ? "true" : "false") << "}";
      kl::JsonWriter inputs;
      inputs.begin_object();
      inputs.kv("N", dlp_N);
      inputs.kv("cond", dlp_cond);
      inputs.kv("curve", dlp_curve);
      inputs.kv("epsprofile", dlp_eps);
      inputs.kv("nlist", dlp_nlist);
      inputs.kv("grid", common->grid);
      inputs.kv("trials", dlp_trials);
      inputs.end_object();
      report = finish_report(command, inputs.str(), rs.str(), *common,
                             timer.ms());
      if (!common->csv_path.empty()) {
        const kl::CurveDecomposition dec =
            kl::decompose(t, curve, eps, ns.back(), common->grid);
        write_text(common->csv_path, kl::decomposition_to_csv(dec));
      }
      if (!common->out_path.empty()) write_text(common->out_path, report + "\n");
      std::cout << report << "\n";
      return claims_ok ? 0 : 2;
    }

    if (*c_resolvent) {
      command = "counterexample resolvent";
      common = &o_resolvent;
      if (common->threads > 0) kl::set_thread_count(common->threads);
      if (cx_cn != "inv_sqrt_log") throw kl::input_error("only --cN inv_sqrt_log is built in");
      const kl::CNSequence cn = kl::CNSequence::inv_sqrt_log();
      std::ostringstream csvs;
      csvs << "N,c_N,power,c_N_log_N\n";
      kl::JsonWriter rows;
      rows.begin_object();
      rows.key("rows").begin_array();
      double prev_power = 0.0;
      bool increasing = true;
      for (long long N = 16; N <= cx_Nmax; N *= 2) {
        const double c = cn.at(N);
        kl::ShiftFamilySpec spec{kl::ShiftVariant::cesaro, 1, c};
        kl::TruncationSpec trunc{N};
        const double power = kl::shift_power_norm(spec, trunc, N - 1);
        const double predicted = c * std::log(static_cast<double>(N));
        if (power + 1e-12 < predicted) claims_ok = false;
        if (power <= prev_power) increasing = false;
        prev_power = power;
        rows.begin_object();
        rows.kv("N", N);
        rows.kv("c_N", c);
        rows.kv("power", power);
        rows.kv("predicted", predicted);
        rows.end_object();
        csvs << N << ',' << kl::JsonWriter::number(c) << ',' << kl::JsonWriter::number(power)
             << ',' << kl::JsonWriter::number(predicted) << "\n";
      }
      rows.end_array();
      // envelope certificate at the two reference truncations
      const kl::ZGrid grid = kl::annulus_grid(3.0, 16, 16);
      const double L = kl::estimate_L(0.05, {64, 128}, grid);
      const double slack64 = kl::resolvent_envelope_check(64, 0.05, L, grid);
      const double slack128 = kl::resolvent_envelope_check(128, 0.05, L, grid);
      if (slack64 < -1e-9 || slack128 < -1e-9) claims_ok = false;
      if (!increasing) claims_ok = false;
      rows.kv("L_empirical", L);
      rows.kv("envelope_slack_64", slack64);
      rows.kv("envelope_slack_128", slack128);
      rows.kv("power_strictly_increasing", increasing);
      rows.kv("claims_ok", claims_ok);
      rows.end_object();
      kl::JsonWriter inputs;
      inputs.begin_object();
      inputs.kv("Nmax", cx_Nmax);
      inputs.kv("cN", cx_cn);
      inputs.end_object();
      report = finish_report(command, inputs.str(), rows.str(), *common,
                             timer.ms());
      csv = csvs.str();
      if (!common->csv_path.empty()) write_text(common->csv_path, csv);
      if (!common->out_path.empty()) write_text(common->out_path, report + "\n");
      std::cout << report << "\n";
      return claims_ok ? 0 : 2;
    }

    if (*c_pisier) {
      command = "counterexample pisier";
      common = &o_pisier;
      if (common->threads > 0) kl::set_thread_count(common->threads);
      if (cx_beta != "inv_log") throw kl::input_error("only --beta inv_log is built in");
      const kl::BetaSequence beta = kl::BetaSequence::inv_log(std::max<long long>(cx_M + 2, 1024));
      const kl::CMatrix f = kl::build_foguel_hankel_trunc(beta, cx_M);
      kl::Csr sf(f, 0.0);
      kl::CMatrix p = kl::CMatrix::Identity(f.rows(), f.cols());
      std::ostringstream csvs;
      csvs << "n,power_norm,bound\n";
      kl::JsonWriter rows;
      rows.begin_object();
      rows.key("rows").begin_array();
      const long long n_hi = std::min<long long>(common->nmax, 64);
      for (long long n = 1; n <= n_hi; ++n) {
        p = sf.apply_left(p);
        const double nrm = kl::op_norm(p);
        const double bound = 1.0 + std::sqrt(beta.at(n));
        if (nrm > bound + 1e-9) claims_ok = false;
        rows.begin_object();
        rows.kv("n", n);
        rows.kv("power_norm", nrm);
        rows.kv("bound", bound);
        rows.end_object();
        csvs << n << ',' << kl::JsonWriter::number(nrm) << ',' << kl::JsonWriter::number(bound)
             << "\n";
      }
      rows.end_array();
      const kl::PisierNorm pn = kl::pisier_X_norm(beta, 8, std::min<long long>(cx_M, 512));
      rows.kv("x_norm_matrix", pn.matrix_value);
      rows.kv("x_norm_closed_form", pn.closed_form);
      if (std::abs(pn.matrix_value - pn.closed_form) > 1e-10 * std::max(1.0, pn.closed_form))
        claims_ok = false;
      rows.kv("claims_ok", claims_ok);
      rows.end_object();
      kl::JsonWriter inputs;
      inputs.begin_object();
      inputs.kv("beta", cx_beta);
      inputs.kv("M", cx_M);
      inputs.end_object();
      report = finish_report(command, inputs.str(), rows.str(), *common,
                             timer.ms());
      csv = csvs.str();
      if (!common->csv_path.empty()) write_text(common->csv_path, csv);
      if (!common->out_path.empty()) write_text(common->out_path, report + "\n");
      std::cout << report << "\n";
      return claims_ok ? 0 : 2;
    }
  } catch (const kl::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
