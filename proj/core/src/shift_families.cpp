#include "kreisslab/shift_families.hpp"

#include <cmath>
#include <sstream>

#include "kreisslab/linalg.hpp"
#include "kreisslab/rng.hpp"

namespace kreisslab {

namespace {
constexpr long long kMaxTotalDim = 1ll << 20;
constexpr long long kMaxDenseDim = 4096;
} // namespace

void ShiftFamilySpec::validate() const {
  if (m < 0 || m > 8) throw input_error("ShiftFamilySpec: require 0 <= m <= 8");
  if (!(c >= 0.0) || !std::isfinite(c))
    throw input_error("ShiftFamilySpec: require c >= 0");
}

void TruncationSpec::validate(const ShiftFamilySpec& spec) const {
  spec.validate();
  if (N < 2) throw input_error("TruncationSpec: require N >= 2");
  if (static_cast<long long>(spec.block_dim()) * N > kMaxTotalDim)
    throw input_error("TruncationSpec: total dimension 2^m * N exceeds 2^20");
}

const char* variant_name(ShiftVariant v) {
  switch (v) {
    case ShiftVariant::cesaro: return "cesaro";
    case ShiftVariant::strong_kreiss_telescoping: return "strong_kreiss_telescoping";
    case ShiftVariant::strong_kreiss_literal: return "strong_kreiss_literal";
  }
  return "?";
}

std::pair<ShiftFamilySpec, TruncationSpec> parse_shift_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw input_error("shift spec: expected '<variant>:k=v,...' in \"" + text + "\"");
  const std::string head = text.substr(0, colon);
  ShiftFamilySpec spec;
  if (head == "cesaro") spec.variant = ShiftVariant::cesaro;
  else if (head == "strong_kreiss_telescoping") spec.variant = ShiftVariant::strong_kreiss_telescoping;
  else if (head == "strong_kreiss_literal") spec.variant = ShiftVariant::strong_kreiss_literal;
  else throw input_error("shift spec: unknown variant \"" + head + "\"");

  TruncationSpec trunc;
  bool have_n = false;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw input_error("shift spec: expected key=value, got \"" + item + "\"");
    const std::string k = item.substr(0, eq);
    const std::string v = item.substr(eq + 1);
    try {
      if (k == "m") spec.m = std::stoi(v);
      else if (k == "c") spec.c = std::stod(v);
      else if (k == "N") { trunc.N = std::stoll(v); have_n = true; }
      else throw input_error("shift spec: unknown key \"" + k + "\"");
    } catch (const std::logic_error&) {
      throw input_error("shift spec: bad value in \"" + item + "\"");
    }
  }
  if (!have_n) throw input_error("shift spec: missing N");
  trunc.validate(spec);
  return {spec, trunc};
}

std::string format_shift_spec(const ShiftFamilySpec& spec, const TruncationSpec& trunc) {
  std::ostringstream os;
  os << variant_name(spec.variant) << ":m=" << spec.m << ",c=" << spec.c
     << ",N=" << trunc.N;
  return os.str();
}

double weight_log_factor(ShiftVariant v, long long k) {
  if (k < 2) throw input_error("weight_log_factor: require k >= 2");
  const double kd = static_cast<double>(k);
  switch (v) {
    case ShiftVariant::cesaro:
      return std::log1p(1.0 / (kd - 1.0)); // log(k/(k-1))
    case ShiftVariant::strong_kreiss_telescoping:
      return std::log(std::log(kd + 2.0) / std::log(kd + 1.0));
    case ShiftVariant::strong_kreiss_literal:
      return std::log(std::log(kd + 2.0) / std::log(2.0));
  }
  return 0.0;
}

namespace {

// A_{p,k}(c) built by the doubling recursion; unit diagonal, real entries.
CMatrix weight_block(ShiftVariant variant, int p, double c, long long k) {
  const double w = c * weight_log_factor(variant, k);
  CMatrix a = CMatrix::Identity(1, 1);
  for (int level = 0; level < p; ++level) {
    const Eigen::Index d = a.rows();
    CMatrix next = CMatrix::Zero(2 * d, 2 * d);
    next.topLeftCorner(d, d) = a;
    next.bottomRightCorner(d, d) = a;
    next.topRightCorner(d, d) = w * CMatrix::Identity(d, d);
    a = std::move(next);
  }
  return a;
}

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

LMatrix weight_block_ld(ShiftVariant variant, int p, double c, long long k) {
  const long double w = static_cast<long double>(c) * weight_log_factor(variant, k);
  LMatrix a = LMatrix::Identity(1, 1);
  for (int level = 0; level < p; ++level) {
    const Eigen::Index d = a.rows();
    LMatrix next = LMatrix::Zero(2 * d, 2 * d);
    next.topLeftCorner(d, d) = a;
    next.bottomRightCorner(d, d) = a;
    next.topRightCorner(d, d) = w * LMatrix::Identity(d, d);
    a = std::move(next);
  }
  return a;
}

} // namespace

CMatrix weight_matrix(const ShiftFamilySpec& spec, long long k) {
  spec.validate();
  if (k < 2) throw input_error("weight_matrix: require k >= 2");
  return weight_block(spec.variant, spec.m, spec.c, k);
}

double corner_entry(const ShiftFamilySpec& spec, long long N) {
  spec.validate();
  if (spec.variant != ShiftVariant::cesaro)
    throw precondition_error("corner_entry: defined for the cesaro family");
  if (N < 2) throw input_error("corner_entry: require N >= 2");
  if (spec.m == 0) return 1.0;
  LMatrix prod = weight_block_ld(spec.variant, spec.m, spec.c, 2);
  for (long long k = 3; k <= N; ++k)
    prod = (prod * weight_block_ld(spec.variant, spec.m, spec.c, k)).eval();
  return static_cast<double>(prod(0, prod.cols() - 1));
}

CMatrix block_B(const ShiftFamilySpec& spec, int p, long long n, long long j) {
  spec.validate();
  if (p < 0 || p >= std::max(spec.m, 1))
    throw input_error("block_B: require 0 <= p < m");
  if (n < 1) throw input_error("block_B: require n >= 1");
  if (j < 0) throw input_error("block_B: require j >= 0");
  const Eigen::Index d = 1ll << p;
  // window r in [j+2, n+j+1]; prefix/suffix products keep it O(n) matrices
  const long long len = n;
  std::vector<CMatrix> prefix(static_cast<std::size_t>(len) + 1),
      suffix(static_cast<std::size_t>(len) + 1);
  prefix[0] = CMatrix::Identity(d, d);
  suffix[static_cast<std::size_t>(len)] = CMatrix::Identity(d, d);
  for (long long i = 0; i < len; ++i)
    prefix[static_cast<std::size_t>(i + 1)] =
        prefix[static_cast<std::size_t>(i)] * weight_block(spec.variant, p, spec.c, j + 2 + i);
  for (long long i = len; i-- > 0;)
    suffix[static_cast<std::size_t>(i)] =
        weight_block(spec.variant, p, spec.c, j + 2 + i) * suffix[static_cast<std::size_t>(i + 1)];
  CMatrix sum = CMatrix::Zero(d, d);
  for (long long k = 2 + j; k <= n + j + 1; ++k) {
    const long long i = k - (j + 2);
    sum += weight_log_factor(spec.variant, k) *
           (prefix[static_cast<std::size_t>(i)] * suffix[static_cast<std::size_t>(i + 1)]);
  }
  return sum;
}

namespace {

// weight applied into slot i (0-based): block (i, i+1) of the shift
CMatrix slot_weight(const ShiftFamilySpec& spec, long long i) {
  return weight_block(spec.variant, spec.m, spec.c, i + 2);
}

void check_dense_dim(long long dim, const char* who) {
  if (dim > kMaxDenseDim)
    throw resource_error(std::string(who) + ": dense dimension " +
                         std::to_string(dim) + " exceeds " +
                         std::to_string(kMaxDenseDim));
}

} // namespace

CMatrix build_truncated_shift(const ShiftFamilySpec& spec, const TruncationSpec& trunc) {
  trunc.validate(spec);
  const long long bd = spec.block_dim();
  const long long dim = bd * trunc.N;
  check_dense_dim(dim, "build_truncated_shift");
  CMatrix x = CMatrix::Zero(dim, dim);
  for (long long i = 0; i + 1 < trunc.N; ++i)
    x.block(i * bd, (i + 1) * bd, bd, bd) = slot_weight(spec, i);
  return x;
}

CMatrix build_W_truncated(const ShiftFamilySpec& spec, int p, long long n,
                          const TruncationSpec& trunc) {
  trunc.validate(spec);
  if (p < 0 || p >= std::max(spec.m, 1))
    throw input_error("build_W_truncated: require 0 <= p < m");
  const long long bd = 1ll << p;
  const long long dim = bd * trunc.N;
  check_dense_dim(dim, "build_W_truncated");
  CMatrix w = CMatrix::Zero(dim, dim);
  for (long long i = 0; i + n < trunc.N; ++i)
    w.block(i * bd, (i + n) * bd, bd, bd) = block_B(spec, p, n, i);
  return w;
}

CMatrix build_plain_shift(long long N, long long blockdim) {
  if (N < 1 || blockdim < 1)
    throw input_error("build_plain_shift: require N >= 1, blockdim >= 1");
  const long long dim = N * blockdim;
  check_dense_dim(dim, "build_plain_shift");
  CMatrix s = CMatrix::Zero(dim, dim);
  for (long long i = 0; i + 1 < N; ++i)
    s.block(i * blockdim, (i + 1) * blockdim, blockdim, blockdim) =
        CMatrix::Identity(blockdim, blockdim);
  return s;
}

CMatrix build_muller_shift(long long N, double a) {
  if (!(a > 0.0 && a < 0.5))
    throw input_error("build_muller_shift: require 0 < a < 1/2");
  if (N < 1) throw input_error("build_muller_shift: require N >= 1");
  check_dense_dim(N, "build_muller_shift");
  CMatrix t = CMatrix::Zero(N, N);
  for (long long k = 2; k <= N; ++k)
    t(k - 2, k - 1) = std::pow(static_cast<double>(k) / static_cast<double>(k - 1), a);
  return t;
}

CMatrix build_direct_sum(std::span<const CMatrix> blocks) {
  long long dim = 0;
  for (const auto& b : blocks) {
    require_square(b, "build_direct_sum");
    dim += b.rows();
  }
  check_dense_dim(dim, "build_direct_sum");
  CMatrix out = CMatrix::Zero(dim, dim);
  long long at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

double shift_power_norm(const ShiftFamilySpec& spec, const TruncationSpec& trunc,
                        long long n) {
  trunc.validate(spec);
  if (n < 0) throw input_error("shift_power_norm: require n >= 0");
  if (n == 0) return 1.0;
  if (n >= trunc.N) return 0.0;
  double best = 0.0;
  for (long long i = 0; i + n < trunc.N; ++i) {
    CMatrix prod = slot_weight(spec, i);
    for (long long k = 1; k < n; ++k) prod = (prod * slot_weight(spec, i + k)).eval();
    best = std::max(best, op_norm(prod));
  }
  return best;
}

std::vector<double> shift_power_norms(const ShiftFamilySpec& spec,
                                      const TruncationSpec& trunc) {
  trunc.validate(spec);
  const long long N = trunc.N;
  std::vector<double> norms(static_cast<std::size_t>(N - 1), 0.0);
  // running window products: after step n, prod[i] = block (i, i+n) of X^n
  std::vector<CMatrix> prod(static_cast<std::size_t>(N - 1));
  for (long long i = 0; i + 1 < N; ++i) prod[static_cast<std::size_t>(i)] = slot_weight(spec, i);
  for (long long n = 1; n < N; ++n) {
    double best = 0.0;
    for (long long i = 0; i + n < N; ++i) {
      if (n > 1)
        prod[static_cast<std::size_t>(i)] =
            (prod[static_cast<std::size_t>(i)] * slot_weight(spec, i + n - 1)).eval();
      best = std::max(best, op_norm(prod[static_cast<std::size_t>(i)]));
    }
    norms[static_cast<std::size_t>(n - 1)] = best;
  }
  return norms;
}

CMatrix shift_resolvent_dense(const ShiftFamilySpec& spec, const TruncationSpec& trunc,
                              cd z) {
  trunc.validate(spec);
  if (std::abs(z) < 1e-300)
    throw singularity_error("shift_resolvent_dense: z = 0 is in the spectrum", z);
  const long long bd = spec.block_dim();
  const long long N = trunc.N;
  const long long dim = bd * N;
  check_dense_dim(dim, "shift_resolvent_dense");
  std::vector<CMatrix> w(static_cast<std::size_t>(N - 1));
  for (long long i = 0; i + 1 < N; ++i) w[static_cast<std::size_t>(i)] = slot_weight(spec, i);
  CMatrix r = CMatrix::Zero(dim, dim);
  // column block j of (zI - X)^{-1}: back-substitute z u_i - W_i u_{i+1} = delta_{ij} I
  for (long long j = 0; j < N; ++j) {
    CMatrix u = CMatrix::Zero(bd, bd); // u_{i+1} from previous pass, start above slot j
    for (long long i = j; i >= 0; --i) {
      CMatrix rhs = CMatrix::Zero(bd, bd);
      if (i == j) rhs.diagonal().setOnes();
      if (i + 1 <= j) rhs += w[static_cast<std::size_t>(i)] * u;
      u = rhs / z;
      r.block(i * bd, j * bd, bd, bd) = u;
    }
  }
  return r;
}

double shift_resolvent_norm(const ShiftFamilySpec& spec, const TruncationSpec& trunc,
                            cd z, CVector* warm) {
  trunc.validate(spec);
  if (std::abs(z) < 1e-300)
    throw singularity_error("shift_resolvent_norm: z = 0 is in the spectrum", z);
  const long long bd = spec.block_dim();
  const long long N = trunc.N;
  const long long dim = bd * N;
  std::vector<CMatrix> w(static_cast<std::size_t>(N - 1));
  for (long long i = 0; i + 1 < N; ++i) w[static_cast<std::size_t>(i)] = slot_weight(spec, i);

  // solve (zI - X) u = v: back-substitution over slots
  auto solve = [&](const CVector& v) {
    CVector u(dim);
    u.segment((N - 1) * bd, bd) = v.segment((N - 1) * bd, bd) / z;
    for (long long i = N - 2; i >= 0; --i)
      u.segment(i * bd, bd) =
          (v.segment(i * bd, bd) + w[static_cast<std::size_t>(i)] * u.segment((i + 1) * bd, bd)) / z;
    return u;
  };
  // solve (zI - X)* u = v: forward substitution (X* is block subdiagonal)
  auto solve_adj = [&](const CVector& v) {
    const cd zc = std::conj(z);
    CVector u(dim);
    u.segment(0, bd) = v.segment(0, bd) / zc;
    for (long long i = 1; i < N; ++i)
      u.segment(i * bd, bd) =
          (v.segment(i * bd, bd) +
           w[static_cast<std::size_t>(i - 1)].adjoint() * u.segment((i - 1) * bd, bd)) /
          zc;
    return u;
  };

  CVector local;
  CVector& v = warm ? *warm : local;
  if (v.size() != dim) {
    Rng rng(0x7e50);
    v = rng.gaussian_vector(dim);
    v.normalize();
  }
  double sigma = 0.0;
  for (int it = 0; it < 3000; ++it) {
    CVector s = solve(v);
    const double ns = s.norm();
    if (ns == 0.0) return 0.0;
    CVector u = solve_adj(s);
    const double nu = u.norm();
    if (nu == 0.0) return ns;
    v = u / nu;
    const bool done = it > 0 && std::abs(ns - sigma) <= 1e-12 * std::max(1.0, ns);
    sigma = ns;
    if (done) break;
  }
  return sigma;
}

CMatrix power_decomposition_rhs(const ShiftFamilySpec& spec, const TruncationSpec& trunc,
                                long long n) {
  trunc.validate(spec);
  if (n < 1 || n >= trunc.N)
    throw input_error("power_decomposition_rhs: require 1 <= n < N");
  const int m = spec.m;
  const long long bd = spec.block_dim();
  const long long N = trunc.N;
  const long long dim = bd * N;
  check_dense_dim(dim, "power_decomposition_rhs");
  CMatrix out = CMatrix::Zero(dim, dim);
  for (long long i = 0; i + n < N; ++i)
    out.block(i * bd, (i + n) * bd, bd, bd) = CMatrix::Identity(bd, bd); // S^n part
  // c-weighted W-terms: for every prefix address I of length l < m, route the
  // (I,2) sub-block of slot i+n into the (I,1) sub-block of slot i
  for (int l = 0; l < m; ++l) {
    const int p = m - l - 1;          // W_{p+1,n} has blocks of size 2^p
    const long long sub = 1ll << p;
    std::vector<CMatrix> b(static_cast<std::size_t>(std::max<long long>(0, N - n)));
    for (long long i = 0; i + n < N; ++i) b[static_cast<std::size_t>(i)] = block_B(spec, p, n, i);
    for (long long addr = 0; addr < (1ll << l); ++addr) {
      long long off = 0;
      for (int t = 0; t < l; ++t) {
        const long long bit = (addr >> (l - 1 - t)) & 1; // i_{t+1} - 1
        off += bit * (1ll << (m - 1 - t));
      }
      const long long row_off = off;        // (I, 1)
      const long long col_off = off + sub;  // (I, 2)
      for (long long i = 0; i + n < N; ++i)
        out.block(i * bd + row_off, (i + n) * bd + col_off, sub, sub) +=
            spec.c * b[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

} // namespace kreisslab
