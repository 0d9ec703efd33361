#include "oligodyn/shock_dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "oligodyn/errors.hpp"
#include "oligodyn/io.hpp"

namespace oligodyn {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kSqrtPi = std::sqrt(std::acos(-1.0));
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::acos(-1.0));
const double kSqrtHalfPi = std::sqrt(std::acos(-1.0) / 2.0);

double saturate(double v) {
  if (std::isnan(v)) return v;
  if (v > ShockDistribution::kValueCap) return ShockDistribution::kValueCap;
  if (v < -ShockDistribution::kValueCap) return -ShockDistribution::kValueCap;
  return v;
}

/** exp(z^2) * erfc(z) for z >= 0 without overflow.
    Direct product is safe through z = 25; beyond that erfc underflows and the
    asymptotic series in 1/(2z^2) already converges to full precision. */
double erfcx_pos(double z) {
  if (z <= 25.0) return std::exp(z * z) * std::erfc(z);
  const double inv2z2 = 1.0 / (2.0 * z * z);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 20; ++k) {
    term *= -(2.0 * k - 1.0) * inv2z2;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / (z * kSqrtPi);
}

double acklam_initial(double u) {
  // Rational initial guess for the standard normal quantile (relative error
  // ~1e-9), refined by one Newton step in quantile().
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (u > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

ShockDistribution ShockDistribution::standard_normal() {
  ShockDistribution d;
  d.kind_ = DistKind::normal;
  d.name_ = "normal";
  return d;
}

ShockDistribution ShockDistribution::standard_logistic() {
  ShockDistribution d;
  d.kind_ = DistKind::logistic;
  d.name_ = "logistic";
  return d;
}

ShockDistribution ShockDistribution::tabulated(std::vector<double> x,
                                               std::vector<double> density) {
  if (x.size() != density.size())
    throw InvalidParams("tabulated distribution: grid and density sizes differ");
  if (x.size() < 16)
    throw InvalidParams("tabulated distribution: need at least 16 rows, got " +
                        std::to_string(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(density[k]))
      throw InvalidParams("tabulated distribution: non-finite entry at row " +
                          std::to_string(k));
    if (density[k] < 0.0)
      throw InvalidParams("tabulated distribution: negative density at x = " +
                          fmt_g12(x[k]));
    if (k > 0 && !(x[k] > x[k - 1]))
      throw InvalidParams("tabulated distribution: grid not strictly increasing at x = " +
                          fmt_g12(x[k]));
  }

  // Symmetric node set: close the grid under negation, then average the
  // density with its reflection so f(x) = f(-x) holds exactly at the nodes.
  std::vector<double> u;
  u.reserve(2 * x.size());
  for (double v : x) {
    u.push_back(v);
    u.push_back(-v);
  }
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());

  auto lin = [&x, &density](double q) -> double {
    if (q < x.front() || q > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), q);
    if (it == x.begin()) return density.front();
    if (it == x.end()) return density.back();
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double t = (q - x[k]) / (x[k + 1] - x[k]);
    return density[k] + t * (density[k + 1] - density[k]);
  };

  std::vector<double> g(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) g[k] = 0.5 * (lin(u[k]) + lin(-u[k]));

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k)
    total += 0.5 * (g[k] + g[k + 1]) * (u[k + 1] - u[k]);
  if (!(total > 0.0) || !std::isfinite(total))
    throw InvalidParams("tabulated distribution: density has no positive mass");
  for (double& v : g) v /= total;

  ShockDistribution d;
  d.kind_ = DistKind::tabulated;
  d.name_ = "tabulated";
  d.tx_ = std::move(u);
  d.td_ = std::move(g);

  const std::size_t n = d.tx_.size();
  d.tF_.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k)
    d.tF_[k] = d.tF_[k - 1] +
               0.5 * (d.td_[k - 1] + d.td_[k]) * (d.tx_[k] - d.tx_[k - 1]);
  const double norm = d.tF_.back();
  for (double& v : d.tF_) v /= norm;
  d.tF_.back() = 1.0;
  d.tS_.assign(n, 0.0);
  for (std::size_t k = n - 1; k-- > 0;)
    d.tS_[k] = d.tS_[k + 1] +
               0.5 * (d.td_[k] + d.td_[k + 1]) * (d.tx_[k + 1] - d.tx_[k]) / norm;
  return d;
}

ShockDistribution ShockDistribution::from_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<double> xs, ds;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos
                                                                : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "x,density")
        throw InvalidParams(path + ": expected header \"x,density\", got \"" + line +
                            "\"");
      saw_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 2)
      throw InvalidParams(path + ":" + std::to_string(line_no) +
                          ": expected two comma-separated fields");
    xs.push_back(parse_double(trim(fields[0]), path + " x value"));
    ds.push_back(parse_double(trim(fields[1]), path + " density value"));
  }
  if (!saw_header) throw InvalidParams(path + ": empty density table");
  ShockDistribution d = tabulated(std::move(xs), std::move(ds));
  d.name_ = path;
  return d;
}

ShockDistribution ShockDistribution::from_name(const std::string& name) {
  if (name == "normal") return standard_normal();
  if (name == "logistic") return standard_logistic();
  return from_csv(name);
}

double ShockDistribution::cdf(double x) const {
  switch (kind_) {
    case DistKind::normal:
      return 0.5 * std::erfc(-x * kInvSqrt2);
    case DistKind::logistic:
      return 1.0 / (1.0 + std::exp(-x));
    case DistKind::tabulated: {
      if (x <= tx_.front()) return 0.0;
      if (x >= tx_.back()) return 1.0;
      auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - tx_.begin()) - 1;
      const double t = x - tx_[k];
      const double h = tx_[k + 1] - tx_[k];
      const double dx = td_[k] + (t / h) * (td_[k + 1] - td_[k]);
      return std::clamp(tF_[k] + 0.5 * (td_[k] + dx) * t, 0.0, 1.0);
    }
  }
  return 0.0;
}

double ShockDistribution::sf(double x) const {
  switch (kind_) {
    case DistKind::normal:
      return 0.5 * std::erfc(x * kInvSqrt2);
    case DistKind::logistic:
      return 1.0 / (1.0 + std::exp(x));
    case DistKind::tabulated: {
      if (x <= tx_.front()) return 1.0;
      if (x >= tx_.back()) return 0.0;
      auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - tx_.begin()) - 1;
      const double t = tx_[k + 1] - x;
      const double h = tx_[k + 1] - tx_[k];
      const double dx = td_[k + 1] + (t / h) * (td_[k] - td_[k + 1]);
      return std::clamp(tS_[k + 1] + 0.5 * (td_[k + 1] + dx) * t, 0.0, 1.0);
    }
  }
  return 0.0;
}

double ShockDistribution::pdf_raw(double x) const {
  switch (kind_) {
    case DistKind::normal:
      return kInvSqrt2Pi * std::exp(-0.5 * x * x);
    case DistKind::logistic: {
      const double F = 1.0 / (1.0 + std::exp(-x));
      const double S = 1.0 / (1.0 + std::exp(x));
      return F * S;
    }
    case DistKind::tabulated: {
      if (x < tx_.front() || x > tx_.back()) return 0.0;
      auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
      if (it == tx_.begin()) return td_.front();
      if (it == tx_.end()) return td_.back();
      const std::size_t k = static_cast<std::size_t>(it - tx_.begin()) - 1;
      const double t = (x - tx_[k]) / (tx_[k + 1] - tx_[k]);
      return td_[k] + t * (td_[k + 1] - td_[k]);
    }
  }
  return 0.0;
}

double ShockDistribution::pdf(double x) const {
  return std::max(pdf_raw(x), kPdfFloor);
}

double ShockDistribution::markup(double x) const {
  switch (kind_) {
    case DistKind::normal:
      // The erfcx route keeps full relative precision in the upper tail where
      // sf underflows relative to pdf.
      if (x >= 0.0) return kSqrtHalfPi * erfcx_pos(x * kInvSqrt2);
      return saturate(sf(x) / pdf(x));
    case DistKind::logistic:
      return saturate(1.0 + std::exp(-x));
    case DistKind::tabulated:
      return saturate(sf(x) / pdf(x));
  }
  return 0.0;
}

double ShockDistribution::static_profit(double x) const {
  return saturate(sf(x) * markup(x));
}

double ShockDistribution::motion(double x) const {
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  const double k = saturate(ax + markup(-ax) - markup(ax));
  return x < 0.0 ? -k : k;
}

MotionValue ShockDistribution::motion_checked(double x) const {
  const double v = motion(x);
  return MotionValue{v, !(std::abs(v) <= kMotionRange)};
}

double ShockDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    if (u == 0.0) return support_lo();
    if (u == 1.0) return support_hi();
    throw InvalidParams("quantile: u must lie in [0, 1], got " + fmt_g12(u));
  }
  switch (kind_) {
    case DistKind::normal: {
      double z = acklam_initial(u);
      // One Newton step against the erfc-based cdf/sf reaches full precision;
      // the lower tail compares cdf to u, the upper tail sf to 1-u.
      if (z < 0.0) {
        z -= (cdf(z) - u) / pdf(z);
      } else {
        z += (sf(z) - (1.0 - u)) / pdf(z);
      }
      return z;
    }
    case DistKind::logistic:
      return std::log(u) - std::log1p(-u);
    case DistKind::tabulated: {
      auto it = std::upper_bound(tF_.begin(), tF_.end(), u);
      std::size_t k = static_cast<std::size_t>(it - tF_.begin());
      if (k == 0) return tx_.front();
      if (k >= tx_.size()) return tx_.back();
      --k;
      const double h = tx_[k + 1] - tx_[k];
      const double a = (td_[k + 1] - td_[k]) / h;
      const double c = u - tF_[k];
      const double disc = std::max(td_[k] * td_[k] + 2.0 * a * c, 0.0);
      const double denom = td_[k] + std::sqrt(disc);
      const double t = denom > 0.0 ? 2.0 * c / denom : 0.0;
      return tx_[k] + std::clamp(t, 0.0, h);
    }
  }
  return 0.0;
}

double ShockDistribution::support_lo() const {
  return kind_ == DistKind::tabulated ? tx_.front()
                                      : -std::numeric_limits<double>::infinity();
}

double ShockDistribution::support_hi() const {
  return kind_ == DistKind::tabulated ? tx_.back()
                                      : std::numeric_limits<double>::infinity();
}

std::vector<DistViolation> ShockDistribution::validate() const {
  std::vector<DistViolation> out;
  std::vector<double> xs;
  xs.reserve(1601);
  for (int i = -800; i <= 800; ++i) {
    const double x = i * 0.01;
    if (kind_ == DistKind::tabulated && (x < tx_.front() || x > tx_.back())) continue;
    xs.push_back(x);
  }

  const std::size_t n = xs.size();
  std::vector<double> F(n), f_raw(n), mk(n), mk_neg(n), H(n), K(n);
  for (std::size_t k = 0; k < n; ++k) {
    F[k] = cdf(xs[k]);
    f_raw[k] = pdf_raw(xs[k]);
    mk[k] = markup(xs[k]);
    mk_neg[k] = markup(-xs[k]);
    H[k] = static_profit(xs[k]);
    K[k] = motion(xs[k]);
  }

  auto flag = [&out](const char* property, double x, const std::string& detail) {
    out.push_back(DistViolation{property, x, detail});
  };

  for (std::size_t k = 0; k < n; ++k) {
    if (!(F[k] >= 0.0 && F[k] <= 1.0))
      flag("cdf_bounds", xs[k], "cdf outside [0, 1]: " + fmt_g12(F[k]));
    if (k > 0 && F[k] < F[k - 1])
      flag("cdf_monotone", xs[k], "cdf decreases from " + fmt_g12(F[k - 1]) + " to " +
                                      fmt_g12(F[k]));
    if (!(f_raw[k] > 0.0))
      flag("positivity", xs[k], "density " + fmt_g12(f_raw[k]) + " is not positive");
    if (xs[k] == 0.0 && std::abs(F[k] - 0.5) > 1e-9)
      flag("median", 0.0, "cdf(0) = " + fmt_g12(F[k]) + ", expected 1/2");
    if (xs[k] > 0.0) {
      const double mirror = pdf(-xs[k]);
      if (std::abs(pdf(xs[k]) - mirror) > 1e-9)
        flag("symmetry", xs[k],
             "density asymmetry " + fmt_g12(pdf(xs[k]) - mirror));
      if (std::abs(K[k] + motion(-xs[k])) > 1e-9)
        flag("motion_odd", xs[k],
             "motion(x) + motion(-x) = " + fmt_g12(K[k] + motion(-xs[k])));
    }
    if (!(H[k] >= 0.0))
      flag("profit_sign", xs[k], "flow profit " + fmt_g12(H[k]) + " is negative");
  }

  for (std::size_t k = 1; k < n; ++k) {
    // Hazard family: F/f, F^2/f, (F-1)/f and (2F-1)/f must all strictly
    // increase; the last two reduce to the markup evaluated with reflection.
    const double ff_prev = saturate(F[k - 1] / pdf(xs[k - 1]));
    const double ff_cur = saturate(F[k] / pdf(xs[k]));
    if (!(ff_cur > ff_prev))
      flag("mhr", xs[k], "F/f not strictly increasing");
    const double f2f_prev = saturate(F[k - 1] * F[k - 1] / pdf(xs[k - 1]));
    const double f2f_cur = saturate(F[k] * F[k] / pdf(xs[k]));
    if (!(f2f_cur > f2f_prev))
      flag("mhr_f2", xs[k], "F^2/f not strictly increasing");
    if (!(-mk[k] > -mk[k - 1]))
      flag("mhr_upper", xs[k], "(F-1)/f not strictly increasing");
    if (!(mk_neg[k] - mk[k] > mk_neg[k - 1] - mk[k - 1]))
      flag("mhr_spread", xs[k], "(2F-1)/f not strictly increasing");
    if (!(K[k] > K[k - 1]))
      flag("motion_monotone", xs[k], "motion function not strictly increasing");
    if (!(H[k] < H[k - 1]))
      flag("profit_monotone", xs[k], "flow profit not strictly decreasing");
  }
  return out;
}

}  // namespace oligodyn
