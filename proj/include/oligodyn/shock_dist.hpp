#pragma once

#include <string>
#include <vector>

namespace oligodyn {

enum class DistKind { normal, logistic, tabulated };

/** One failed distribution property check, anchored at a grid point. */
struct DistViolation {
  std::string property;  // "symmetry", "positivity", "mhr", ...
  double x;
  std::string detail;
};

/** Motion-function value with a magnitude flag for downstream sanity checks. */
struct MotionValue {
  double value;
  bool out_of_range;  // |value| > kMotionRange (or non-finite input)
};

/**
 * Symmetric demand-shock distribution with the derived objects the pricing
 * models consume: markup (1-F)/f, flow profit (1-F)^2/f, and the motion
 * function x + (2F-1)/f whose monotonicity pins down equilibrium prices.
 *
 * Tail evaluation for the normal goes through the complementary error
 * function; the naive 1-F difference loses all precision beyond |x| ~ 6 and
 * breaks the strict-monotonicity guarantees that the solvers rely on.
 * Densities are floored at kPdfFloor so ratios stay finite; derived ratios
 * saturate at +-kValueCap instead of overflowing.
 */
class ShockDistribution {
 public:
  static ShockDistribution standard_normal();
  static ShockDistribution standard_logistic();

  /** Tabulated density on a strictly increasing grid (>= 16 nodes).
      The table is symmetrized about 0 and renormalized to unit mass. */
  static ShockDistribution tabulated(std::vector<double> x, std::vector<double> density);

  /** Reads a "x,density" CSV (header required) and builds a tabulated distribution. */
  static ShockDistribution from_csv(const std::string& path);

  /** "normal" | "logistic" | path to a density CSV. */
  static ShockDistribution from_name(const std::string& name);

  DistKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double cdf(double x) const;
  /** Upper tail 1 - cdf(x), computed to full relative precision. */
  double sf(double x) const;
  /** Density, floored at kPdfFloor. */
  double pdf(double x) const;
  /** Inverse hazard (1-F)/f. */
  double markup(double x) const;
  /** Flow profit (1-F)^2/f. */
  double static_profit(double x) const;
  /** Motion function x + (2F-1)/f; odd by construction (exact reflection). */
  double motion(double x) const;
  MotionValue motion_checked(double x) const;

  /** Quantile used by shock-draw simulation; u in (0,1). */
  double quantile(double u) const;

  /** Checks symmetry, positivity, hazard-rate monotonicity, motion-function
      monotonicity and oddness, and profit-function shape on the canonical
      grid [-8, 8] step 0.01 (clipped to the support for tabulated input). */
  std::vector<DistViolation> validate() const;

  /** Support bounds; +-inf for the built-in distributions. */
  double support_lo() const;
  double support_hi() const;

  static constexpr double kPdfFloor = 1e-300;
  static constexpr double kValueCap = 1e300;
  static constexpr double kMotionRange = 1e12;

 private:
  ShockDistribution() = default;

  double pdf_raw(double x) const;

  DistKind kind_ = DistKind::normal;
  std::string name_;
  // Tabulated data: symmetric node grid, density, cumulative mass from the
  // left (tF_) and from the right (tS_).
  std::vector<double> tx_, td_, tF_, tS_;
};

}  // namespace oligodyn
