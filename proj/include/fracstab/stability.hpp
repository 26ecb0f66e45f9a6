#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "fracstab/order.hpp"
#include "fracstab/quasi_polynomial.hpp"
#include "fracstab/roots.hpp"

namespace fracstab {

/// Tolerance on |arg(w)| - alpha*pi/2 separating the three verdicts.
inline constexpr double kArgTolerance = 1e-9;

/// Pseudo-polynomial in w = s^alpha of a fully known quasi-polynomial.
struct CommensurateForm {
  /// Every term order is an integer multiple of base_order; 0 < base_order <= 1.
  FracOrder base_order;
  /// Coefficient of w^k is the coefficient of s^(k*base_order).
  IntPolynomial poly;
};

/**
 * Rewrites a fully known quasi-polynomial over the commensurate base.
 *
 * The base is gcd(orders) computed exactly; if it exceeds 1 it is divided by
 * the smallest integer that brings it to 1 or below (so s^2 + 1 uses base 1).
 * Throws DegreeError when the resulting degree exceeds kMaxDegree.
 */
CommensurateForm commensurate(const QuasiPolynomial& qp);

enum class Verdict { Stable, Marginal, Unstable };

std::string_view to_string(Verdict v) noexcept;

struct RootWitness {
  std::complex<double> root;
  int multiplicity = 1;
  /// arg(root) in (-pi, pi]; 0 for a root at the origin.
  double argument = 0.0;
  bool at_origin = false;
};

struct StabilityVerdict {
  Verdict verdict = Verdict::Stable;
  /// min over roots of |arg| - alpha*pi/2 (radians); +inf when there are no roots.
  double margin = 0.0;
  FracOrder base_order;
  std::vector<RootWitness> witnesses;
  double residual = 0.0;
  /// Root counts with multiplicity, split by which side of the sector edge they lie.
  int stable_roots = 0;
  int marginal_roots = 0;
  int unstable_roots = 0;
};

/**
 * Matignon sector test on the commensurate pseudo-polynomial.
 *
 * A root w is stable when |arg w| > alpha*pi/2 + kArgTolerance. Roots with
 * |w| <= 1e-12 * max(1, max|w|) sit at the origin: one simple origin root
 * with every other root stable gives Marginal, anything else involving the
 * origin is Unstable.
 */
StabilityVerdict matignon_check(const QuasiPolynomial& qp);

}  // namespace fracstab
