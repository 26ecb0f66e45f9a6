#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracstab/order.hpp"
#include "fracstab/quasi_polynomial.hpp"

namespace fracstab {

/// The two free parameters spanning a stability plot.
struct Plane {
  std::string p1;
  std::string p2;
};

struct ParamPoint {
  double p1 = 0.0;
  double p2 = 0.0;
};

/// Axis-aligned rectangle in the parameter plane.
struct Window {
  double p1_min = -10.0;
  double p1_max = 10.0;
  double p2_min = -10.0;
  double p2_max = 10.0;

  double diagonal() const noexcept;
  /// Same centre, each side multiplied by `factor`.
  Window scaled(double factor) const noexcept;
  bool contains(ParamPoint p) const noexcept;
  /// Throws ValidationError unless both ranges are finite and non-empty.
  void validate() const;
};

/// exact cos(pi*order/2) and sin(pi*order/2), the phase of j^order.
std::pair<double, double> unit_phase(const FracOrder& order);

/// constant + sum_name slope[name] * name
struct AffineForm {
  double constant = 0.0;
  std::map<std::string, double> slope;

  double coefficient(const std::string& name) const;
};

/// Real and imaginary parts of D(j*omega) as affine forms in the free parameters.
struct BoundaryParts {
  AffineForm real;
  AffineForm imag;
};

/// Splits D(j*omega) into real and imaginary parts after applying `bindings`.
/// Throws ValidationError for omega <= 0 or more than two free parameters left.
BoundaryParts eval_boundary_parts(const QuasiPolynomial& qp, double omega, const Bindings& bindings);

struct CrbSample {
  double omega = 0.0;
  ParamPoint point;
};

/// One complex-root-boundary curve, omega strictly increasing along it.
struct CrbBranch {
  std::vector<CrbSample> samples;
  /// Parameter values held fixed while tracing the curve.
  Bindings fixed;
  /// Orders of the terms of the traced polynomial.
  std::vector<FracOrder> orders;
  /// Frequencies skipped because the 2x2 system was singular or degenerate.
  std::vector<double> gaps;
  /// Non-empty when the curve degenerates (e.g. it collapses to a point).
  std::string diagnostic;
};

/// Solves Re D(jw) = Im D(jw) = 0 for the plane parameters at each omega.
/// Throws ValidationError when the plane parameters are missing, other
/// parameters are left unbound, or the system is singular for every omega
/// (orders of the two parameters differ by an even integer).
CrbBranch crb_general(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings,
                      std::span<const double> omegas);

/// Closed form for a*s^a2 + b*s^a1 + c with (a, c) free; 0 < a1 < a2 < 2.
/// b = 0 returns an empty branch with a diagnostic.
CrbBranch crb_three_term(double b, const FracOrder& alpha1, const FracOrder& alpha2, std::span<const double> omegas);

/// Closed form for a*s^(2 alpha) + b*s^alpha + c with (a, c) free; 0 < alpha < 1.
CrbBranch crb_commensurate_pair(double b, const FracOrder& alpha, std::span<const double> omegas);

/// n1*p1 + n2*p2 + offset = 0, with (n1, n2) of unit length.
struct Line {
  double n1 = 0.0;
  double n2 = 0.0;
  double offset = 0.0;

  /// Portion of the line inside `w`, if any.
  std::optional<std::pair<ParamPoint, ParamPoint>> clip(const Window& w) const;
};

/// Locus where the order-0 coefficient vanishes; absent unless that
/// coefficient is one of the plane parameters.
std::optional<Line> real_root_boundary(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings);

/// Locus where the top-order coefficient vanishes; absent unless that
/// coefficient is one of the plane parameters.
std::optional<Line> infinite_root_boundary(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings);

/// Frequency grid for boundary tracing.
struct OmegaGrid {
  double lo = 1e-4;
  double hi = 1e4;
  int count = 2000;

  /// count logarithmically spaced values from lo to hi.
  std::vector<double> values() const;
};

struct BoundarySet {
  std::optional<Line> rrb;
  std::optional<Line> irb;
  std::vector<CrbBranch> crb;
  std::vector<std::string> warnings;
};

/**
 * All three boundaries for plotting in `window`.
 *
 * CRB samples are kept only inside the window scaled by 3 around its centre;
 * the curve is split into separate branches wherever samples were dropped.
 * Consecutive samples further apart than 5% of the window diagonal are
 * refined by up to three levels of geometric bisection in omega.
 */
BoundarySet compute_boundaries(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings,
                               const Window& window, const OmegaGrid& grid = {});

}  // namespace fracstab
