#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fracstab {

/// Highest polynomial degree the root finder accepts.
inline constexpr int kMaxDegree = 2048;

/// Real-coefficient polynomial, coeffs[k] multiplies w^k.
class IntPolynomial {
 public:
  /// Trims leading coefficients with |c| <= 1e-14 * max|c|. Throws
  /// ValidationError for non-finite or all-zero input and DegreeError above
  /// kMaxDegree.
  explicit IntPolynomial(std::vector<double> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::complex<double> operator()(std::complex<double> w) const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

struct Root {
  std::complex<double> value;
  int multiplicity = 1;
};

struct RootSet {
  /// Sorted by real part, then imaginary part.
  std::vector<Root> roots;
  /// Worst relative backward error |P(w)| / sum_k |c_k||w|^k over the roots.
  double residual = 0.0;

  /// Number of roots counted with multiplicity.
  int count() const noexcept;
};

/**
 * All complex roots of `p` by Aberth-Ehrlich simultaneous iteration.
 *
 * Exact zero low-order coefficients are deflated as roots at the origin.
 * Starting points come from the Newton polygon of the max-norm scaled
 * coefficients, so the result is deterministic. Roots closer than 1e-7 are
 * merged into one entry with multiplicity.
 *
 * Throws ValidationError for degree 0 and ConvergenceError when the residual
 * stays above 1e-8 after the iteration cap.
 */
RootSet find_roots(const IntPolynomial& p);

}  // namespace fracstab
