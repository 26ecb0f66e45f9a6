#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fracstab/order.hpp"

namespace fracstab {

/// Free parameter entering a coefficient linearly: multiplier * value(name).
struct Unknown {
  std::string name;
  double multiplier = 1.0;

  friend bool operator==(const Unknown&, const Unknown&) = default;
};

/// Term coefficient, either a known real or a named free parameter.
class Coefficient {
 public:
  static Coefficient known(double value) { return Coefficient(value); }
  static Coefficient unknown(std::string name, double multiplier = 1.0) {
    return Coefficient(Unknown{std::move(name), multiplier});
  }

  bool is_known() const noexcept { return std::holds_alternative<double>(value_); }
  double value() const { return std::get<double>(value_); }
  const Unknown& unknown() const { return std::get<Unknown>(value_); }

  friend bool operator==(const Coefficient&, const Coefficient&) = default;

 private:
  explicit Coefficient(std::variant<double, Unknown> v) : value_(std::move(v)) {}
  std::variant<double, Unknown> value_;
};

struct Term {
  Coefficient coeff;
  FracOrder order;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Name -> value map used to bind free parameters.
using Bindings = std::map<std::string, double>;

/**
 * Sum of coefficient * s^order terms, held in canonical form.
 *
 * Construction sorts terms by ascending order, merges duplicate orders whose
 * coefficients are both known, and drops known zero coefficients. A duplicate
 * order involving an unknown, a repeated unknown name, a zero or non-finite
 * multiplier, or an empty result is rejected with ValidationError.
 */
class QuasiPolynomial {
 public:
  explicit QuasiPolynomial(std::vector<Term> terms);

  /// Constant polynomial `value` (must be nonzero).
  static QuasiPolynomial constant(double value);

  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Largest order present.
  FracOrder degree() const noexcept { return terms_.back().order; }

  bool fully_known() const noexcept;
  std::vector<std::string> unknowns() const;

  /// Term at exactly `order`, if present.
  const Term* term_at(const FracOrder& order) const noexcept;
  /// Term whose coefficient is the named unknown, if present.
  const Term* term_with(const std::string& name) const noexcept;

  /// Every coefficient (known values and unknown multipliers) times `factor`.
  QuasiPolynomial scaled(double factor) const;

  /// D(s) for a fully known polynomial, principal branch of s^order.
  std::complex<double> evaluate(std::complex<double> s) const;

  friend bool operator==(const QuasiPolynomial&, const QuasiPolynomial&) = default;

 private:
  std::vector<Term> terms_;
};

/// Resolves every unknown; throws ValidationError naming a missing binding or
/// a non-finite bound value. Terms whose resolved coefficient is 0 are dropped.
QuasiPolynomial substitute(const QuasiPolynomial& qp, const Bindings& bindings);

/// Like substitute, but unknowns absent from `bindings` are kept as unknowns.
QuasiPolynomial bind_partial(const QuasiPolynomial& qp, const Bindings& bindings);

/// Transfer function gain * N(s) / D(s) of a linear time-invariant FDE.
struct FracSystem {
  QuasiPolynomial denominator;
  QuasiPolynomial numerator = QuasiPolynomial::constant(1.0);
  double gain = 1.0;

  /// Throws ValidationError if a non-constant numerator does not have a
  /// strictly smaller degree than the denominator, or the gain is not finite.
  void validate() const;

  friend bool operator==(const FracSystem&, const FracSystem&) = default;
};

}  // namespace fracstab
