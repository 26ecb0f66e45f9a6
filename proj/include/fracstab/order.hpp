#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fracstab {

/// Largest admissible denominator of a reduced fractional order.
inline constexpr std::int64_t kMaxOrderDenominator = 1000;
/// Orders must stay strictly below this value.
inline constexpr std::int64_t kMaxOrderValue = 100;

/**
 * Exact non-negative rational exponent of the Laplace variable.
 *
 * Always stored in lowest terms with a positive denominator, so two orders
 * compare equal exactly when their values are equal.
 */
class FracOrder {
 public:
  constexpr FracOrder() = default;

  /// Throws ValidationError when the reduced value is negative, has a
  /// denominator above kMaxOrderDenominator, or is not below kMaxOrderValue.
  FracOrder(std::int64_t num, std::int64_t den);

  /// Accepts "2", "0.5", "1.31" and "1/3". Decimals are converted exactly.
  static FracOrder parse(std::string_view text);

  /// Positive num/den in lowest terms without the denominator and value
  /// bounds. Only for derived quantities such as a commensurate base, whose
  /// denominator may be the product of two admissible ones.
  static FracOrder derived(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }

  /// Terminating decimal when the denominator allows it, "p/q" otherwise.
  std::string to_string() const;

  friend bool operator==(const FracOrder&, const FracOrder&) = default;
  friend std::strong_ordering operator<=>(const FracOrder& a, const FracOrder& b) noexcept {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  friend FracOrder operator+(const FracOrder& a, const FracOrder& b);
  friend FracOrder operator-(const FracOrder& a, const FracOrder& b);
  friend FracOrder operator*(const FracOrder& a, std::int64_t k);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace fracstab
