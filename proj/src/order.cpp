#include "fracstab/order.hpp"

#include <numeric>

#include "fracstab/errors.hpp"

namespace fracstab {

FracOrder::FracOrder(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ValidationError("fractional order has zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num < 0) throw ValidationError("fractional order must be non-negative");
  const std::int64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (den > kMaxOrderDenominator) {
    throw ValidationError("fractional order " + std::to_string(num) + "/" + std::to_string(den) +
                          " has denominator above Q_MAX=" + std::to_string(kMaxOrderDenominator));
  }
  if (num >= kMaxOrderValue * den) {
    throw ValidationError("fractional order " + std::to_string(num) + "/" + std::to_string(den) +
                          " is not below " + std::to_string(kMaxOrderValue));
  }
  num_ = num;
  den_ = den;
}

FracOrder FracOrder::derived(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0) throw ValidationError("derived order must be positive");
  const std::int64_t g = std::gcd(num, den);
  FracOrder out;
  out.num_ = num / g;
  out.den_ = den / g;
  return out;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::int64_t parse_digits(std::string_view s, std::string_view original) {
  // 15 digits keep every intermediate product inside int64.
  if (s.size() > 15) throw ValidationError("fractional order '" + std::string(original) + "' has too many digits");
  std::int64_t v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

FracOrder FracOrder::parse(std::string_view text) {
  const std::string_view original = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) throw ValidationError("empty fractional order");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto n = text.substr(0, slash);
    auto d = text.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d))
      throw ValidationError("malformed fractional order '" + std::string(original) + "'");
    return FracOrder(parse_digits(n, original), parse_digits(d, original));
  }

  auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty()) whole = "0";
  if (!all_digits(whole) || (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) ||
      (dot != std::string_view::npos && frac.empty() && text.size() == 1))
    throw ValidationError("malformed fractional order '" + std::string(original) + "'");

  while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t w = parse_digits(whole, original);
  if (w >= kMaxOrderValue)
    throw ValidationError("fractional order '" + std::string(original) + "' is not below " +
                          std::to_string(kMaxOrderValue));
  const std::int64_t f = frac.empty() ? 0 : parse_digits(frac, original);
  return FracOrder(w * den + f, den);
}

std::string FracOrder::to_string() const {
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);

  const int digits = std::max(twos, fives);
  if (digits == 0) return std::to_string(num_);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t scaled = num_ * (scale / den_);
  std::string frac = std::to_string(scaled % scale);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  return std::to_string(scaled / scale) + "." + frac;
}

FracOrder operator+(const FracOrder& a, const FracOrder& b) {
  return FracOrder(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

FracOrder operator-(const FracOrder& a, const FracOrder& b) {
  return FracOrder(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

FracOrder operator*(const FracOrder& a, std::int64_t k) { return FracOrder(a.num_ * k, a.den_); }

}  // namespace fracstab
