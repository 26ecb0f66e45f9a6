#pragma once

#include <string>
#include <vector>

#include "fracstab/quasi_polynomial.hpp"

namespace fracstab::test {

/// a s^a2 + b s^a1 + c with every coefficient known.
inline QuasiPolynomial three_term(double a, double b, double c, const std::string& a1, const std::string& a2) {
  return QuasiPolynomial({{Coefficient::known(a), FracOrder::parse(a2)},
                          {Coefficient::known(b), FracOrder::parse(a1)},
                          {Coefficient::known(c), FracOrder(0, 1)}});
}

/// a s^a2 + b s^a1 + c with a, b, c free.
inline QuasiPolynomial three_term_template(const std::string& a1, const std::string& a2) {
  return QuasiPolynomial({{Coefficient::unknown("a"), FracOrder::parse(a2)},
                          {Coefficient::unknown("b"), FracOrder::parse(a1)},
                          {Coefficient::unknown("c"), FracOrder(0, 1)}});
}

inline QuasiPolynomial basset_template() { return three_term_template("0.5", "1"); }
inline QuasiPolynomial furnace_template() { return three_term_template("0.97", "1.31"); }

}  // namespace fracstab::test
