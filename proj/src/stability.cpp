#include "fracstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fracstab/errors.hpp"

namespace fracstab {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Marginal: return "marginal";
    case Verdict::Unstable: return "unstable";
  }
  return "unknown";
}

CommensurateForm commensurate(const QuasiPolynomial& qp) {
  if (!qp.fully_known()) throw ValidationError("commensurate form needs every parameter bound");

  std::int64_t lcm_den = 1;
  for (const auto& t : qp.terms()) {
    lcm_den = std::lcm(lcm_den, t.order.den());
    if (lcm_den > (std::int64_t{1} << 40))
      throw DegreeError("order denominators have no usable common base", std::numeric_limits<long long>::max());
  }
  std::int64_t g = 0;
  for (const auto& t : qp.terms()) g = std::gcd(g, t.order.num() * (lcm_den / t.order.den()));

  // base = g / lcm_den, or 1 when every order is zero.
  std::int64_t base_num = g == 0 ? 1 : g;
  std::int64_t base_den = g == 0 ? 1 : lcm_den;
  if (base_num > base_den) {
    const std::int64_t k = (base_num + base_den - 1) / base_den;
    base_den *= k;
  }
  const FracOrder top = qp.degree();
  // top / base is an integer by construction; top.den() divides base_den.
  const std::int64_t degree = top.num() * (base_den / top.den()) / base_num;
  if (degree > kMaxDegree)
    throw DegreeError("commensurate degree " + std::to_string(degree) + " exceeds D_MAX=" + std::to_string(kMaxDegree) +
                          "; use orders with smaller denominators (Q_MAX=" + std::to_string(kMaxOrderDenominator) + ")",
                      degree);
  const FracOrder base = FracOrder::derived(base_num, base_den);

  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
  for (const auto& t : qp.terms()) {
    const std::int64_t k = (t.order.num() * base.den()) / (t.order.den() * base.num());
    coeffs[static_cast<std::size_t>(k)] = t.coeff.value();
  }
  return CommensurateForm{base, IntPolynomial(std::move(coeffs))};
}

StabilityVerdict matignon_check(const QuasiPolynomial& qp) {
  const CommensurateForm form = commensurate(qp);
  const double sector = form.base_order.value() * std::numbers::pi / 2.0;

  StabilityVerdict out;
  out.base_order = form.base_order;
  if (form.poly.degree() == 0) {
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }

  const RootSet roots = find_roots(form.poly);
  out.residual = roots.residual;

  double scale = 1.0;
  for (const auto& r : roots.roots) scale = std::max(scale, std::abs(r.value));

  int origin_multiplicity = 0;
  double margin_others = std::numeric_limits<double>::infinity();
  for (const auto& r : roots.roots) {
    RootWitness w{r.value, r.multiplicity, 0.0, false};
    if (std::abs(r.value) <= 1e-12 * scale) {
      w.at_origin = true;
      origin_multiplicity += r.multiplicity;
    } else {
      w.argument = std::arg(r.value);
      const double m = std::abs(w.argument) - sector;
      margin_others = std::min(margin_others, m);
      if (m > kArgTolerance)
        out.stable_roots += r.multiplicity;
      else if (m < -kArgTolerance)
        out.unstable_roots += r.multiplicity;
      else
        out.marginal_roots += r.multiplicity;
    }
    out.witnesses.push_back(w);
  }

  if (origin_multiplicity == 0) {
    out.margin = margin_others;
  } else if (origin_multiplicity == 1 && margin_others > kArgTolerance) {
    out.margin = 0.0;
    out.marginal_roots += 1;
  } else {
    // The origin root counts as sitting on the positive real axis.
    out.margin = std::min(margin_others, -sector);
    out.unstable_roots += origin_multiplicity;
  }

  if (out.margin > kArgTolerance)
    out.verdict = Verdict::Stable;
  else if (out.margin < -kArgTolerance)
    out.verdict = Verdict::Unstable;
  else
    out.verdict = Verdict::Marginal;
  return out;
}

}  // namespace fracstab
