#include "fracstab/quasi_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fracstab/errors.hpp"
#include "fracstab/number_format.hpp"

namespace fracstab {

QuasiPolynomial::QuasiPolynomial(std::vector<Term> terms) {
  std::set<std::string> names;
  for (const auto& t : terms) {
    if (t.coeff.is_known()) {
      if (!std::isfinite(t.coeff.value()))
        throw ValidationError("non-finite coefficient at order " + t.order.to_string());
      continue;
    }
    const auto& u = t.coeff.unknown();
    if (u.name.empty()) throw ValidationError("unknown parameter with empty name");
    if (u.multiplier == 0.0 || !std::isfinite(u.multiplier))
      throw ValidationError("parameter '" + u.name + "' has invalid multiplier " + format_double(u.multiplier));
    if (!names.insert(u.name).second)
      throw ValidationError("parameter '" + u.name + "' appears in more than one term");
  }

  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.order < b.order; });

  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().order == t.order) {
      auto& prev = terms_.back();
      if (!prev.coeff.is_known() || !t.coeff.is_known())
        throw ValidationError("duplicate order " + t.order.to_string() + " mixes a parameter with another coefficient");
      prev.coeff = Coefficient::known(prev.coeff.value() + t.coeff.value());
      continue;
    }
    terms_.push_back(std::move(t));
  }
  std::erase_if(terms_, [](const Term& t) { return t.coeff.is_known() && t.coeff.value() == 0.0; });
  if (terms_.empty()) throw ValidationError("polynomial has no nonzero terms");
}

QuasiPolynomial QuasiPolynomial::constant(double value) {
  return QuasiPolynomial({Term{Coefficient::known(value), FracOrder{}}});
}

bool QuasiPolynomial::fully_known() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff.is_known(); });
}

std::vector<std::string> QuasiPolynomial::unknowns() const {
  std::vector<std::string> out;
  for (const auto& t : terms_)
    if (!t.coeff.is_known()) out.push_back(t.coeff.unknown().name);
  return out;
}

const Term* QuasiPolynomial::term_at(const FracOrder& order) const noexcept {
  for (const auto& t : terms_)
    if (t.order == order) return &t;
  return nullptr;
}

const Term* QuasiPolynomial::term_with(const std::string& name) const noexcept {
  for (const auto& t : terms_)
    if (!t.coeff.is_known() && t.coeff.unknown().name == name) return &t;
  return nullptr;
}

QuasiPolynomial QuasiPolynomial::scaled(double factor) const {
  if (factor == 0.0 || !std::isfinite(factor)) throw ValidationError("scale factor must be finite and nonzero");
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (t.coeff.is_known())
      out.push_back({Coefficient::known(t.coeff.value() * factor), t.order});
    else
      out.push_back({Coefficient::unknown(t.coeff.unknown().name, t.coeff.unknown().multiplier * factor), t.order});
  }
  return QuasiPolynomial(std::move(out));
}

std::complex<double> QuasiPolynomial::evaluate(std::complex<double> s) const {
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) {
    if (!t.coeff.is_known()) throw ValidationError("cannot evaluate: parameter '" + t.coeff.unknown().name + "' is unbound");
    sum += t.coeff.value() * (t.order.is_zero() ? std::complex<double>(1.0) : std::pow(s, t.order.value()));
  }
  return sum;
}

namespace {

QuasiPolynomial bind_impl(const QuasiPolynomial& qp, const Bindings& bindings, bool require_all) {
  std::vector<Term> out;
  for (const auto& t : qp.terms()) {
    if (t.coeff.is_known()) {
      out.push_back(t);
      continue;
    }
    const auto& u = t.coeff.unknown();
    auto it = bindings.find(u.name);
    if (it == bindings.end()) {
      if (require_all) throw ValidationError("missing binding for parameter '" + u.name + "'");
      out.push_back(t);
      continue;
    }
    if (!std::isfinite(it->second))
      throw ValidationError("parameter '" + u.name + "' bound to non-finite value");
    out.push_back({Coefficient::known(u.multiplier * it->second), t.order});
  }
  return QuasiPolynomial(std::move(out));
}

}  // namespace

QuasiPolynomial substitute(const QuasiPolynomial& qp, const Bindings& bindings) {
  return bind_impl(qp, bindings, true);
}

QuasiPolynomial bind_partial(const QuasiPolynomial& qp, const Bindings& bindings) {
  return bind_impl(qp, bindings, false);
}

void FracSystem::validate() const {
  if (!std::isfinite(gain)) throw ValidationError("gain must be finite");
  if (!numerator.degree().is_zero() && !(numerator.degree() < denominator.degree()))
    throw ValidationError("numerator degree " + numerator.degree().to_string() +
                          " must be below denominator degree " + denominator.degree().to_string());
}

}  // namespace fracstab
