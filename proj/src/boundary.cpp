#include "fracstab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "fracstab/errors.hpp"
#include "fracstab/number_format.hpp"

namespace fracstab {

double Window::diagonal() const noexcept { return std::hypot(p1_max - p1_min, p2_max - p2_min); }

Window Window::scaled(double factor) const noexcept {
  const double c1 = 0.5 * (p1_min + p1_max), c2 = 0.5 * (p2_min + p2_max);
  const double h1 = 0.5 * (p1_max - p1_min) * factor, h2 = 0.5 * (p2_max - p2_min) * factor;
  return {c1 - h1, c1 + h1, c2 - h2, c2 + h2};
}

bool Window::contains(ParamPoint p) const noexcept {
  return p.p1 >= p1_min && p.p1 <= p1_max && p.p2 >= p2_min && p.p2 <= p2_max;
}

void Window::validate() const {
  for (double v : {p1_min, p1_max, p2_min, p2_max})
    if (!std::isfinite(v)) throw ValidationError("window bounds must be finite");
  if (!(p1_min < p1_max) || !(p2_min < p2_max)) throw ValidationError("window ranges must be non-empty");
}

std::pair<double, double> unit_phase(const FracOrder& order) {
  const std::int64_t den = order.den();
  const std::int64_t n = order.num() % (4 * den);
  if ((2 * n) % den == 0) {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    static constexpr std::pair<double, double> eighths[8] = {
        {1.0, 0.0}, {h, h}, {0.0, 1.0}, {-h, h}, {-1.0, 0.0}, {-h, -h}, {0.0, -1.0}, {h, -h}};
    return eighths[(2 * n) / den];
  }
  const double theta = std::numbers::pi * static_cast<double>(n) / (2.0 * static_cast<double>(den));
  return {std::cos(theta), std::sin(theta)};
}

double AffineForm::coefficient(const std::string& name) const {
  auto it = slope.find(name);
  return it == slope.end() ? 0.0 : it->second;
}

BoundaryParts eval_boundary_parts(const QuasiPolynomial& qp, double omega, const Bindings& bindings) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be positive, got " + format_double(omega));
  const QuasiPolynomial bound = bind_partial(qp, bindings);
  if (bound.unknowns().size() > 2)
    throw ValidationError("boundary parts need at most two free parameters, " +
                          std::to_string(bound.unknowns().size()) + " remain");

  BoundaryParts out;
  for (const auto& t : bound.terms()) {
    const auto [c, s] = unit_phase(t.order);
    const double mag = t.order.is_zero() ? 1.0 : std::pow(omega, t.order.value());
    if (t.coeff.is_known()) {
      out.real.constant += t.coeff.value() * c * mag;
      out.imag.constant += t.coeff.value() * s * mag;
    } else {
      const auto& u = t.coeff.unknown();
      out.real.slope[u.name] += u.multiplier * c * mag;
      out.imag.slope[u.name] += u.multiplier * s * mag;
    }
  }
  return out;
}

namespace {

struct PlaneSetup {
  QuasiPolynomial bound;
  FracOrder o1, o2;
};

PlaneSetup setup_plane(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings) {
  if (plane.p1 == plane.p2) throw ValidationError("plane parameters must differ");
  Bindings b = bindings;
  b.erase(plane.p1);
  b.erase(plane.p2);
  QuasiPolynomial bound = bind_partial(qp, b);
  for (const auto& name : bound.unknowns())
    if (name != plane.p1 && name != plane.p2) throw ValidationError("parameter '" + name + "' is neither bound nor a plane axis");
  const Term* t1 = bound.term_with(plane.p1);
  const Term* t2 = bound.term_with(plane.p2);
  if (!t1) throw ValidationError("plane parameter '" + plane.p1 + "' does not appear in the polynomial");
  if (!t2) throw ValidationError("plane parameter '" + plane.p2 + "' does not appear in the polynomial");
  FracOrder o1 = t1->order, o2 = t2->order;
  return {std::move(bound), o1, o2};
}

bool differ_by_even_integer(const FracOrder& a, const FracOrder& b) {
  const FracOrder d = a < b ? b - a : a - b;
  return d.is_integer() && d.num() % 2 == 0;
}

std::vector<FracOrder> orders_of(const QuasiPolynomial& qp) {
  std::vector<FracOrder> out;
  for (const auto& t : qp.terms()) out.push_back(t.order);
  return out;
}

struct Solve {
  bool ok = false;
  bool degenerate = false;
  ParamPoint point;
};

Solve solve_at(const QuasiPolynomial& bound, const Plane& plane, double omega) {
  const BoundaryParts parts = eval_boundary_parts(bound, omega, {});
  const double r1 = parts.real.coefficient(plane.p1), r2 = parts.real.coefficient(plane.p2);
  const double i1 = parts.imag.coefficient(plane.p1), i2 = parts.imag.coefficient(plane.p2);
  const double det = r1 * i2 - r2 * i1;
  const double scale = (std::abs(r1) + std::abs(i1)) * (std::abs(r2) + std::abs(i2));
  Solve out;
  if (!(std::abs(det) >= 1e-12 * scale) || scale == 0.0) return out;
  const double f = -parts.real.constant, g = -parts.imag.constant;
  if (f == 0.0 && g == 0.0) {
    out.degenerate = true;
    return out;
  }
  out.ok = true;
  out.point = {(f * i2 - r2 * g) / det, (r1 * g - f * i1) / det};
  return out;
}

}  // namespace

CrbBranch crb_general(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings,
                      std::span<const double> omegas) {
  PlaneSetup setup = setup_plane(qp, plane, bindings);
  if (differ_by_even_integer(setup.o1, setup.o2))
    throw ValidationError("parameters '" + plane.p1 + "' and '" + plane.p2 + "' sit at orders " + setup.o1.to_string() +
                          " and " + setup.o2.to_string() + ": the boundary system is singular for every omega");

  CrbBranch out;
  out.orders = orders_of(setup.bound);
  for (const auto& [name, value] : bindings)
    if (name != plane.p1 && name != plane.p2 && qp.term_with(name)) out.fixed[name] = value;

  std::size_t degenerate = 0;
  for (double w : omegas) {
    const Solve s = solve_at(setup.bound, plane, w);
    if (s.ok) {
      if (!out.samples.empty() && !(w > out.samples.back().omega))
        throw ValidationError("omega grid must be strictly increasing");
      out.samples.push_back({w, s.point});
    } else {
      out.gaps.push_back(w);
      if (s.degenerate) ++degenerate;
    }
  }
  if (degenerate > 0 && out.samples.empty())
    out.diagnostic = "complex root boundary degenerates to the origin: no fixed terms remain";
  return out;
}

CrbBranch crb_three_term(double b, const FracOrder& alpha1, const FracOrder& alpha2, std::span<const double> omegas) {
  if (!(alpha1.num() > 0 && alpha1 < alpha2 && alpha2 < FracOrder(2, 1)))
    throw ValidationError("three-term boundary needs 0 < alpha1 < alpha2 < 2");
  CrbBranch out;
  out.fixed["b"] = b;
  out.orders = {FracOrder{}, alpha1, alpha2};
  if (b == 0.0) {
    out.diagnostic = "b = 0: complex root boundary collapses to the point (0, 0)";
    return out;
  }
  const double s1 = unit_phase(alpha1).second;
  const double s2 = unit_phase(alpha2).second;
  const double s21 = unit_phase(alpha2 - alpha1).second;
  const double e12 = alpha1.value() - alpha2.value();
  for (double w : omegas) {
    const double a = -b * std::pow(w, e12) * s1 / s2;
    const double c = -b * std::pow(w, alpha1.value()) * s21 / s2;
    out.samples.push_back({w, {a, c}});
  }
  return out;
}

CrbBranch crb_commensurate_pair(double b, const FracOrder& alpha, std::span<const double> omegas) {
  if (!(alpha.num() > 0 && alpha < FracOrder(1, 1))) throw ValidationError("commensurate pair needs 0 < alpha < 1");
  CrbBranch out;
  out.fixed["b"] = b;
  out.orders = {FracOrder{}, alpha, alpha * 2};
  if (b == 0.0) {
    out.diagnostic = "b = 0: complex root boundary collapses to the point (0, 0)";
    return out;
  }
  const auto [c_half, s_half] = unit_phase(alpha);
  const auto [c_full, s_full] = unit_phase(alpha * 2);
  const double x = alpha.value();
  for (double w : omegas) {
    const double a = -b * std::pow(w, -x) * s_half / s_full;
    const double c = -a * std::pow(w, 2.0 * x) * c_full - b * std::pow(w, x) * c_half;
    out.samples.push_back({w, {a, c}});
  }
  return out;
}

std::optional<std::pair<ParamPoint, ParamPoint>> Line::clip(const Window& w) const {
  // Intersect with each window edge and keep the points on the boundary.
  std::vector<ParamPoint> pts;
  auto add = [&](ParamPoint p) {
    const double tol = 1e-12 * (1.0 + w.diagonal());
    if (p.p1 < w.p1_min - tol || p.p1 > w.p1_max + tol || p.p2 < w.p2_min - tol || p.p2 > w.p2_max + tol) return;
    p.p1 = std::clamp(p.p1, w.p1_min, w.p1_max);
    p.p2 = std::clamp(p.p2, w.p2_min, w.p2_max);
    for (const auto& q : pts)
      if (std::abs(q.p1 - p.p1) <= tol && std::abs(q.p2 - p.p2) <= tol) return;
    pts.push_back(p);
  };
  if (n2 != 0.0) {
    for (double x : {w.p1_min, w.p1_max}) add({x, -(offset + n1 * x) / n2});
  }
  if (n1 != 0.0) {
    for (double y : {w.p2_min, w.p2_max}) add({-(offset + n2 * y) / n1, y});
  }
  if (pts.size() < 2) return std::nullopt;
  return std::make_pair(pts[0], pts[1]);
}

namespace {

std::optional<Line> coefficient_line(const Term* term, const Plane& plane) {
  if (!term || term->coeff.is_known()) return std::nullopt;
  const auto& name = term->coeff.unknown().name;
  if (name == plane.p1) return Line{1.0, 0.0, 0.0};
  if (name == plane.p2) return Line{0.0, 1.0, 0.0};
  throw ValidationError("parameter '" + name + "' is neither bound nor a plane axis");
}

}  // namespace

std::optional<Line> real_root_boundary(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings) {
  const PlaneSetup setup = setup_plane(qp, plane, bindings);
  return coefficient_line(setup.bound.term_at(FracOrder{}), plane);
}

std::optional<Line> infinite_root_boundary(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings) {
  const PlaneSetup setup = setup_plane(qp, plane, bindings);
  const Term& top = setup.bound.terms().back();
  if (top.order.is_zero()) return std::nullopt;
  return coefficient_line(&top, plane);
}

std::vector<double> OmegaGrid::values() const {
  if (!(lo > 0.0) || !(hi > lo) || count < 2 || !std::isfinite(hi))
    throw ValidationError("omega grid needs 0 < lo < hi and at least two samples");
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[k] = std::pow(10.0, l0 + (l1 - l0) * k / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

BoundarySet compute_boundaries(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings,
                               const Window& window, const OmegaGrid& grid) {
  window.validate();
  BoundarySet out;
  out.rrb = real_root_boundary(qp, plane, bindings);
  out.irb = infinite_root_boundary(qp, plane, bindings);

  const std::vector<double> omegas = grid.values();
  const CrbBranch full = crb_general(qp, plane, bindings, omegas);
  if (!full.diagnostic.empty()) out.warnings.push_back(full.diagnostic);

  const Window keep = window.scaled(3.0);
  const double max_gap = 0.05 * window.diagonal();
  const QuasiPolynomial bound = setup_plane(qp, plane, bindings).bound;

  // Split wherever a grid sample was dropped (singular or outside `keep`).
  std::vector<std::vector<CrbSample>> pieces;
  std::size_t next = 0;
  bool open = false;
  for (double w : omegas) {
    const bool have = next < full.samples.size() && full.samples[next].omega == w;
    const CrbSample* s = have ? &full.samples[next++] : nullptr;
    if (s && keep.contains(s->point)) {
      if (!open) pieces.emplace_back();
      pieces.back().push_back(*s);
      open = true;
    } else {
      open = false;
    }
  }

  for (auto& piece : pieces) {
    for (int level = 0; level < 3; ++level) {
      std::vector<CrbSample> refined;
      refined.reserve(piece.size());
      bool changed = false;
      for (std::size_t i = 0; i < piece.size(); ++i) {
        refined.push_back(piece[i]);
        if (i + 1 == piece.size()) break;
        const auto& p = piece[i].point;
        const auto& q = piece[i + 1].point;
        if (std::hypot(q.p1 - p.p1, q.p2 - p.p2) <= max_gap) continue;
        const double mid = std::sqrt(piece[i].omega * piece[i + 1].omega);
        if (!(mid > piece[i].omega && mid < piece[i + 1].omega)) continue;
        const Solve s = solve_at(bound, plane, mid);
        if (s.ok && keep.contains(s.point)) {
          refined.push_back({mid, s.point});
          changed = true;
        }
      }
      piece = std::move(refined);
      if (!changed) break;
    }
    CrbBranch br;
    br.samples = std::move(piece);
    br.fixed = full.fixed;
    br.orders = full.orders;
    out.crb.push_back(std::move(br));
  }
  if (!full.gaps.empty() && full.diagnostic.empty())
    out.warnings.push_back(std::to_string(full.gaps.size()) + " omega samples skipped (singular boundary system)");
  return out;
}

}  // namespace fracstab
