#include "fracstab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>

#include "fracstab/errors.hpp"
#include "fracstab/parallel.hpp"

namespace fracstab {

std::string_view to_string(CellClass c) noexcept {
  switch (c) {
    case CellClass::Stable: return "stable";
    case CellClass::Marginal: return "marginal";
    case CellClass::Unstable: return "unstable";
    case CellClass::Unknown: return "unknown";
  }
  return "unknown";
}

CellClass to_cell_class(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable: return CellClass::Stable;
    case Verdict::Marginal: return CellClass::Marginal;
    case Verdict::Unstable: return CellClass::Unstable;
  }
  return CellClass::Unknown;
}

namespace {

std::optional<std::pair<int, int>> locate_in(const Window& w, Resolution r, ParamPoint p) {
  if (!w.contains(p)) return std::nullopt;
  const int i1 = std::min(r.n1 - 1, static_cast<int>((p.p1 - w.p1_min) / (w.p1_max - w.p1_min) * r.n1));
  const int i2 = std::min(r.n2 - 1, static_cast<int>((p.p2 - w.p2_min) / (w.p2_max - w.p2_min) * r.n2));
  return std::make_pair(i1, i2);
}

void label_regions(RegionMap& map) {
  const int n1 = map.resolution.n1, n2 = map.resolution.n2;
  map.labels.assign(map.cells.size(), -1);
  std::deque<std::pair<int, int>> queue;
  std::vector<std::pair<int, int>> members;

  for (int i2 = 0; i2 < n2; ++i2) {
    for (int i1 = 0; i1 < n1; ++i1) {
      const std::size_t idx = map.index(i1, i2);
      const CellClass cls = map.cells[idx];
      if (map.labels[idx] != -1 || (cls != CellClass::Stable && cls != CellClass::Unstable)) continue;

      const int id = static_cast<int>(map.regions.size());
      const RootSignature sig = map.signatures[idx];
      members.clear();
      map.labels[idx] = id;
      queue.emplace_back(i1, i2);
      while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        members.emplace_back(x, y);
        const std::pair<int, int> nbrs[4] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
        for (auto [nx, ny] : nbrs) {
          if (nx < 0 || ny < 0 || nx >= n1 || ny >= n2) continue;
          const std::size_t n = map.index(nx, ny);
          if (map.labels[n] != -1 || map.cells[n] != cls || !(map.signatures[n] == sig)) continue;
          map.labels[n] = id;
          queue.emplace_back(nx, ny);
        }
      }

      double m1 = 0.0, m2 = 0.0;
      for (auto [x, y] : members) {
        const ParamPoint c = map.center(x, y);
        m1 += c.p1;
        m2 += c.p2;
      }
      m1 /= static_cast<double>(members.size());
      m2 /= static_cast<double>(members.size());
      std::sort(members.begin(), members.end(),
                [](auto a, auto b) { return a.second != b.second ? a.second < b.second : a.first < b.first; });
      ParamPoint best = map.center(members.front().first, members.front().second);
      double best_d = std::numeric_limits<double>::infinity();
      for (auto [x, y] : members) {
        const ParamPoint c = map.center(x, y);
        const double d = std::hypot(c.p1 - m1, c.p2 - m2);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      map.regions.push_back(Region{id, cls, best, members.size(), sig});
    }
  }
}

Bindings without_plane(const Bindings& bindings, const Plane& plane) {
  Bindings b = bindings;
  b.erase(plane.p1);
  b.erase(plane.p2);
  return b;
}

}  // namespace

ParamPoint RegionMap::center(int i1, int i2) const noexcept {
  const double d1 = (window.p1_max - window.p1_min) / resolution.n1;
  const double d2 = (window.p2_max - window.p2_min) / resolution.n2;
  return {window.p1_min + (i1 + 0.5) * d1, window.p2_min + (i2 + 0.5) * d2};
}

double RegionMap::cell_area() const noexcept {
  return (window.p1_max - window.p1_min) / resolution.n1 * (window.p2_max - window.p2_min) / resolution.n2;
}

std::optional<std::pair<int, int>> RegionMap::locate(ParamPoint p) const noexcept {
  return locate_in(window, resolution, p);
}

std::size_t RegionMap::count(CellClass c) const noexcept {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), c));
}

RegionMap classify_window(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings,
                          const Window& window, Resolution resolution) {
  window.validate();
  if (resolution.n1 < 32 || resolution.n2 < 32) throw ValidationError("resolution must be at least 32x32");
  if (plane.p1 == plane.p2) throw ValidationError("plane parameters must differ");

  const QuasiPolynomial bound = bind_partial(qp, without_plane(bindings, plane));
  auto free = bound.unknowns();
  std::sort(free.begin(), free.end());
  std::vector<std::string> expected{plane.p1, plane.p2};
  std::sort(expected.begin(), expected.end());
  if (free != expected) {
    for (const auto& name : expected)
      if (std::find(free.begin(), free.end(), name) == free.end())
        throw ValidationError("plane parameter '" + name + "' does not appear in the polynomial");
    for (const auto& name : free)
      if (std::find(expected.begin(), expected.end(), name) == expected.end())
        throw ValidationError("parameter '" + name + "' is neither bound nor a plane axis");
  }

  RegionMap map;
  map.plane = plane;
  map.window = window;
  map.resolution = resolution;
  const std::size_t total = static_cast<std::size_t>(resolution.n1) * static_cast<std::size_t>(resolution.n2);
  map.cells.assign(total, CellClass::Unknown);
  map.signatures.assign(total, RootSignature{});
  std::vector<std::exception_ptr> failures(total);

  parallel_for(total, [&](std::size_t idx) {
    const int i1 = static_cast<int>(idx % static_cast<std::size_t>(resolution.n1));
    const int i2 = static_cast<int>(idx / static_cast<std::size_t>(resolution.n1));
    const ParamPoint c = map.center(i1, i2);
    try {
      const QuasiPolynomial cell = substitute(bound, {{plane.p1, c.p1}, {plane.p2, c.p2}});
      const StabilityVerdict v = matignon_check(cell);
      map.cells[idx] = to_cell_class(v.verdict);
      map.signatures[idx] = {v.stable_roots, v.marginal_roots, v.unstable_roots};
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  });

  std::exception_ptr first;
  for (const auto& f : failures) {
    if (!f) continue;
    ++map.unknown_cells;
    if (!first) first = f;
  }
  if (map.unknown_cells * 100 > total) std::rethrow_exception(first);
  map.marginal_cells = map.count(CellClass::Marginal);
  label_regions(map);
  return map;
}

SweepStack sweep_parameter(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings,
                           const std::string& name, std::span<const double> values, const Window& window,
                           Resolution resolution) {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  if (name == plane.p1 || name == plane.p2) throw ValidationError("swept parameter '" + name + "' is a plane axis");
  if (!qp.term_with(name)) throw ValidationError("swept parameter '" + name + "' does not appear in the polynomial");

  std::vector<double> sorted(values.begin(), values.end());
  std::stable_sort(sorted.begin(), sorted.end());
  SweepStack stack;
  stack.axis = name;
  for (double v : sorted) {
    Bindings b = bindings;
    b[name] = v;
    stack.layers.push_back({v, std::nullopt, classify_window(qp, plane, b, window, resolution)});
  }
  return stack;
}

QuasiPolynomial with_orders(const QuasiPolynomial& three_term, const FracOrder& alpha, OrderSweepMode mode) {
  const auto terms = three_term.terms();
  if (terms.size() != 3 || !terms[0].order.is_zero())
    throw ValidationError("order sweeps need a three-term template with a constant term");
  if (!(alpha.num() > 0 && alpha < FracOrder(1, 1))) throw ValidationError("swept order " + alpha.to_string() + " is outside (0, 1)");
  const FracOrder top = mode == OrderSweepMode::Basset ? FracOrder(1, 1) : alpha * 2;
  return QuasiPolynomial({terms[0], Term{terms[1].coeff, alpha}, Term{terms[2].coeff, top}});
}

SweepStack sweep_order(const QuasiPolynomial& three_term, const Plane& plane, const Bindings& bindings,
                       std::span<const FracOrder> alphas, OrderSweepMode mode, const Window& window,
                       Resolution resolution) {
  if (alphas.empty()) throw ValidationError("sweep needs at least one value");
  std::vector<FracOrder> sorted(alphas.begin(), alphas.end());
  std::stable_sort(sorted.begin(), sorted.end());
  SweepStack stack;
  stack.axis = "alpha";
  for (const FracOrder& a : sorted) {
    const QuasiPolynomial layer = with_orders(three_term, a, mode);
    stack.layers.push_back({a.value(), a, classify_window(layer, plane, bindings, window, resolution)});
  }
  return stack;
}

bool RobustRegion::contains(ParamPoint p) const noexcept {
  auto cell = locate_in(window, resolution, p);
  return cell && at(cell->first, cell->second);
}

std::size_t RobustRegion::count() const noexcept {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

RobustRegion robust_intersection(const SweepStack& stack) {
  if (stack.layers.empty()) throw ValidationError("robust intersection of an empty sweep");
  const RegionMap& first = stack.layers.front().map;
  RobustRegion out{first.plane, first.window, first.resolution, std::vector<std::uint8_t>(first.cells.size(), 1), {}};
  for (const auto& layer : stack.layers) {
    const RegionMap& m = layer.map;
    if (!(m.resolution == first.resolution) || m.window.p1_min != first.window.p1_min ||
        m.window.p1_max != first.window.p1_max || m.window.p2_min != first.window.p2_min ||
        m.window.p2_max != first.window.p2_max)
      throw ValidationError("sweep layers do not share window and resolution");
    for (std::size_t i = 0; i < m.cells.size(); ++i)
      if (m.cells[i] != CellClass::Stable) out.mask[i] = 0;
    out.swept.push_back(layer.value);
  }
  return out;
}

}  // namespace fracstab
