#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracstab/boundary.hpp"
#include "fracstab/quasi_polynomial.hpp"
#include "fracstab/stability.hpp"

namespace fracstab {

/// Per-cell classification. Unknown marks cells whose check failed.
enum class CellClass : std::uint8_t { Stable, Marginal, Unstable, Unknown };

std::string_view to_string(CellClass c) noexcept;
CellClass to_cell_class(Verdict v) noexcept;

struct Resolution {
  int n1 = 256;
  int n2 = 256;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// How many pseudo-polynomial roots fall on each side of the sector edge.
struct RootSignature {
  int stable = 0;
  int marginal = 0;
  int unstable = 0;

  friend bool operator==(const RootSignature&, const RootSignature&) = default;
};

/// Connected set of cells sharing a verdict and a root signature.
struct Region {
  int id = 0;
  CellClass verdict = CellClass::Unknown;
  ParamPoint representative;
  std::size_t cell_count = 0;
  RootSignature signature;
};

/**
 * Rasterised verdicts over a parameter window plus the extracted regions.
 *
 * Cells are indexed i1 + n1 * i2 with i1 along p1. Marginal and Unknown
 * cells carry label -1 and belong to no region.
 */
struct RegionMap {
  Plane plane;
  Window window;
  Resolution resolution;
  std::vector<CellClass> cells;
  std::vector<RootSignature> signatures;
  std::vector<int> labels;
  std::vector<Region> regions;
  std::size_t marginal_cells = 0;
  std::size_t unknown_cells = 0;

  std::size_t index(int i1, int i2) const noexcept { return static_cast<std::size_t>(i1) + static_cast<std::size_t>(resolution.n1) * static_cast<std::size_t>(i2); }
  CellClass at(int i1, int i2) const noexcept { return cells[index(i1, i2)]; }
  ParamPoint center(int i1, int i2) const noexcept;
  double cell_area() const noexcept;
  /// Cell containing `p`, if it lies in the window.
  std::optional<std::pair<int, int>> locate(ParamPoint p) const noexcept;
  std::size_t count(CellClass c) const noexcept;
};

/// Evaluates matignon_check at every cell centre and labels 4-connected
/// regions in scan order. Requires at least 32x32 cells and exactly the two
/// plane parameters left free. More than 1% failed cells rethrows the first
/// failure.
RegionMap classify_window(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings,
                          const Window& window, Resolution resolution = {});

struct SweepLayer {
  double value = 0.0;
  /// Set for order sweeps.
  std::optional<FracOrder> order;
  RegionMap map;
};

/// Region maps over one swept quantity, ascending by value.
struct SweepStack {
  std::string axis;
  std::vector<SweepLayer> layers;
};

/// One classify_window per value of parameter `name`.
SweepStack sweep_parameter(const QuasiPolynomial& qp, const Plane& plane, const Bindings& bindings,
                           const std::string& name, std::span<const double> values, const Window& window,
                           Resolution resolution = {});

enum class OrderSweepMode {
  Basset,        ///< orders (0, alpha, 1)
  Commensurate,  ///< orders (0, alpha, 2 alpha)
};

/// Reassigns the orders of a three-term template per layer; alpha in (0, 1).
SweepStack sweep_order(const QuasiPolynomial& three_term, const Plane& plane, const Bindings& bindings,
                       std::span<const FracOrder> alphas, OrderSweepMode mode, const Window& window,
                       Resolution resolution = {});

/// Template with its two non-constant orders replaced per `mode`.
QuasiPolynomial with_orders(const QuasiPolynomial& three_term, const FracOrder& alpha, OrderSweepMode mode);

/// Cells that are Stable in every layer of a sweep.
struct RobustRegion {
  Plane plane;
  Window window;
  Resolution resolution;
  std::vector<std::uint8_t> mask;
  std::vector<double> swept;

  bool at(int i1, int i2) const noexcept { return mask[static_cast<std::size_t>(i1) + static_cast<std::size_t>(resolution.n1) * static_cast<std::size_t>(i2)] != 0; }
  /// False outside the window.
  bool contains(ParamPoint p) const noexcept;
  std::size_t count() const noexcept;
};

RobustRegion robust_intersection(const SweepStack& stack);

}  // namespace fracstab
