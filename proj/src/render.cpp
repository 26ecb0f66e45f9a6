#include "fracstab/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracstab/number_format.hpp"
#include "json.hpp"

namespace fracstab {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json window_json(const Window& w) {
  return {{"p1", {w.p1_min, w.p1_max}}, {"p2", {w.p2_min, w.p2_max}}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Coordinates are rounded to 1/1000 px before printing.
std::string px(double v) {
  double r = std::round(v * 1000.0) / 1000.0;
  if (r == 0.0) r = 0.0;
  return format_double(r);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kStableColor = "#2e9d43";
constexpr const char* kUnstableColor = "#d33f3f";
constexpr const char* kMarginalColor = "#000000";
constexpr const char* kUnknownColor = "#9a9a9a";
constexpr const char* kBoundaryColor = "#1b3a9e";

const char* color_of(CellClass c) {
  switch (c) {
    case CellClass::Stable: return kStableColor;
    case CellClass::Unstable: return kUnstableColor;
    case CellClass::Marginal: return kMarginalColor;
    case CellClass::Unknown: return kUnknownColor;
  }
  return kUnknownColor;
}

/// Fixed-size plot frame mapping the parameter window onto pixels.
class SvgCanvas {
 public:
  static constexpr double kSize = 600.0;
  static constexpr double kMargin = 70.0;

  SvgCanvas(const Window& w, const Plane& plane, std::string title) : w_(w), plane_(plane), title_(std::move(title)) {}

  double x(double p1) const { return kMargin + (p1 - w_.p1_min) / (w_.p1_max - w_.p1_min) * kSize; }
  double y(double p2) const { return kMargin + (w_.p2_max - p2) / (w_.p2_max - w_.p2_min) * kSize; }

  std::ostringstream& body() { return body_; }

  void polyline(const std::vector<ParamPoint>& pts, const std::string& stroke, double width) {
    if (pts.size() < 2) return;
    body_ << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
          << px(width) << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      body_ << (i ? " " : "") << px(x(pts[i].p1)) << "," << px(y(pts[i].p2));
    body_ << "\"/>\n";
  }

  void boundaries(const BoundarySet& set) {
    for (const auto* line : {set.rrb ? &*set.rrb : nullptr, set.irb ? &*set.irb : nullptr}) {
      if (!line) continue;
      if (auto seg = line->clip(w_)) polyline({seg->first, seg->second}, kBoundaryColor, 2.0);
    }
    for (const auto& br : set.crb) {
      std::vector<ParamPoint> pts;
      for (const auto& s : br.samples) pts.push_back(s.point);
      polyline(pts, kBoundaryColor, 2.0);
    }
  }

  std::string finish() const {
    const double total = kSize + 2 * kMargin;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(total) << "\" height=\"" << px(total)
       << "\" viewBox=\"0 0 " << px(total) << " " << px(total) << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    os << "<defs><clipPath id=\"plot\"><rect x=\"" << px(kMargin) << "\" y=\"" << px(kMargin) << "\" width=\""
       << px(kSize) << "\" height=\"" << px(kSize) << "\"/></clipPath></defs>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << px(total) << "\" height=\"" << px(total) << "\" fill=\"#ffffff\"/>\n";
    os << body_.str();
    os << "<rect x=\"" << px(kMargin) << "\" y=\"" << px(kMargin) << "\" width=\"" << px(kSize) << "\" height=\""
       << px(kSize) << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double v1 = w_.p1_min + (w_.p1_max - w_.p1_min) * k / 4.0;
      const double v2 = w_.p2_min + (w_.p2_max - w_.p2_min) * k / 4.0;
      os << "<line x1=\"" << px(x(v1)) << "\" y1=\"" << px(kMargin + kSize) << "\" x2=\"" << px(x(v1)) << "\" y2=\""
         << px(kMargin + kSize + 6) << "\" stroke=\"#000000\"/>\n";
      os << "<text x=\"" << px(x(v1)) << "\" y=\"" << px(kMargin + kSize + 22) << "\" text-anchor=\"middle\">"
         << tick(v1) << "</text>\n";
      os << "<line x1=\"" << px(kMargin - 6) << "\" y1=\"" << px(y(v2)) << "\" x2=\"" << px(kMargin) << "\" y2=\""
         << px(y(v2)) << "\" stroke=\"#000000\"/>\n";
      os << "<text x=\"" << px(kMargin - 10) << "\" y=\"" << px(y(v2) + 4) << "\" text-anchor=\"end\">" << tick(v2)
         << "</text>\n";
    }
    os << "<text x=\"" << px(kMargin + kSize / 2) << "\" y=\"" << px(total - 12) << "\" text-anchor=\"middle\">"
       << escape_xml(plane_.p1) << "</text>\n";
    os << "<text x=\"18\" y=\"" << px(kMargin + kSize / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << px(kMargin + kSize / 2) << ")\">" << escape_xml(plane_.p2) << "</text>\n";
    os << "<text x=\"" << px(kMargin + kSize / 2) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"15\">"
       << escape_xml(title_) << "</text>\n";
    os << "</svg>\n";
    return os.str();
  }

 private:
  static std::string tick(double v) {
    double r = std::round(v * 1e6) / 1e6;
    if (r == 0.0) r = 0.0;
    return format_double(r);
  }

  Window w_;
  Plane plane_;
  std::string title_;
  std::ostringstream body_;
};

template <typename ClassOf>
void cell_runs(SvgCanvas& canvas, const Window& w, Resolution r, ClassOf&& class_of) {
  const double cw = SvgCanvas::kSize / r.n1, ch = SvgCanvas::kSize / r.n2;
  for (int i2 = 0; i2 < r.n2; ++i2) {
    int start = 0;
    for (int i1 = 1; i1 <= r.n1; ++i1) {
      if (i1 < r.n1 && class_of(i1, i2) == class_of(start, i2)) continue;
      const char* fill = class_of(start, i2);
      if (fill) {
        const double x0 = canvas.x(w.p1_min) + start * cw;
        const double y0 = canvas.y(w.p2_min) - (i2 + 1) * ch;
        canvas.body() << "<rect x=\"" << px(x0) << "\" y=\"" << px(y0) << "\" width=\"" << px((i1 - start) * cw)
                      << "\" height=\"" << px(ch) << "\" fill=\"" << fill << "\" shape-rendering=\"crispEdges\"/>\n";
      }
      start = i1;
    }
  }
}

}  // namespace

std::string verdict_json(const StabilityVerdict& v) {
  ordered_json roots = ordered_json::array(), mult = ordered_json::array(), args = ordered_json::array();
  for (const auto& w : v.witnesses) {
    roots.push_back({w.root.real(), w.root.imag()});
    mult.push_back(w.multiplicity);
    args.push_back(w.argument);
  }
  ordered_json j;
  j["class"] = to_string(v.verdict);
  j["margin"] = number_or_null(v.margin);
  j["base_order"] = v.base_order.to_string();
  j["sector_half_angle"] = v.base_order.value() * std::numbers::pi / 2.0;
  j["roots"] = roots;
  j["multiplicity"] = mult;
  j["arguments"] = args;
  j["root_counts"] = {{"stable", v.stable_roots}, {"marginal", v.marginal_roots}, {"unstable", v.unstable_roots}};
  j["residual"] = v.residual;
  return dump(j);
}

std::string boundary_csv(const BoundarySet& set, const Window& window) {
  std::ostringstream os;
  os << "omega,p1,p2,branch_id\n";
  auto line = [&](const std::optional<Line>& l, const char* id) {
    if (!l) return;
    if (auto seg = l->clip(window)) {
      os << "," << format_double(seg->first.p1) << "," << format_double(seg->first.p2) << "," << id << "\n";
      os << "," << format_double(seg->second.p1) << "," << format_double(seg->second.p2) << "," << id << "\n";
    }
  };
  line(set.rrb, "rrb");
  line(set.irb, "irb");
  for (std::size_t b = 0; b < set.crb.size(); ++b)
    for (const auto& s : set.crb[b].samples)
      os << format_double(s.omega) << "," << format_double(s.point.p1) << "," << format_double(s.point.p2) << ",crb" << b
         << "\n";
  return os.str();
}

std::string boundary_svg(const BoundarySet& set, const Plane& plane, const Window& window) {
  SvgCanvas canvas(window, plane, "Stability boundaries");
  canvas.boundaries(set);
  return canvas.finish();
}

std::string region_csv(const RegionMap& map) {
  std::ostringstream os;
  os << "p1,p2,verdict\n";
  for (int i2 = 0; i2 < map.resolution.n2; ++i2)
    for (int i1 = 0; i1 < map.resolution.n1; ++i1) {
      const ParamPoint c = map.center(i1, i2);
      os << format_double(c.p1) << "," << format_double(c.p2) << "," << to_string(map.at(i1, i2)) << "\n";
    }
  return os.str();
}

std::string region_json(const RegionMap& map) {
  ordered_json regions = ordered_json::array();
  for (const auto& r : map.regions) {
    regions.push_back({{"id", r.id},
                       {"verdict", to_string(r.verdict)},
                       {"representative", {r.representative.p1, r.representative.p2}},
                       {"cell_count", r.cell_count},
                       {"area", static_cast<double>(r.cell_count) * map.cell_area()},
                       {"root_signature",
                        {{"stable", r.signature.stable}, {"marginal", r.signature.marginal}, {"unstable", r.signature.unstable}}}});
  }
  const auto stable_regions = std::count_if(map.regions.begin(), map.regions.end(),
                                            [](const Region& r) { return r.verdict == CellClass::Stable; });
  ordered_json j;
  j["plane"] = {map.plane.p1, map.plane.p2};
  j["window"] = window_json(map.window);
  j["resolution"] = {map.resolution.n1, map.resolution.n2};
  j["cell_counts"] = {{"stable", map.count(CellClass::Stable)},
                      {"unstable", map.count(CellClass::Unstable)},
                      {"marginal", map.marginal_cells},
                      {"unknown", map.unknown_cells}};
  j["region_count"] = map.regions.size();
  j["stable_region_count"] = stable_regions;
  j["regions"] = regions;
  return dump(j);
}

std::string region_svg(const RegionMap& map, const BoundarySet* boundaries) {
  SvgCanvas canvas(map.window, map.plane, "Stability regions");
  cell_runs(canvas, map.window, map.resolution, [&](int i1, int i2) { return color_of(map.at(i1, i2)); });
  if (boundaries) canvas.boundaries(*boundaries);
  return canvas.finish();
}

std::string sweep_index_json(const SweepStack& stack, const std::string& layer_prefix) {
  ordered_json layers = ordered_json::array();
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const auto& l = stack.layers[i];
    std::string stem = layer_prefix;
    const std::string num = std::to_string(i);
    stem += std::string(num.size() < 3 ? 3 - num.size() : 0, '0') + num;
    ordered_json e;
    e["index"] = i;
    e["value"] = l.value;
    if (l.order) e["order"] = l.order->to_string();
    e["file_stem"] = stem;
    e["stable_cells"] = l.map.count(CellClass::Stable);
    e["region_count"] = l.map.regions.size();
    layers.push_back(e);
  }
  ordered_json j;
  j["axis"] = stack.axis;
  if (!stack.layers.empty()) {
    const auto& m = stack.layers.front().map;
    j["plane"] = {m.plane.p1, m.plane.p2};
    j["window"] = window_json(m.window);
    j["resolution"] = {m.resolution.n1, m.resolution.n2};
  }
  j["layers"] = layers;
  return dump(j);
}

std::string sweep_svg(const SweepStack& stack) {
  if (stack.layers.empty()) return {};
  const RegionMap& first = stack.layers.front().map;
  SvgCanvas canvas(first.window, first.plane, "Stable set outlines, " + stack.axis + " sweep");
  const double lo = stack.layers.front().value, hi = stack.layers.back().value;
  const double cw = SvgCanvas::kSize / first.resolution.n1, ch = SvgCanvas::kSize / first.resolution.n2;
  for (const auto& layer : stack.layers) {
    const RegionMap& m = layer.map;
    const double t = hi > lo ? (layer.value - lo) / (hi - lo) : 0.0;
    const int lightness = static_cast<int>(std::lround(15.0 + 70.0 * t));
    auto stable = [&](int i1, int i2) {
      return i1 >= 0 && i2 >= 0 && i1 < m.resolution.n1 && i2 < m.resolution.n2 && m.at(i1, i2) == CellClass::Stable;
    };
    std::ostringstream d;
    for (int i2 = 0; i2 < m.resolution.n2; ++i2)
      for (int i1 = 0; i1 < m.resolution.n1; ++i1) {
        if (!stable(i1, i2)) continue;
        const double x0 = canvas.x(m.window.p1_min) + i1 * cw, x1 = x0 + cw;
        const double y1 = canvas.y(m.window.p2_min) - i2 * ch, y0 = y1 - ch;
        if (!stable(i1 - 1, i2)) d << "M" << px(x0) << " " << px(y0) << "V" << px(y1);
        if (!stable(i1 + 1, i2)) d << "M" << px(x1) << " " << px(y0) << "V" << px(y1);
        if (!stable(i1, i2 - 1)) d << "M" << px(x0) << " " << px(y1) << "H" << px(x1);
        if (!stable(i1, i2 + 1)) d << "M" << px(x0) << " " << px(y0) << "H" << px(x1);
      }
    const std::string path = d.str();
    if (path.empty()) continue;
    canvas.body() << "<path fill=\"none\" stroke=\"hsl(210,70%," << lightness << "%)\" stroke-width=\"1\" data-value=\""
                  << format_double(layer.value) << "\" d=\"" << path << "\"/>\n";
  }
  return canvas.finish();
}

std::string robust_csv(const RobustRegion& robust) {
  std::ostringstream os;
  os << "p1,p2,robust\n";
  const double d1 = (robust.window.p1_max - robust.window.p1_min) / robust.resolution.n1;
  const double d2 = (robust.window.p2_max - robust.window.p2_min) / robust.resolution.n2;
  for (int i2 = 0; i2 < robust.resolution.n2; ++i2)
    for (int i1 = 0; i1 < robust.resolution.n1; ++i1)
      os << format_double(robust.window.p1_min + (i1 + 0.5) * d1) << ","
         << format_double(robust.window.p2_min + (i2 + 0.5) * d2) << "," << (robust.at(i1, i2) ? 1 : 0) << "\n";
  return os.str();
}

std::string robust_json(const RobustRegion& robust) {
  ordered_json j;
  j["plane"] = {robust.plane.p1, robust.plane.p2};
  j["window"] = window_json(robust.window);
  j["resolution"] = {robust.resolution.n1, robust.resolution.n2};
  j["swept"] = robust.swept;
  j["robust_cells"] = robust.count();
  return dump(j);
}

std::string robust_svg(const RobustRegion& robust) {
  SvgCanvas canvas(robust.window, robust.plane, "Robust stability region");
  cell_runs(canvas, robust.window, robust.resolution,
            [&](int i1, int i2) -> const char* { return robust.at(i1, i2) ? kStableColor : nullptr; });
  return canvas.finish();
}

std::string trajectory_csv(const SimResult& result) {
  std::ostringstream os;
  os << "t,y\n";
  for (std::size_t i = 0; i < result.times.size(); ++i)
    os << format_double(result.times[i]) << "," << format_double(result.outputs[i]) << "\n";
  return os.str();
}

std::string simulation_json(const SimResult& result, const SimConfig& cfg) {
  ordered_json input;
  if (const auto* s = std::get_if<StepInput>(&cfg.input))
    input = {{"kind", "step"}, {"amplitude", s->amplitude}};
  else
    input = {{"kind", "impulse"}, {"area", std::get<ImpulseInput>(cfg.input).area}};
  ordered_json j;
  j["verdict"] = to_string(result.verdict);
  j["peak"] = number_or_null(result.peak);
  j["diverged_at"] = result.diverged_at ? ordered_json(*result.diverged_at) : ordered_json(nullptr);
  j["step"] = cfg.step;
  j["horizon"] = cfg.horizon;
  j["bound_threshold"] = cfg.bound_threshold;
  j["input"] = input;
  j["samples"] = result.times.size();
  return dump(j);
}

}  // namespace fracstab
