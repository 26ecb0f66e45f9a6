// fracstab: stability checks, D-decomposition boundaries, region maps,
// parameter sweeps and time-domain simulation for fractional-order systems.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracstab/boundary.hpp"
#include "fracstab/errors.hpp"
#include "fracstab/number_format.hpp"
#include "fracstab/parallel.hpp"
#include "fracstab/regions.hpp"
#include "fracstab/render.hpp"
#include "fracstab/simulate.hpp"
#include "fracstab/stability.hpp"
#include "fracstab/system_io.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using namespace fracstab;
using nlohmann::ordered_json;

namespace {

const auto kProgramStart = std::chrono::steady_clock::now();

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitSoftware = 70;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double number(const std::string& text, const std::string& what) {
  auto v = parse_double(text);
  if (!v || !std::isfinite(*v)) throw UsageError("invalid number '" + text + "' in " + what);
  return *v;
}

Bindings parse_bindings(const std::vector<std::string>& items) {
  Bindings out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("binding '" + item + "' must look like name=value");
    out[item.substr(0, eq)] = number(item.substr(eq + 1), "binding '" + item + "'");
  }
  return out;
}

Plane parse_plane(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty() || parts[0] == parts[1])
    throw UsageError("--plane must name two distinct parameters, e.g. a,c");
  return {parts[0], parts[1]};
}

Window parse_window(const std::string& text) {
  const auto axes = split(text, ',');
  if (axes.size() != 2) throw UsageError("--window must look like x0:x1,y0:y1");
  const auto x = split(axes[0], ':'), y = split(axes[1], ':');
  if (x.size() != 2 || y.size() != 2) throw UsageError("--window must look like x0:x1,y0:y1");
  Window w{number(x[0], "--window"), number(x[1], "--window"), number(y[0], "--window"), number(y[1], "--window")};
  w.validate();
  return w;
}

Resolution parse_resolution(const std::string& text) {
  auto parts = split(text, 'x');
  if (parts.size() == 1) parts.push_back(parts[0]);
  if (parts.size() != 2) throw UsageError("--res must look like 256x256");
  try {
    std::size_t used = 0;
    Resolution r{std::stoi(parts[0], &used), 0};
    if (used != parts[0].size()) throw std::invalid_argument("trailing");
    r.n2 = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw UsageError("--res must look like 256x256");
  }
}

OmegaGrid parse_omega(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("--omega must look like lo:hi:count");
  OmegaGrid g{number(parts[0], "--omega"), number(parts[1], "--omega"), 0};
  const double count = number(parts[2], "--omega");
  if (count != std::floor(count) || count < 2 || count > 1e7) throw UsageError("--omega count must be an integer >= 2");
  g.count = static_cast<int>(count);
  return g;
}

std::set<std::string> parse_formats(const std::string& text, const std::set<std::string>& allowed) {
  std::set<std::string> out;
  for (const auto& f : split(text, ',')) {
    if (!allowed.count(f)) throw UsageError("unsupported format '" + f + "'");
    out.insert(f);
  }
  return out;
}

struct SweepSpec {
  std::string name;
  std::vector<double> values;
  std::vector<FracOrder> orders;
};

// name:start:stop:step, inclusive of stop. "alpha" sweeps are exact rationals.
SweepSpec parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 || parts[0].empty()) throw UsageError("--sweep must look like name:start:stop:step");
  SweepSpec spec{parts[0], {}, {}};
  if (spec.name == "alpha") {
    try {
      const FracOrder start = FracOrder::parse(parts[1]), stop = FracOrder::parse(parts[2]), step = FracOrder::parse(parts[3]);
      if (step.is_zero()) throw UsageError("--sweep step must be positive");
      for (FracOrder a = start; a <= stop; a = a + step) {
        spec.orders.push_back(a);
        spec.values.push_back(a.value());
        if (spec.orders.size() > 100000) throw UsageError("--sweep produces too many values");
      }
    } catch (const ValidationError& e) {
      throw UsageError(std::string("--sweep: ") + e.what());
    }
  } else {
    const double start = number(parts[1], "--sweep"), stop = number(parts[2], "--sweep"), step = number(parts[3], "--sweep");
    if (!(step > 0.0)) throw UsageError("--sweep step must be positive");
    const double span = (stop - start) / step;
    if (span < 0 || span > 1e5) throw UsageError("--sweep range is empty or too long");
    const auto n = static_cast<long>(std::floor(span + 1e-9));
    for (long k = 0; k <= n; ++k) spec.values.push_back(start + static_cast<double>(k) * step);
  }
  if (spec.values.empty()) throw UsageError("--sweep produces no values");
  return spec;
}

ordered_json bindings_json(const Bindings& b) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : b) j[k] = v;
  return j;
}

ordered_json window_json(const Window& w) { return {{"p1", {w.p1_min, w.p1_max}}, {"p2", {w.p2_min, w.p2_max}}}; }

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& v : s) out += (out.empty() ? "" : ",") + v;
  return out;
}

struct Loaded {
  FracSystem system;
  std::string path;
  std::string digest;
};

Loaded load(const std::string& path) {
  const std::string text = read_text_file(path);
  return {parse_system(text), path, cli::sha256_hex(text)};
}

fs::path prepare_out(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + out + "': " + ec.message());
  return dir;
}

void finish_manifest(const fs::path& dir, cli::RunManifest& manifest) {
  manifest.outputs.push_back("manifest.json");
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.to_json();
}

cli::RunManifest start_manifest(const std::string& command, const Loaded& in) {
  cli::RunManifest m;
  m.command = command;
  m.input_path = in.path;
  m.input_digest = in.digest;
  m.started = kProgramStart;
  return m;
}

struct CommonOptions {
  std::string file;
  std::vector<std::string> bindings;
  std::string out = ".";
};

int run_check(const CommonOptions& opt) {
  const Loaded in = load(opt.file);
  const QuasiPolynomial qp = substitute(in.system.denominator, parse_bindings(opt.bindings));
  const StabilityVerdict v = matignon_check(qp);
  std::cout << verdict_json(v);
  switch (v.verdict) {
    case Verdict::Stable: return 0;
    case Verdict::Unstable: return 1;
    case Verdict::Marginal: return 2;
  }
  return kExitSoftware;
}

struct PlaneOptions {
  std::string plane;
  std::string window = "-10:10,-10:10";
  std::string omega = "0.0001:10000:2000";
  std::string res = "256x256";
  std::string formats;
};

int run_boundaries(const CommonOptions& opt, const PlaneOptions& po) {
  const Loaded in = load(opt.file);
  const Plane plane = parse_plane(po.plane);
  const Bindings bindings = parse_bindings(opt.bindings);
  const Window window = parse_window(po.window);
  const OmegaGrid grid = parse_omega(po.omega);
  const auto formats = parse_formats(po.formats.empty() ? "csv,svg" : po.formats, {"csv", "svg"});

  const BoundarySet set = compute_boundaries(in.system.denominator, plane, bindings, window, grid);
  for (const auto& w : set.warnings) std::cerr << "warning: " << w << "\n";

  const fs::path dir = prepare_out(opt.out);
  cli::RunManifest m = start_manifest("boundaries", in);
  m.config = {{"plane", {plane.p1, plane.p2}}, {"fix", bindings_json(bindings)}, {"window", window_json(window)},
              {"omega", {{"lo", grid.lo}, {"hi", grid.hi}, {"count", grid.count}}}, {"format", join(formats)}};
  if (formats.count("csv")) cli::write_output(dir, "boundaries.csv", boundary_csv(set, window), m);
  if (formats.count("svg")) cli::write_output(dir, "boundaries.svg", boundary_svg(set, plane, window), m);
  finish_manifest(dir, m);
  return 0;
}

// Boundaries for the region overlay; an overlay failure only costs the picture.
std::optional<BoundarySet> overlay(const QuasiPolynomial& qp, const Plane& plane, const Bindings& b, const Window& w,
                                   const OmegaGrid& grid) {
  try {
    return compute_boundaries(qp, plane, b, w, grid);
  } catch (const Error& e) {
    std::cerr << "warning: no boundary overlay: " << e.what() << "\n";
    return std::nullopt;
  }
}

void write_region_files(const fs::path& dir, const std::string& stem, const RegionMap& map, const BoundarySet* set,
                        const std::set<std::string>& formats, cli::RunManifest& m) {
  if (formats.count("csv")) cli::write_output(dir, stem + ".csv", region_csv(map), m);
  if (formats.count("json")) cli::write_output(dir, stem + ".json", region_json(map), m);
  if (formats.count("svg")) cli::write_output(dir, stem + ".svg", region_svg(map, set), m);
}

int run_region(const CommonOptions& opt, const PlaneOptions& po) {
  const Loaded in = load(opt.file);
  const Plane plane = parse_plane(po.plane);
  const Bindings bindings = parse_bindings(opt.bindings);
  const Window window = parse_window(po.window);
  const Resolution res = parse_resolution(po.res);
  const OmegaGrid grid = parse_omega(po.omega);
  const auto formats = parse_formats(po.formats.empty() ? "csv,json,svg" : po.formats, {"csv", "json", "svg"});

  const RegionMap map = classify_window(in.system.denominator, plane, bindings, window, res);
  const auto set = formats.count("svg") ? overlay(in.system.denominator, plane, bindings, window, grid) : std::nullopt;

  const fs::path dir = prepare_out(opt.out);
  cli::RunManifest m = start_manifest("region", in);
  m.config = {{"plane", {plane.p1, plane.p2}}, {"fix", bindings_json(bindings)}, {"window", window_json(window)},
              {"res", {res.n1, res.n2}}, {"omega", {{"lo", grid.lo}, {"hi", grid.hi}, {"count", grid.count}}},
              {"format", join(formats)}};
  write_region_files(dir, "region", map, set ? &*set : nullptr, formats, m);
  finish_manifest(dir, m);

  std::size_t stable = 0;
  for (const auto& r : map.regions) stable += r.verdict == CellClass::Stable;
  std::cout << map.regions.size() << " regions (" << stable << " stable), " << map.marginal_cells << " marginal cells, "
            << map.unknown_cells << " failed cells\n";
  return 0;
}

int run_sweep(const CommonOptions& opt, const PlaneOptions& po, const std::string& sweep_text, std::string mode_text,
              bool robust) {
  const Loaded in = load(opt.file);
  const Plane plane = parse_plane(po.plane);
  const Bindings bindings = parse_bindings(opt.bindings);
  const Window window = parse_window(po.window);
  const Resolution res = parse_resolution(po.res);
  const OmegaGrid grid = parse_omega(po.omega);
  const auto formats = parse_formats(po.formats.empty() ? "csv,json,svg" : po.formats, {"csv", "json", "svg"});
  const SweepSpec spec = parse_sweep(sweep_text);
  const QuasiPolynomial& qp = in.system.denominator;

  SweepStack stack;
  if (spec.name == "alpha") {
    if (mode_text == "auto") {
      const auto t = qp.terms();
      if (t.size() == 3 && t[2].order == FracOrder(1, 1))
        mode_text = "basset";
      else if (t.size() == 3 && t[2].order == t[1].order * 2)
        mode_text = "commensurate";
      else
        throw UsageError("cannot infer --mode from the system orders; pass --mode basset|commensurate");
    }
    if (mode_text != "basset" && mode_text != "commensurate") throw UsageError("--mode must be basset or commensurate");
    const OrderSweepMode mode = mode_text == "basset" ? OrderSweepMode::Basset : OrderSweepMode::Commensurate;
    stack = sweep_order(qp, plane, bindings, spec.orders, mode, window, res);
  } else {
    mode_text = "parameter";
    stack = sweep_parameter(qp, plane, bindings, spec.name, spec.values, window, res);
  }

  const fs::path dir = prepare_out(opt.out);
  cli::RunManifest m = start_manifest("sweep", in);
  m.config = {{"plane", {plane.p1, plane.p2}}, {"fix", bindings_json(bindings)}, {"window", window_json(window)},
              {"res", {res.n1, res.n2}}, {"omega", {{"lo", grid.lo}, {"hi", grid.hi}, {"count", grid.count}}},
              {"sweep", sweep_text}, {"mode", mode_text}, {"robust", robust}, {"format", join(formats)}};

  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const auto& layer = stack.layers[i];
    std::string num = std::to_string(i);
    num.insert(0, num.size() < 3 ? 3 - num.size() : 0, '0');
    std::optional<BoundarySet> set;
    if (formats.count("svg")) {
      Bindings b = bindings;
      QuasiPolynomial layer_qp = qp;
      if (layer.order)
        layer_qp = with_orders(qp, *layer.order, mode_text == "basset" ? OrderSweepMode::Basset : OrderSweepMode::Commensurate);
      else
        b[stack.axis] = layer.value;
      set = overlay(layer_qp, plane, b, window, grid);
    }
    write_region_files(dir, "layer_" + num, layer.map, set ? &*set : nullptr, formats, m);
  }
  cli::write_output(dir, "sweep_index.json", sweep_index_json(stack, "layer_"), m);
  if (formats.count("svg")) cli::write_output(dir, "sweep_stack.svg", sweep_svg(stack), m);

  if (robust) {
    const RobustRegion rr = robust_intersection(stack);
    if (formats.count("csv")) cli::write_output(dir, "robust.csv", robust_csv(rr), m);
    cli::write_output(dir, "robust.json", robust_json(rr), m);
    if (formats.count("svg")) cli::write_output(dir, "robust.svg", robust_svg(rr), m);
    std::cout << stack.layers.size() << " layers, " << rr.count() << " robustly stable cells\n";
  } else {
    std::cout << stack.layers.size() << " layers\n";
  }
  finish_manifest(dir, m);
  return 0;
}

struct SimOptions {
  double step = 0.01;
  double horizon = 50.0;
  std::string input = "step";
  double amplitude = 1.0;
  double threshold = 1e6;
  std::string formats;
};

int run_simulate(const CommonOptions& opt, const SimOptions& so) {
  const Loaded in = load(opt.file);
  const Bindings bindings = parse_bindings(opt.bindings);
  const QuasiPolynomial qp = substitute(in.system.denominator, bindings);
  if (!in.system.numerator.degree().is_zero() || !in.system.numerator.fully_known())
    throw ValidationError("simulate supports constant numerators only");
  const double forcing = in.system.gain * in.system.numerator.terms()[0].coeff.value();

  SimConfig cfg;
  cfg.step = so.step;
  cfg.horizon = so.horizon;
  cfg.bound_threshold = so.threshold;
  if (so.input == "step")
    cfg.input = StepInput{so.amplitude};
  else if (so.input == "impulse")
    cfg.input = ImpulseInput{so.amplitude};
  else
    throw UsageError("--input must be step or impulse");
  const auto formats = parse_formats(so.formats.empty() ? "csv,json" : so.formats, {"csv", "json"});

  const SimResult r = gl_simulate(qp, forcing, cfg);
  const fs::path dir = prepare_out(opt.out);
  cli::RunManifest m = start_manifest("simulate", in);
  m.config = {{"fix", bindings_json(bindings)}, {"step", so.step}, {"horizon", so.horizon}, {"input", so.input},
              {"amplitude", so.amplitude}, {"threshold", so.threshold}, {"format", join(formats)}};
  if (formats.count("csv")) cli::write_output(dir, "trajectory.csv", trajectory_csv(r), m);
  if (formats.count("json")) cli::write_output(dir, "simulation.json", simulation_json(r, cfg), m);
  finish_manifest(dir, m);
  std::cout << simulation_json(r, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability analysis of fractional-order linear systems with unknown parameters"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::kToolVersion);

  CommonOptions common;
  PlaneOptions plane;
  SimOptions sim;
  std::string sweep_text, mode = "auto";
  bool robust = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", common.file, "System definition file")->required();
    sub->add_option("-p,--fix", common.bindings, "Bind a parameter: name=value (repeatable)");
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", common.out, "Output directory")->capture_default_str(); };
  auto add_plane = [&](CLI::App* sub, bool with_res) {
    sub->add_option("--plane", plane.plane, "Plane parameters p1,p2")->required();
    sub->add_option("--window", plane.window, "Window x0:x1,y0:y1")->capture_default_str();
    sub->add_option("--omega", plane.omega, "Frequency grid lo:hi:count")->capture_default_str();
    if (with_res) sub->add_option("--res", plane.res, "Grid resolution n1xn2")->capture_default_str();
    sub->add_option("--format", plane.formats, "Comma-separated output formats");
  };

  auto* check = app.add_subcommand("check", "Matignon stability verdict for fully bound parameters");
  add_common(check);

  auto* boundaries = app.add_subcommand("boundaries", "Real, infinite and complex root boundaries");
  add_common(boundaries);
  add_plane(boundaries, false);
  add_out(boundaries);

  auto* region = app.add_subcommand("region", "Classify a parameter window into stability regions");
  add_common(region);
  add_plane(region, true);
  add_out(region);

  auto* sweep = app.add_subcommand("sweep", "Region maps over a swept parameter or order");
  add_common(sweep);
  add_plane(sweep, true);
  add_out(sweep);
  sweep->add_option("--sweep", sweep_text, "name:start:stop:step (name 'alpha' sweeps the order)")->required();
  sweep->add_option("--mode", mode, "Order sweep layout: auto, basset or commensurate")->capture_default_str();
  sweep->add_flag("--robust", robust, "Also emit the cell-wise intersection of stable sets");

  auto* simulate = app.add_subcommand("simulate", "Grünwald-Letnikov time response");
  add_common(simulate);
  add_out(simulate);
  simulate->add_option("--step", sim.step, "Time step")->capture_default_str();
  simulate->add_option("--horizon", sim.horizon, "Final time")->capture_default_str();
  simulate->add_option("--input", sim.input, "step or impulse")->capture_default_str();
  simulate->add_option("--amplitude", sim.amplitude, "Step amplitude or impulse area")->capture_default_str();
  simulate->add_option("--threshold", sim.threshold, "Divergence threshold")->capture_default_str();
  simulate->add_option("--format", sim.formats, "Comma-separated output formats (csv,json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return run_check(common);
    if (boundaries->parsed()) return run_boundaries(common, plane);
    if (region->parsed()) return run_region(common, plane);
    if (sweep->parsed()) return run_sweep(common, plane, sweep_text, mode, robust);
    if (simulate->parsed()) return run_simulate(common, sim);
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSoftware;
  }
  return kExitSoftware;
}
