#include "fracstab/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "fracstab/errors.hpp"
#include "fracstab/number_format.hpp"

namespace fracstab {

std::string_view to_string(Boundedness b) noexcept {
  switch (b) {
    case Boundedness::Bounded: return "bounded";
    case Boundedness::Diverged: return "diverged";
    case Boundedness::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void SimConfig::validate() const {
  if (!(step > 0.0) || !(horizon > 0.0) || !std::isfinite(horizon))
    throw ValidationError("simulation step and horizon must be positive");
  if (step > horizon / 100.0) throw ValidationError("simulation step must be at most horizon/100");
  if (!(bound_threshold >= 1e3)) throw ValidationError("divergence threshold must be at least 1e3");
  const double n = horizon / step;
  if (n > 2e5) throw ValidationError("simulation would need more than 2e5 steps");
}

std::vector<double> gl_weights(double alpha, std::size_t n) {
  std::vector<double> w(n);
  if (n == 0) return w;
  w[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(j));
  return w;
}

SimResult gl_simulate(const QuasiPolynomial& qp, double forcing, const SimConfig& cfg) {
  cfg.validate();
  if (!qp.fully_known()) throw ValidationError("simulation needs every parameter bound");
  if (!std::isfinite(forcing)) throw ValidationError("forcing gain must be finite");

  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.horizon / cfg.step));
  const double h = cfg.step;

  // Combined history weights: C_j = sum_i a_i h^{-alpha_i} w_j(alpha_i).
  std::vector<double> combined(steps + 1, 0.0);
  double magnitude = 0.0;
  for (const auto& t : qp.terms()) {
    const double scale = t.coeff.value() * std::pow(h, -t.order.value());
    magnitude += std::abs(scale);
    if (t.order.is_zero()) {
      combined[0] += scale;
      continue;
    }
    const std::vector<double> w = gl_weights(t.order.value(), steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) combined[j] += scale * w[j];
  }
  if (std::abs(combined[0]) <= 1e-14 * magnitude)
    throw Error("implicit Grünwald-Letnikov coefficient vanishes for step " + format_double(h) + "; change the step size");

  SimResult out;
  out.times.reserve(steps + 1);
  out.outputs.reserve(steps + 1);
  out.times.push_back(0.0);
  out.outputs.push_back(0.0);
  const auto& y = out.outputs;

  for (std::size_t n = 1; n <= steps; ++n) {
    double u = 0.0;
    if (const auto* s = std::get_if<StepInput>(&cfg.input))
      u = s->amplitude;
    else if (n == 1)
      u = std::get<ImpulseInput>(cfg.input).area / h;

    double history = 0.0;
    for (std::size_t j = 1; j < n; ++j) history += combined[j] * y[n - j];
    const double yn = (forcing * u - history) / combined[0];

    out.times.push_back(static_cast<double>(n) * h);
    out.outputs.push_back(yn);
    if (!std::isfinite(yn) || std::abs(yn) > cfg.bound_threshold) {
      out.verdict = Boundedness::Diverged;
      out.diverged_at = out.times.back();
      out.peak = std::isfinite(yn) ? std::abs(yn) : HUGE_VAL;
      return out;
    }
    out.peak = std::max(out.peak, std::abs(yn));
  }

  const std::size_t tenth = std::max<std::size_t>(1, steps / 10);
  auto envelope = [&](std::size_t from, std::size_t to) {
    double m = 0.0;
    for (std::size_t i = from; i < to && i < y.size(); ++i) m = std::max(m, std::abs(y[i]));
    return m;
  };
  const double last = envelope(y.size() - tenth, y.size());
  const double before = envelope(y.size() - 2 * tenth, y.size() - tenth);
  out.verdict = last <= before * (1.0 + kEnvelopeTolerance) ? Boundedness::Bounded : Boundedness::Inconclusive;
  return out;
}

SimResult assess_boundedness(const QuasiPolynomial& qp, double forcing, SimConfig cfg, int escalations) {
  SimResult r = gl_simulate(qp, forcing, cfg);
  for (int i = 0; i < escalations && r.verdict == Boundedness::Inconclusive; ++i) {
    cfg.step *= 5.0;
    cfg.horizon *= 5.0;
    r = gl_simulate(qp, forcing, cfg);
  }
  return r;
}

}  // namespace fracstab
