#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "fracstab/quasi_polynomial.hpp"

namespace fracstab {

struct StepInput {
  double amplitude = 1.0;
};

struct ImpulseInput {
  double area = 1.0;
};

using SimInput = std::variant<StepInput, ImpulseInput>;

struct SimConfig {
  double step = 0.01;
  double horizon = 50.0;
  SimInput input = StepInput{};
  /// |y| above this counts as divergence.
  double bound_threshold = 1e6;

  /// Requires step <= horizon / 100 and bound_threshold >= 1e3.
  void validate() const;
};

enum class Boundedness { Bounded, Diverged, Inconclusive };

std::string_view to_string(Boundedness b) noexcept;

struct SimResult {
  std::vector<double> times;
  std::vector<double> outputs;
  Boundedness verdict = Boundedness::Inconclusive;
  /// Time of the first sample above the threshold.
  std::optional<double> diverged_at;
  double peak = 0.0;
};

/// Relative tolerance on envelope growth between the last two tenths of a run.
inline constexpr double kEnvelopeTolerance = 0.02;

/// Grünwald-Letnikov binomial weights w_0..w_{n-1} of order alpha.
std::vector<double> gl_weights(double alpha, std::size_t n);

/**
 * Full-memory implicit Grünwald-Letnikov solution of
 *     sum_i a_i D^{alpha_i} y(t) = forcing * u(t)
 * with zero initial conditions, where qp = sum_i a_i s^{alpha_i} is fully known.
 *
 * Diverged as soon as |y| exceeds the threshold (the run stops there).
 * Bounded when the peak of |y| over the last tenth of the run does not exceed
 * the peak over the tenth before it by more than kEnvelopeTolerance;
 * Inconclusive otherwise. Throws Error when the implicit coefficient
 * sum_i a_i h^{-alpha_i} vanishes for the chosen step.
 */
SimResult gl_simulate(const QuasiPolynomial& qp, double forcing, const SimConfig& cfg);

/// Reruns Inconclusive simulations with step and horizon both multiplied by 5,
/// at most `escalations` times, and returns the last result.
SimResult assess_boundedness(const QuasiPolynomial& qp, double forcing, SimConfig cfg, int escalations = 2);

}  // namespace fracstab
