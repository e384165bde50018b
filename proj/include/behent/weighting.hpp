#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "behent/error.hpp"
#include "behent/util.hpp"

namespace behent {

// Prelec probability weighting w(x) = exp(-beta * (-log x)^alpha).
//
// On (0, 1] this is the classic two-parameter family: alpha shapes the
// over/under-weighting of small probabilities, beta scales it. Density values
// can exceed 1, so the weight is extended to [0, inf) with the signed-power
// continuation (see signed_pow): for x > 1, w(x) = exp(beta * (log x)^alpha),
// which stays real, continuous and strictly increasing for every alpha > 0.
struct WeightingParams {
  double alpha = 1.0;
  double beta = 1.0;
  // When beta was derived from a representation dimension M, the M used.
  // Provenance only; evaluation reads alpha and beta.
  std::optional<int> conditioned_m;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw_validation("weighting", "alpha must be a positive finite real");
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw_validation("weighting", "beta must be a positive finite real");
    if (conditioned_m) {
      if (*conditioned_m < 3)
        throw_validation("weighting", "conditioned_m must be >= 3");
      const double expect = std::exp((1.0 - alpha) * std::log(std::log(static_cast<double>(*conditioned_m))));
      if (std::fabs(beta - expect) > 1e-12)
        throw_validation("weighting", "beta does not match the conditioning for the recorded M");
    }
  }
};

// beta = exp((1 - alpha) * log(log m)) = (log m)^(1 - alpha).
// Requires m >= 3 so that log(log m) is defined and positive.
inline double condition_beta(double alpha, int m) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw_validation("weighting", "alpha must be a positive finite real");
  if (m < 3) throw_validation("weighting", "conditioning dimension m must be >= 3");
  return std::exp((1.0 - alpha) * std::log(std::log(static_cast<double>(m))));
}

inline WeightingParams conditioned_params(double alpha, int m) {
  WeightingParams p;
  p.alpha = alpha;
  p.beta = condition_beta(alpha, m);
  p.conditioned_m = m;
  p.validate();
  return p;
}

enum class WeightingKind { Identity, Prelec };

class WeightingFunction {
public:
  WeightingFunction() : kind_(WeightingKind::Identity) {}

  static WeightingFunction identity() { return WeightingFunction(); }

  static WeightingFunction prelec(WeightingParams params) {
    params.validate();
    WeightingFunction w;
    w.kind_ = WeightingKind::Prelec;
    w.params_ = params;
    return w;
  }

  static WeightingFunction prelec(double alpha, double beta) {
    return prelec(WeightingParams{alpha, beta, std::nullopt});
  }

  static WeightingFunction prelec_conditioned(double alpha, int m) {
    return prelec(conditioned_params(alpha, m));
  }

  WeightingKind kind() const { return kind_; }
  const WeightingParams& params() const { return params_; }

  // log w(x) given log x. The sign convention: t = -log x, log w = -beta * t^alpha
  // with the signed-power continuation for t < 0 (i.e. x > 1). Identity passes
  // log x through, so Prelec(1, 1) and Identity agree bit for bit.
  double log_weight_from_log(double log_x) const {
    if (kind_ == WeightingKind::Identity) return log_x;
    return -params_.beta * signed_pow(-log_x, params_.alpha);
  }

  // w(x) for x >= 0; w(0) = 0 by continuity.
  double operator()(double x) const {
    if (x < 0.0 || std::isnan(x))
      throw_validation("weighting", "weighting argument must be >= 0");
    if (kind_ == WeightingKind::Identity) return x;
    if (x == 0.0) return 0.0;
    return std::exp(log_weight_from_log(std::log(x)));
  }

  // -w(x) log w(x) given log x, with the limit value 0 where w vanishes.
  // For Prelec this is beta * t^alpha * exp(-beta * t^alpha), t = -log x.
  double neg_w_log_w_from_log(double log_x) const {
    const double lw = log_weight_from_log(log_x);
    if (lw == -std::numeric_limits<double>::infinity()) return 0.0;
    return -std::exp(lw) * lw;
  }

  double neg_w_log_w(double x) const {
    if (x < 0.0 || std::isnan(x))
      throw_validation("weighting", "weighting argument must be >= 0");
    if (x == 0.0) return 0.0;
    return neg_w_log_w_from_log(std::log(x));
  }

  std::string describe() const {
    if (kind_ == WeightingKind::Identity) return "identity";
    return "prelec(alpha=" + std::to_string(params_.alpha) + ",beta=" + std::to_string(params_.beta) + ")";
  }

private:
  WeightingKind kind_;
  WeightingParams params_{1.0, 1.0, std::nullopt};
};

inline double prelec_eval(const WeightingParams& params, double x) {
  return WeightingFunction::prelec(params)(x);
}

inline double weight_log_weight(const WeightingFunction& w, double x) {
  return w.neg_w_log_w(x);
}

} // namespace behent
