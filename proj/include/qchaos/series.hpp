#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qchaos/error.hpp"

namespace qchaos {

/// Uniformly sampled reduced entropy s_R(k dt), in nats.
struct EntropySeries {
  double dt = 1.0;
  std::vector<double> values;
  std::size_t transient_cut = 0;

  std::size_t size() const { return values.size(); }
  double time(std::size_t k) const { return dt * static_cast<double>(k); }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw Error(ErrorKind::InvalidParameter, "series dt must be positive");
    }
    if (values.empty() || transient_cut >= values.size()) {
      throw Error(ErrorKind::InsufficientData,
                  "transient_cut " + std::to_string(transient_cut) + " leaves no samples of " +
                      std::to_string(values.size()));
    }
    for (double v : values) {
      if (!std::isfinite(v) || v < -1e-9) {
        throw Error(ErrorKind::NumericInput, "entropy values must be finite and non-negative");
      }
    }
  }

  /// Mean over the samples after the transient.
  double steady_mean() const {
    validate();
    double sum = 0.0;
    for (std::size_t k = transient_cut; k < values.size(); ++k) sum += values[k];
    return sum / static_cast<double>(values.size() - transient_cut);
  }

  /// Index of the first sample reaching `fraction` of the steady mean.
  std::size_t samples_to_reach(double fraction) const {
    const double target = fraction * steady_mean();
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k] >= target) return k;
    }
    return values.size();
  }
};

}  // namespace qchaos
