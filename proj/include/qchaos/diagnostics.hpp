#pragma once

// Chaos indicators: power spectrum and spectral flatness of entropy
// fluctuations, nearest-neighbour level spacings against the Wigner and
// Poisson references, and eigenvector residual parameters.

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "qchaos/dynamics.hpp"
#include "qchaos/error.hpp"
#include "qchaos/series.hpp"

namespace qchaos {

struct PowerSpectrum {
  std::vector<double> frequencies;  // cycles per time unit
  std::vector<double> power;
  std::size_t window = 0;           // analysed samples M

  std::size_t size() const { return power.size(); }
};

/// One-sided |DFT|^2 of the post-transient window with its mean removed, at
/// frequencies k / (M dt), k = 0..M/2. No taper.
inline PowerSpectrum power_spectrum(const EntropySeries& series) {
  if (series.transient_cut >= series.values.size() ||
      series.values.size() - series.transient_cut < 8) {
    throw Error(ErrorKind::InsufficientData, "power spectrum needs at least 8 post-transient samples");
  }
  if (!(series.dt > 0.0)) throw Error(ErrorKind::InvalidParameter, "series dt must be positive");
  const std::size_t m = series.values.size() - series.transient_cut;
  std::vector<double> window(series.values.begin() + static_cast<std::ptrdiff_t>(series.transient_cut),
                             series.values.end());
  const double mean = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(m);
  for (double& x : window) x -= mean;

  std::vector<std::complex<double>> bins;
  Eigen::FFT<double> fft;
  fft.fwd(bins, window);

  PowerSpectrum out;
  out.window = m;
  const std::size_t half = m / 2 + 1;
  out.frequencies.resize(half);
  out.power.resize(half);
  const double df = 1.0 / (static_cast<double>(m) * series.dt);
  for (std::size_t k = 0; k < half; ++k) {
    out.frequencies[k] = df * static_cast<double>(k);
    out.power[k] = std::norm(bins[k]);
  }
  return out;
}

/// Geometric over arithmetic mean of the positive-frequency power.
inline double spectral_flatness(const PowerSpectrum& spectrum) {
  constexpr double eps = 1e-300;
  if (spectrum.power.size() < 2) {
    throw Error(ErrorKind::InsufficientData, "no positive-frequency bins");
  }
  const auto positive = std::span(spectrum.power).subspan(1);
  if (std::none_of(positive.begin(), positive.end(), [](double p) { return p > 0.0; })) {
    throw Error(ErrorKind::InsufficientData, "all positive-frequency power is zero");
  }
  double log_sum = 0.0;
  double sum = 0.0;
  for (double p : positive) {
    log_sum += std::log(p + eps);
    sum += p + eps;
  }
  const double n = static_cast<double>(positive.size());
  const double arithmetic = sum / n;
  // Same ratio computed in log space so tiny arithmetic means cannot underflow.
  const double ratio = std::exp(log_sum / n - std::log(arithmetic));
  return std::clamp(ratio, 0.0, 1.0);
}

struct SpacingSample {
  std::vector<double> spacings;  // unit mean
};

/// Consecutive differences of the sorted levels, divided by their mean.
/// No unfolding.
inline SpacingSample level_spacings(std::span<const double> eigenvalues) {
  if (eigenvalues.size() < 3) throw Error(ErrorKind::InsufficientData, "need at least 3 eigenvalues");
  std::vector<double> levels(eigenvalues.begin(), eigenvalues.end());
  std::sort(levels.begin(), levels.end());
  SpacingSample out;
  out.spacings.resize(levels.size() - 1);
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) out.spacings[i] = levels[i + 1] - levels[i];
  const double mean = (levels.back() - levels.front()) / static_cast<double>(out.spacings.size());
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw Error(ErrorKind::InsufficientData, "eigenvalues are fully degenerate");
  }
  for (double& s : out.spacings) s /= mean;
  return out;
}

inline SpacingSample level_spacings(const SpectralDecomposition& decomp) {
  return level_spacings(std::span<const double>(decomp.eigenvalues.data(),
                                                static_cast<std::size_t>(decomp.eigenvalues.size())));
}

/// Unit-mean GOE surmise (pi/2) s exp(-pi s^2 / 4).
inline double wigner_surmise(double s) {
  if (!(s >= 0.0)) throw Error(ErrorKind::Domain, "spacing must be non-negative");
  return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
}

inline double poisson_density(double s) {
  if (!(s >= 0.0)) throw Error(ErrorKind::Domain, "spacing must be non-negative");
  return std::exp(-s);
}

enum class SpacingReference { Wigner, Poisson };

inline double reference_cdf(SpacingReference reference, double s) {
  if (s <= 0.0) return 0.0;
  switch (reference) {
    case SpacingReference::Wigner: return -std::expm1(-0.25 * std::numbers::pi * s * s);
    case SpacingReference::Poisson: return -std::expm1(-s);
  }
  return 0.0;
}

/// Two-sided Kolmogorov-Smirnov statistic against a closed-form reference.
inline double ks_distance(std::span<const double> sample, SpacingReference reference) {
  if (sample.empty()) throw Error(ErrorKind::InsufficientData, "empty spacing sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = reference_cdf(reference, sorted[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    d = std::max({d, f - below, above - f});
  }
  return std::clamp(d, 0.0, 1.0);
}

inline double ks_distance(const SpacingSample& sample, SpacingReference reference) {
  return ks_distance(std::span<const double>(sample.spacings), reference);
}

struct ResidualReport {
  std::vector<double> r_values;
  std::size_t bin_count = 0;

  double mean() const {
    if (r_values.empty()) return 0.0;
    return std::accumulate(r_values.begin(), r_values.end(), 0.0) /
           static_cast<double>(r_values.size());
  }
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// r = (1/N) sqrt(sum_k (p_k - p0_k)^2) for one vector. p_k is the fraction of
/// components in bin k of `bin_count` uniform bins over mean +- 4 sd (values
/// outside land in the end bins); p0_k is the matching Gaussian mass.
inline double residual_parameter(std::span<const double> components, std::size_t bin_count) {
  const std::size_t n = components.size();
  if (bin_count < 4) throw Error(ErrorKind::InvalidParameter, "bin_count must be at least 4");
  if (n < bin_count) throw Error(ErrorKind::InsufficientData, "vector shorter than bin_count");
  const auto [min_it, max_it] = std::minmax_element(components.begin(), components.end());
  if (*min_it == *max_it) throw Error(ErrorKind::DegenerateVector, "eigenvector components are constant");
  const double nd = static_cast<double>(n);
  const double mu = std::accumulate(components.begin(), components.end(), 0.0) / nd;
  double var = 0.0;
  for (double x : components) var += (x - mu) * (x - mu);
  const double sigma = std::sqrt(var / nd);
  if (!(sigma > 0.0)) throw Error(ErrorKind::DegenerateVector, "eigenvector components are constant");

  const double lo = mu - 4.0 * sigma;
  const double width = 8.0 * sigma / static_cast<double>(bin_count);
  std::vector<double> p(bin_count, 0.0);
  for (double x : components) {
    const double pos = std::floor((x - lo) / width);
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bin_count - 1)));
    p[idx] += 1.0;
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < bin_count; ++k) {
    const double left = lo + width * static_cast<double>(k);
    const double right = left + width;
    const double p0 = normal_cdf((right - mu) / sigma) - normal_cdf((left - mu) / sigma);
    const double diff = p[k] / nd - p0;
    sq += diff * diff;
  }
  return std::sqrt(sq) / nd;
}

inline ResidualReport residual_parameters(const SpectralDecomposition& decomp, std::size_t bin_count = 32) {
  const Eigen::Index n = decomp.eigenvectors.rows();
  if (static_cast<std::size_t>(n) < bin_count) {
    throw Error(ErrorKind::InsufficientData, "matrix dimension smaller than bin_count");
  }
  ResidualReport report;
  report.bin_count = bin_count;
  report.r_values.reserve(static_cast<std::size_t>(decomp.eigenvectors.cols()));
  for (Eigen::Index k = 0; k < decomp.eigenvectors.cols(); ++k) {
    const Eigen::VectorXd column = decomp.eigenvectors.col(k);
    report.r_values.push_back(
        residual_parameter(std::span<const double>(column.data(), static_cast<std::size_t>(n)), bin_count));
  }
  return report;
}

}  // namespace qchaos
