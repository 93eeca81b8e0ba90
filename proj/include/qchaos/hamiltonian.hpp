#pragma once

// Dense real-symmetric Hamiltonian families: GOE random matrices, the Harper
// matrix on a torus, and Harper matrices whose far off-diagonal entries have
// been randomized (the correlation-controlled interpolation between the two).

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "qchaos/error.hpp"
#include "qchaos/rng.hpp"

namespace qchaos {

enum class Family { RandomSymmetric, Harper, Interpolated };

inline const char* to_string(Family family) {
  switch (family) {
    case Family::RandomSymmetric: return "random_symmetric";
    case Family::Harper: return "harper";
    case Family::Interpolated: return "interpolated";
  }
  return "unknown";
}

struct HarperParams {
  double gamma1 = 0.5;
  double gamma2 = 2.5;
};

/// Parameters a matrix was built from; fields not used by a family stay empty.
struct FamilyParams {
  std::optional<HarperParams> harper;
  std::optional<double> f;
  std::optional<RngSeed> seed;
  bool centered = false;
};

class HamiltonianMatrix {
 public:
  /// Wraps an arbitrary matrix; throws unless square, finite and exactly
  /// symmetric.
  HamiltonianMatrix(Eigen::MatrixXd entries, Family family, FamilyParams params = {})
      : entries_(std::move(entries)), family_(family), params_(params) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
      throw Error(ErrorKind::InvalidDimension, "Hamiltonian must be a non-empty square matrix");
    }
    if (!entries_.allFinite()) {
      throw Error(ErrorKind::NumericInput, "Hamiltonian has non-finite entries");
    }
    if (entries_ != entries_.transpose()) {
      throw Error(ErrorKind::InvalidParameter, "Hamiltonian must be exactly symmetric");
    }
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(Eigen::Index m, Eigen::Index n) const { return entries_(m, n); }
  Family family() const { return family_; }
  const FamilyParams& params() const { return params_; }

 private:
  Eigen::MatrixXd entries_;
  Family family_;
  FamilyParams params_;
};

/// GOE convention: off-diagonal N(0, 1), diagonal N(0, 2). Draws are taken in
/// row-major upper-triangle order (diagonal included) and mirrored.
inline HamiltonianMatrix build_random_symmetric(Eigen::Index dim, RngSeed seed) {
  if (dim < 2) throw Error(ErrorKind::InvalidDimension, "random symmetric matrix needs dim >= 2");
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double diag_scale = std::sqrt(2.0);
  Eigen::MatrixXd h(dim, dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    h(m, m) = diag_scale * normal(engine);
    for (Eigen::Index n = m + 1; n < dim; ++n) {
      const double x = normal(engine);
      h(m, n) = x;
      h(n, m) = x;
    }
  }
  FamilyParams params;
  params.seed = seed;
  return HamiltonianMatrix(std::move(h), Family::RandomSymmetric, params);
}

/// gamma1 * T + gamma2 * V with periodic nearest-neighbour hopping T (1/2 on
/// the first off-diagonals and the two corners) and V_jj = cos(2 pi j / N),
/// j counted from 1.
inline HamiltonianMatrix build_harper(Eigen::Index dim, HarperParams params = {}) {
  if (dim < 3) throw Error(ErrorKind::InvalidDimension, "Harper matrix needs dim >= 3");
  if (!std::isfinite(params.gamma1) || !std::isfinite(params.gamma2)) {
    throw Error(ErrorKind::InvalidParameter, "Harper couplings must be finite");
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double hop = 0.5 * params.gamma1;
  for (Eigen::Index i = 0; i + 1 < dim; ++i) {
    h(i, i + 1) = hop;
    h(i + 1, i) = hop;
  }
  h(0, dim - 1) = hop;
  h(dim - 1, 0) = hop;
  const double n = static_cast<double>(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    h(j, j) = params.gamma2 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j + 1) / n);
  }
  FamilyParams fp;
  fp.harper = params;
  return HamiltonianMatrix(std::move(h), Family::Harper, fp);
}

/// Copies `base` and replaces every entry with |m - n| > f * N (strict, against
/// the unrounded product) by a fresh N(0, 1) draw. Draws follow row-major
/// upper-triangle order over replaced pairs only.
inline HamiltonianMatrix build_interpolated(const HamiltonianMatrix& base, double f, RngSeed seed) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "correlation fraction f must lie in [0, 1]");
  }
  const Eigen::Index dim = base.dim();
  const double threshold = f * static_cast<double>(dim);
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd h = base.matrix();
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = m + 1; n < dim; ++n) {
      if (static_cast<double>(n - m) > threshold) {
        const double x = normal(engine);
        h(m, n) = x;
        h(n, m) = x;
      }
    }
  }
  FamilyParams params = base.params();
  params.f = f;
  params.seed = seed;
  params.centered = false;
  return HamiltonianMatrix(std::move(h), Family::Interpolated, params);
}

/// Subtracts the mean of all N^2 entries from every entry.
inline HamiltonianMatrix center_mean(const HamiltonianMatrix& h) {
  const double mean = h.matrix().mean();
  Eigen::MatrixXd shifted = h.matrix().array() - mean;
  FamilyParams params = h.params();
  params.centered = true;
  return HamiltonianMatrix(std::move(shifted), h.family(), params);
}

}  // namespace qchaos
