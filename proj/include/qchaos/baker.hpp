#pragma once

// Quantized baker's map B = G_N^{-1} blockdiag(G_{N/2}, G_{N/2}) and the
// reduced entropy along its orbit.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qchaos/dynamics.hpp"
#include "qchaos/error.hpp"
#include "qchaos/series.hpp"

namespace qchaos {

enum class BakerConvention {
  Saraceno,     // half-integer phase offsets (antiperiodic)
  BalazsVoros,  // integer phases
};

/// M-dimensional DFT matrix, G[k][m] = M^{-1/2} exp(-2 pi i (k+o)(m+o) / M)
/// with o = 1/2 for Saraceno and 0 for Balazs-Voros.
inline Eigen::MatrixXcd offset_dft(Eigen::Index size, BakerConvention convention) {
  const double offset = convention == BakerConvention::Saraceno ? 0.5 : 0.0;
  const double m = static_cast<double>(size);
  const double norm = 1.0 / std::sqrt(m);
  Eigen::MatrixXcd g(size, size);
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index j = 0; j < size; ++j) {
      const double phase = -2.0 * std::numbers::pi * (static_cast<double>(k) + offset) *
                           (static_cast<double>(j) + offset) / m;
      g(k, j) = std::polar(norm, phase);
    }
  }
  return g;
}

class BakerUnitary {
 public:
  static constexpr double kUnitarityTolerance = 1e-10;

  /// Wraps any square matrix that is unitary to within tolerance.
  static BakerUnitary from_matrix(Eigen::MatrixXcd u) {
    if (u.rows() != u.cols() || u.rows() < 1) {
      throw Error(ErrorKind::Shape, "unitary must be non-empty and square");
    }
    const Eigen::Index n = u.rows();
    const double err = (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(err <= kUnitarityTolerance)) {
      throw Error(ErrorKind::NumericInput, "matrix is not unitary (deviation " + std::to_string(err) + ")");
    }
    return BakerUnitary(std::move(u));
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }

 private:
  explicit BakerUnitary(Eigen::MatrixXcd u) : entries_(std::move(u)) {}

  Eigen::MatrixXcd entries_;
};

inline BakerUnitary build_baker_unitary(Eigen::Index dim,
                                        BakerConvention convention = BakerConvention::Saraceno) {
  if (dim < 2 || dim % 2 != 0) {
    throw Error(ErrorKind::InvalidDimension, "baker map needs an even dimension >= 2, got " + std::to_string(dim));
  }
  const Eigen::Index half = dim / 2;
  const Eigen::MatrixXcd half_dft = offset_dft(half, convention);
  Eigen::MatrixXcd blocks = Eigen::MatrixXcd::Zero(dim, dim);
  blocks.topLeftCorner(half, half) = half_dft;
  blocks.bottomRightCorner(half, half) = half_dft;
  Eigen::MatrixXcd u = offset_dft(dim, convention).adjoint() * blocks;
  return BakerUnitary::from_matrix(std::move(u));
}

/// s_R after k = 0..num_steps applications of u; dt is one iteration.
inline EntropySeries baker_entropy_series(const BakerUnitary& u, const PureState& initial,
                                          const TensorSplit& split, std::size_t num_steps,
                                          std::size_t transient_cut = 0) {
  if (num_steps < 1) throw Error(ErrorKind::InvalidParameter, "num_steps must be positive");
  if (initial.dim() != u.dim()) {
    throw Error(ErrorKind::Shape, "initial state does not match baker dimension");
  }
  split.require_total(u.dim());
  EntropySeries series;
  series.dt = 1.0;
  series.transient_cut = transient_cut;
  series.values.reserve(num_steps + 1);
  Eigen::VectorXcd psi = initial.amplitudes();
  for (std::size_t k = 0; k <= num_steps; ++k) {
    if (k > 0) psi = u.matrix() * psi;
    series.values.push_back(von_neumann_entropy(partial_trace(PureState(psi), split, Keep::First)));
  }
  return series;
}

}  // namespace qchaos
