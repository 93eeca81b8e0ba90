#pragma once

// Exact unitary evolution through one spectral decomposition, partial traces
// over a bipartition, and reduced von Neumann entropy.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <string>

#include "qchaos/error.hpp"
#include "qchaos/hamiltonian.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/series.hpp"

namespace qchaos {

using Complex = std::complex<double>;

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues[k]

  Eigen::Index dim() const { return eigenvalues.size(); }
};

inline SpectralDecomposition eig_symmetric(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::Shape, "eig_symmetric needs a square matrix");
  if (!h.allFinite()) throw Error(ErrorKind::NumericInput, "matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::DiagonalizationFailure, "symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline SpectralDecomposition eig_symmetric(const HamiltonianMatrix& h) {
  return eig_symmetric(h.matrix());
}

/// Factorization D = dim_keep * dim_drop. Global index g = a * dim_drop + b
/// with a the kept factor's index.
struct TensorSplit {
  Eigen::Index dim_keep = 1;
  Eigen::Index dim_drop = 1;

  Eigen::Index total() const { return dim_keep * dim_drop; }

  void require_total(Eigen::Index dim) const {
    if (dim_keep < 1 || dim_drop < 1 || total() != dim) {
      throw Error(ErrorKind::Shape, "split " + std::to_string(dim_keep) + "x" +
                                        std::to_string(dim_drop) + " does not factor dimension " +
                                        std::to_string(dim));
    }
  }
};

class PureState {
 public:
  static constexpr double kNormTolerance = 1e-10;

  explicit PureState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) throw Error(ErrorKind::InvalidDimension, "empty state");
    if (!amplitudes_.allFinite()) throw Error(ErrorKind::NumericInput, "non-finite amplitude");
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance) {
      throw Error(ErrorKind::InvalidParameter, "state is not normalized");
    }
  }

  static PureState basis(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) {
      throw Error(ErrorKind::InvalidParameter, "basis index " + std::to_string(index) +
                                                   " out of range for dim " + std::to_string(dim));
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(index) = 1.0;
    return PureState(std::move(v));
  }

  /// |keep> (x) |drop> in subsystem-major order.
  static PureState product(const Eigen::VectorXcd& keep, const Eigen::VectorXcd& drop) {
    Eigen::VectorXcd v(keep.size() * drop.size());
    for (Eigen::Index a = 0; a < keep.size(); ++a) {
      v.segment(a * drop.size(), drop.size()) = keep(a) * drop;
    }
    return PureState(std::move(v));
  }

  /// Product of two independent Haar-random unit vectors, one per factor.
  static PureState random_product(const TensorSplit& split, RngSeed seed) {
    auto engine = make_engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto haar = [&](Eigen::Index d) {
      Eigen::VectorXcd v(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double re = normal(engine);
        const double im = normal(engine);
        v(i) = Complex(re, im);
      }
      return Eigen::VectorXcd(v / v.norm());
    };
    const Eigen::VectorXcd keep = haar(split.dim_keep);
    const Eigen::VectorXcd drop = haar(split.dim_drop);
    return product(keep, drop);
  }

  Eigen::Index dim() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

 private:
  Eigen::VectorXcd amplitudes_;
};

/// A square complex matrix meant to be a density matrix. Construction only
/// checks the shape; `check_density_matrix` enforces the physical invariants.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
      throw Error(ErrorKind::Shape, "density matrix must be non-empty and square");
    }
  }

  static DensityMatrix pure(const PureState& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  Complex operator()(Eigen::Index m, Eigen::Index n) const { return entries_(m, n); }
  Complex trace() const { return entries_.trace(); }

 private:
  Eigen::MatrixXcd entries_;
};

/// Hermiticity and unit trace; returns the eigenvalues so callers can check
/// positivity without a second solve.
inline Eigen::VectorXd check_density_matrix(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  if (!m.allFinite()) throw Error(ErrorKind::InvalidDensityMatrix, "non-finite entries");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > DensityMatrix::kTolerance) {
    throw Error(ErrorKind::InvalidDensityMatrix, "not Hermitian (deviation " + std::to_string(asym) + ")");
  }
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > DensityMatrix::kTolerance) {
    throw Error(ErrorKind::InvalidDensityMatrix, "trace " + std::to_string(tr.real()) + " is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::DiagonalizationFailure, "density matrix eigensolver did not converge");
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  if (lambda.minCoeff() < -DensityMatrix::kTolerance) {
    throw Error(ErrorKind::InvalidDensityMatrix,
                "negative eigenvalue " + std::to_string(lambda.minCoeff()));
  }
  return lambda;
}

namespace detail {

inline Eigen::VectorXcd apply_real(const Eigen::MatrixXd& a, const Eigen::VectorXcd& v) {
  const Eigen::VectorXd re = a * v.real();
  const Eigen::VectorXd im = a * v.imag();
  Eigen::VectorXcd out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

inline Eigen::VectorXcd apply_real_transpose(const Eigen::MatrixXd& a, const Eigen::VectorXcd& v) {
  const Eigen::VectorXd re = a.transpose() * v.real();
  const Eigen::VectorXd im = a.transpose() * v.imag();
  Eigen::VectorXcd out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

// psi(t) = V exp(-i lambda t / hbar) coeffs, with coeffs = V^T psi(0).
inline Eigen::VectorXcd evolve_coefficients(const SpectralDecomposition& decomp,
                                            const Eigen::VectorXcd& coeffs, double t, double hbar) {
  Eigen::VectorXcd phased(coeffs.size());
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    phased(k) = std::polar(1.0, -decomp.eigenvalues(k) * t / hbar) * coeffs(k);
  }
  return apply_real(decomp.eigenvectors, phased);
}

}  // namespace detail

inline PureState propagate(const PureState& initial, const SpectralDecomposition& decomp, double t,
                           double hbar) {
  if (initial.dim() != decomp.dim()) {
    throw Error(ErrorKind::Shape, "state dimension " + std::to_string(initial.dim()) +
                                      " does not match decomposition dimension " +
                                      std::to_string(decomp.dim()));
  }
  if (!(hbar > 0.0)) throw Error(ErrorKind::InvalidParameter, "hbar must be positive");
  const Eigen::VectorXcd coeffs =
      detail::apply_real_transpose(decomp.eigenvectors, initial.amplitudes());
  return PureState(detail::evolve_coefficients(decomp, coeffs, t, hbar));
}

enum class Keep { First, Second };

/// Reduced state of a pure global state. Sums outer products of the amplitude
/// slices instead of forming the D x D projector.
inline DensityMatrix partial_trace(const PureState& state, const TensorSplit& split,
                                   Keep keep = Keep::First) {
  split.require_total(state.dim());
  // Column-major map: block(b, a) = psi[a * d2 + b].
  const Eigen::Map<const Eigen::MatrixXcd> block(state.amplitudes().data(), split.dim_drop,
                                                 split.dim_keep);
  if (keep == Keep::First) {
    // rho[a][a'] = sum_b psi[a,b] conj(psi[a',b])
    return DensityMatrix(block.transpose() * block.conjugate());
  }
  // rho[b][b'] = sum_a psi[a,b] conj(psi[a,b'])
  return DensityMatrix(block * block.adjoint());
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const TensorSplit& split,
                                   Keep keep = Keep::First) {
  split.require_total(rho.dim());
  const Eigen::Index d1 = split.dim_keep;
  const Eigen::Index d2 = split.dim_drop;
  const auto& m = rho.matrix();
  if (keep == Keep::First) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d1, d1);
    for (Eigen::Index b = 0; b < d2; ++b) {
      for (Eigen::Index a = 0; a < d1; ++a) {
        for (Eigen::Index ap = 0; ap < d1; ++ap) out(a, ap) += m(a * d2 + b, ap * d2 + b);
      }
    }
    return DensityMatrix(std::move(out));
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d2, d2);
  for (Eigen::Index a = 0; a < d1; ++a) out += m.block(a * d2, a * d2, d2, d2);
  return DensityMatrix(std::move(out));
}

/// Eigenvalues at or below this contribute exactly zero to -sum l ln l.
inline constexpr double kEntropyEigenvalueFloor = 1e-12;

/// -tr(rho ln rho) in nats.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd lambda = check_density_matrix(rho);
  double s = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const double l = lambda(k);
    if (l > kEntropyEigenvalueFloor) s -= l * std::log(l);
  }
  return std::max(s, 0.0);
}

struct EvolutionConfig {
  double hbar = 0.1;
  double dt = 0.1;
  std::size_t num_samples = 1024;
  std::size_t transient_cut = 128;

  void validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error(ErrorKind::InvalidParameter, "hbar must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidParameter, "dt must be positive");
    if (num_samples < 1) throw Error(ErrorKind::InvalidParameter, "num_samples must be positive");
    if (transient_cut >= num_samples) {
      throw Error(ErrorKind::InvalidParameter, "transient_cut must be smaller than num_samples");
    }
  }
};

inline EntropySeries entropy_series(const SpectralDecomposition& decomp, const PureState& initial,
                                    const TensorSplit& split, const EvolutionConfig& cfg) {
  cfg.validate();
  if (initial.dim() != decomp.dim()) {
    throw Error(ErrorKind::Shape, "initial state does not match Hamiltonian dimension");
  }
  split.require_total(initial.dim());
  const Eigen::VectorXcd coeffs =
      detail::apply_real_transpose(decomp.eigenvectors, initial.amplitudes());
  EntropySeries series;
  series.dt = cfg.dt;
  series.transient_cut = cfg.transient_cut;
  series.values.reserve(cfg.num_samples);
  for (std::size_t k = 0; k < cfg.num_samples; ++k) {
    const double t = cfg.dt * static_cast<double>(k);
    const PureState psi(detail::evolve_coefficients(decomp, coeffs, t, cfg.hbar));
    series.values.push_back(von_neumann_entropy(partial_trace(psi, split, Keep::First)));
  }
  return series;
}

inline EntropySeries entropy_series(const HamiltonianMatrix& h, const PureState& initial,
                                    const TensorSplit& split, const EvolutionConfig& cfg) {
  return entropy_series(eig_symmetric(h), initial, split, cfg);
}

}  // namespace qchaos
