#pragma once

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

#include "goe_transit/errors.hpp"
#include "goe_transit/goe.hpp"

namespace goe_transit {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Real eigenpairs of a real symmetric matrix. Eigenvalues ascend; columns of
/// `vectors` are orthonormal eigenvectors.
template <typename Scalar>
struct EigenSystem {
  Vector<Scalar> values;
  Matrix<Scalar> vectors;

  Eigen::Index size() const { return values.size(); }
};

template <typename Derived>
EigenSystem<typename Derived::Scalar> eigh(const Eigen::MatrixBase<Derived>& H) {
  using Scalar = typename Derived::Scalar;
  if (H.rows() != H.cols() || H.rows() == 0)
    throw ParameterError("eigh: input must be a non-empty square matrix");
  if (!H.allFinite()) throw ParameterError("eigh: input has non-finite entries");
  if (H != H.transpose()) throw ParameterError("eigh: input is not exactly symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(H);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigh: eigensolver did not converge (n=" << H.rows()
        << ", max|H_ij|=" << H.cwiseAbs().maxCoeff() << ", |H|_F=" << H.norm() << ")";
    throw NumericalError(msg.str());
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Amplitudes v . phi_lambda for every eigenvector.
template <typename Scalar, typename Derived>
Vector<Scalar> project(const EigenSystem<Scalar>& eig, const Eigen::MatrixBase<Derived>& v) {
  if (v.size() != eig.size()) throw ParameterError("project: vector length does not match eigensystem");
  return eig.vectors.transpose() * v;
}

/// sum_lambda p_lambda q_lambda / (E - eps_lambda + i Gamma/2).
template <typename Scalar>
std::complex<Scalar> resolvent_bilinear(const Vector<Scalar>& eigenvalues, const Vector<Scalar>& p,
                                        const Vector<Scalar>& q, Scalar Gamma, Scalar E) {
  if (p.size() != eigenvalues.size() || q.size() != eigenvalues.size())
    throw ParameterError("resolvent_bilinear: length mismatch");
  const Scalar half_width = Gamma / Scalar(2);
  std::complex<Scalar> sum(0, 0);
  for (Eigen::Index l = 0; l < eigenvalues.size(); ++l) {
    const std::complex<Scalar> denom(E - eigenvalues(l), half_width);
    if (denom == std::complex<Scalar>(0, 0)) {
      std::ostringstream msg;
      msg << "self-energy pole: E = " << E << " coincides with eigenvalue " << l
          << " and Gamma = 0";
      throw PoleError(msg.str());
    }
    sum += (p(l) * q(l)) / denom;
  }
  return sum;
}

/// w = sum_lambda (vk . phi)(vkp . phi) / (E - eps + i Gamma/2) via the spectral sum.
template <typename Scalar, typename D1, typename D2>
std::complex<Scalar> self_energy(const EigenSystem<Scalar>& eig, Scalar Gamma,
                                 const Eigen::MatrixBase<D1>& vk, const Eigen::MatrixBase<D2>& vkp,
                                 Scalar E) {
  if (!(Gamma >= 0)) throw ParameterError("self_energy: Gamma must be >= 0");
  const Vector<Scalar> p = project(eig, vk);
  const Vector<Scalar> q = project(eig, vkp);
  return resolvent_bilinear(eig.values, p, q, Gamma, E);
}

/// Same bilinear form via a complex LU solve of (E - H + i Gamma/2) x = vkp; never
/// touches an eigendecomposition.
template <typename DH, typename D1, typename D2>
std::complex<typename DH::Scalar> direct_solve(const Eigen::MatrixBase<DH>& H,
                                               typename DH::Scalar Gamma,
                                               const Eigen::MatrixBase<D1>& vk,
                                               const Eigen::MatrixBase<D2>& vkp,
                                               typename DH::Scalar E) {
  using Scalar = typename DH::Scalar;
  using Complex = std::complex<Scalar>;
  const Eigen::Index n = H.rows();
  if (H.cols() != n || vk.size() != n || vkp.size() != n)
    throw ParameterError("direct_solve: dimension mismatch");
  Matrix<Complex> M = -H.template cast<Complex>();
  M.diagonal().array() += Complex(E, Gamma / Scalar(2));
  Eigen::PartialPivLU<Matrix<Complex>> lu(M);
  const Vector<Complex> x = lu.solve(vkp.template cast<Complex>());
  if (!x.allFinite() || !(lu.rcond() > Scalar(0)))
    throw SingularRealizationError("direct_solve: E - H + i Gamma/2 is singular");
  return (vk.template cast<Complex>().transpose() * x)(0);
}

/// The four channel self-energies of one realization at energy E.
struct SelfEnergySet {
  std::complex<double> w22;
  std::complex<double> w33;
  std::complex<double> w23;
  std::complex<double> w44;
  double E = 0.0;
};

/// Both reservoirs diagonalized once; w22, w33, w23 from reservoir a, w44 from b.
SelfEnergySet self_energy_set(const GoeDraw& dr, const ModelParams& params);

/// Variant that reuses precomputed eigensystems.
SelfEnergySet self_energy_set(const EigenSystem<double>& eig_a, const EigenSystem<double>& eig_b,
                              const GoeDraw& dr, const ModelParams& params);

}  // namespace goe_transit
