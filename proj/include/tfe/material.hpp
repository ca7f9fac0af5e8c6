// Hyperelastic constitutive laws expressed in terms of the displacement
// gradient K: stored energy W(K), first Piola-Kirchhoff stress P(K) =
// dW/dF at F = I + K, and the tangent operator A(K):M = dP/dK : M.
//
// States with det(I + K) <= 0 are outside the admissible set and raise
// InadmissibleState.
#pragma once

#include <Eigen/Dense>
#include <memory>

#include "tfe/core.hpp"

namespace tfe {

class Material {
 public:
  virtual ~Material() = default;
  virtual int dim() const = 0;
  virtual double energy(const Eigen::MatrixXd& K) const = 0;
  virtual Eigen::MatrixXd stress(const Eigen::MatrixXd& K) const = 0;
  /// Directional derivative of the stress: A(K) applied to M.
  virtual Eigen::MatrixXd tangent(const Eigen::MatrixXd& K,
                                  const Eigen::MatrixXd& M) const = 0;
};

/// Compressible neo-Hookean solid (plane strain in 2D):
///   W = mu/2 (I1 - 3) - mu/2 ln I3 + lambda/2 (ln I3)^2,
/// with F = I + K, I1 = tr(F^T F) + (3 - n), I3 = det(F^T F).
class NeoHookean : public Material {
 public:
  NeoHookean(int dim, double mu, double lambda);
  int dim() const override { return n_; }
  double mu() const { return mu_; }
  double lambda() const { return lambda_; }
  double energy(const Eigen::MatrixXd& K) const override;
  Eigen::MatrixXd stress(const Eigen::MatrixXd& K) const override;
  Eigen::MatrixXd tangent(const Eigen::MatrixXd& K,
                          const Eigen::MatrixXd& M) const override;

 private:
  /// F = I + K with the admissibility check (throws InadmissibleState).
  Eigen::MatrixXd deformation_gradient(const Eigen::MatrixXd& K) const;
  int n_;
  double mu_, lambda_;
};

}  // namespace tfe
