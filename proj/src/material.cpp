// Neo-Hookean constitutive law.

#include "tfe/material.hpp"

#include <cmath>
#include <stdexcept>

namespace tfe {

NeoHookean::NeoHookean(int dim, double mu, double lambda)
    : n_(dim), mu_(mu), lambda_(lambda) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("NeoHookean: dim must be 2 or 3");
  if (!(mu > 0) || !(lambda > 0))
    throw std::invalid_argument("NeoHookean: moduli must be positive");
}

Eigen::MatrixXd NeoHookean::deformation_gradient(
    const Eigen::MatrixXd& K) const {
  if (K.rows() != n_ || K.cols() != n_)
    throw std::invalid_argument("NeoHookean: displacement gradient shape");
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(n_, n_) + K;
  if (!(F.determinant() > 0.0))
    throw InadmissibleState(
        "deformation gradient is not orientation-preserving");
  return F;
}

double NeoHookean::energy(const Eigen::MatrixXd& K) const {
  Eigen::MatrixXd F = deformation_gradient(K);
  const double i1 = (F.transpose() * F).trace() + (3.0 - n_);
  const double lnI3 = 2.0 * std::log(F.determinant());
  return 0.5 * mu_ * (i1 - 3.0) - 0.5 * mu_ * lnI3 +
         0.5 * lambda_ * lnI3 * lnI3;
}

Eigen::MatrixXd NeoHookean::stress(const Eigen::MatrixXd& K) const {
  Eigen::MatrixXd F = deformation_gradient(K);
  const double lnI3 = 2.0 * std::log(F.determinant());
  Eigen::MatrixXd Fit = F.inverse().transpose();
  return mu_ * F + (2.0 * lambda_ * lnI3 - mu_) * Fit;
}

Eigen::MatrixXd NeoHookean::tangent(const Eigen::MatrixXd& K,
                                    const Eigen::MatrixXd& M) const {
  Eigen::MatrixXd F = deformation_gradient(K);
  if (M.rows() != n_ || M.cols() != n_)
    throw std::invalid_argument("NeoHookean: direction shape");
  const double lnI3 = 2.0 * std::log(F.determinant());
  Eigen::MatrixXd Fi = F.inverse();
  Eigen::MatrixXd Fit = Fi.transpose();
  return mu_ * M + (mu_ - 2.0 * lambda_ * lnI3) * Fit * M.transpose() * Fit +
         4.0 * lambda_ * (Fi * M).trace() * Fit;
}

}  // namespace tfe
