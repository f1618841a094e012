#pragma once

#include <utility>
#include <vector>

#include "nfsic/common.hpp"
#include "nfsic/kernels.hpp"
#include "nfsic/sample.hpp"

namespace nfsic {

// Computed test core: witness vector, covariance estimate and statistic.
struct NfsicState {
  Vector u_hat;       // length J
  Matrix sigma_hat;   // J x J, symmetric PSD
  double gamma;       // ridge actually used in the solve
  double lambda_hat;  // n u' (Sigma + gamma I)^-1 u
  bool gamma_adjusted = false;  // fallback bump was needed
};

// K[i][j] = k(v_i, x_j), L[i][j] = l(w_i, y_j); both J x n.
std::pair<Matrix, Matrix> compute_kl(const JointSample& sample,
                                     const GaussianKernel& kx,
                                     const GaussianKernel& ky,
                                     const TestLocations& locs);

// Unbiased witness estimate: u = (K.L)1/(n-1) - (K1).(L1)/(n(n-1)).
Vector u_hat(const Matrix& K, const Matrix& L);

// Biased (V-statistic) variant: u_b = (K.L)1/n - (K1).(L1)/n^2.
Vector u_hat_biased(const Matrix& K, const Matrix& L);

// Covariance estimate Sigma = Gamma Gamma'/n with
// Gamma = (K - rowmean(K)) . (L - rowmean(L)) - u_b 1'.
Matrix sigma_hat(const Matrix& K, const Matrix& L, const Vector& u_biased);

// Statistic from precomputed kernel matrices. Solves the SPD system
// (Sigma + gamma I) s = u via Cholesky; on factorization failure retries
// once with gamma <- max(gamma, 1e-6) * 10 and flags the adjustment.
NfsicState nfsic_from_kl(const Matrix& K, const Matrix& L,
                         double gamma = kDefaultGamma);

NfsicState nfsic_statistic(const JointSample& sample, const GaussianKernel& kx,
                           const GaussianKernel& ky, const TestLocations& locs,
                           double gamma = kDefaultGamma);

// Unnormalized criterion (1/J) u'u.
double fsic_statistic(const JointSample& sample, const GaussianKernel& kx,
                      const GaussianKernel& ky, const TestLocations& locs);

// Per-location scalar fields of the J=1 statistic surface.
struct WitnessPoint {
  double mu_xy;      // (1/n) sum_i k(x_i,v) l(y_i,w)
  double mu_x_mu_y;  // unbiased product-of-marginals estimate
  double sigma;      // scalar covariance estimate
  double lambda;     // n (mu_xy - mu_x_mu_y)^2 / (sigma + gamma)
};

std::vector<WitnessPoint> witness_surface(const JointSample& sample,
                                          const GaussianKernel& kx,
                                          const GaussianKernel& ky,
                                          const TestLocations& grid,
                                          double gamma = kDefaultGamma);

}  // namespace nfsic
