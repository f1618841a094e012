#include "nfsic/statistic.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

namespace nfsic {

namespace {

void check_dims(const JointSample& sample, const TestLocations& locs) {
  if (sample.dx() != locs.vs.cols()) {
    throw InputError("locations/sample dx mismatch: " +
                     std::to_string(locs.vs.cols()) + " vs " +
                     std::to_string(sample.dx()));
  }
  if (sample.dy() != locs.ws.cols()) {
    throw InputError("locations/sample dy mismatch: " +
                     std::to_string(locs.ws.cols()) + " vs " +
                     std::to_string(sample.dy()));
  }
}

// K[i][j] = exp(-||r_i - p_j||^2 / (2 s2)) for location rows r and point
// rows p, computed from the norm expansion in one pass.
Matrix cross_kernel(const Matrix& locs_rows, const Matrix& point_rows,
                    double width_sq) {
  const Vector loc_sq = locs_rows.rowwise().squaredNorm();
  const Vector pt_sq = point_rows.rowwise().squaredNorm();
  Matrix d2 = (-2.0 * locs_rows * point_rows.transpose());
  d2.colwise() += loc_sq;
  d2.rowwise() += pt_sq.transpose();
  // Guard tiny negative squared distances from cancellation.
  return (d2.array().max(0.0) * (-0.5 / width_sq)).exp().matrix();
}

}  // namespace

std::pair<Matrix, Matrix> compute_kl(const JointSample& sample,
                                     const GaussianKernel& kx,
                                     const GaussianKernel& ky,
                                     const TestLocations& locs) {
  check_dims(sample, locs);
  return {cross_kernel(locs.vs, sample.xs, kx.width_sq),
          cross_kernel(locs.ws, sample.ys, ky.width_sq)};
}

Vector u_hat(const Matrix& K, const Matrix& L) {
  const auto n = K.cols();
  if (n < 2) throw InputError("u_hat: need n >= 2");
  const Vector kl = (K.array() * L.array()).rowwise().sum();
  const Vector k1 = K.rowwise().sum();
  const Vector l1 = L.rowwise().sum();
  const double nd = static_cast<double>(n);
  return kl / (nd - 1.0) - (k1.array() * l1.array()).matrix() / (nd * (nd - 1.0));
}

Vector u_hat_biased(const Matrix& K, const Matrix& L) {
  const double nd = static_cast<double>(K.cols());
  const Vector kl = (K.array() * L.array()).rowwise().sum();
  const Vector k1 = K.rowwise().sum();
  const Vector l1 = L.rowwise().sum();
  return kl / nd - (k1.array() * l1.array()).matrix() / (nd * nd);
}

Matrix sigma_hat(const Matrix& K, const Matrix& L, const Vector& u_biased) {
  const auto n = K.cols();
  if (n < 2) throw InputError("sigma_hat: need n >= 2");
  const double nd = static_cast<double>(n);
  Matrix kc = K.colwise() - (K.rowwise().mean()).eval();
  Matrix lc = L.colwise() - (L.rowwise().mean()).eval();
  Matrix gamma = (kc.array() * lc.array()).matrix();
  gamma.colwise() -= u_biased;
  Matrix sigma = gamma * gamma.transpose() / nd;
  sigma = 0.5 * (sigma + sigma.transpose()).eval();  // exact symmetry
  return sigma;
}

namespace {

// Solve (sigma + gamma I) s = u and return n u's; throws on failure.
double solve_lambda(const Matrix& sigma, const Vector& u, double gamma,
                    double n, bool& ok) {
  Matrix a = sigma;
  a.diagonal().array() += gamma;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    ok = false;
    return 0.0;
  }
  const Vector s = llt.solve(u);
  ok = true;
  return std::max(0.0, n * u.dot(s));
}

}  // namespace

NfsicState nfsic_from_kl(const Matrix& K, const Matrix& L, double gamma) {
  if (gamma < 0.0 || !std::isfinite(gamma)) {
    throw InputError("nfsic: gamma must be nonnegative");
  }
  const auto n = K.cols();
  if (n < 2) throw InputError("nfsic: need n >= 2");

  NfsicState state;
  state.u_hat = u_hat(K, L);
  state.sigma_hat = sigma_hat(K, L, u_hat_biased(K, L));
  state.gamma = gamma;

  bool ok = false;
  double lambda =
      solve_lambda(state.sigma_hat, state.u_hat, gamma, static_cast<double>(n), ok);
  if (!ok) {
    const double bumped = std::max(gamma, 1e-6) * 10.0;
    lambda = solve_lambda(state.sigma_hat, state.u_hat, bumped,
                          static_cast<double>(n), ok);
    if (!ok) {
      throw SingularCovarianceError(
          "nfsic: (sigma_hat + gamma I) is numerically singular at gamma = " +
          std::to_string(bumped) + "; rerun with a larger gamma");
    }
    state.gamma = bumped;
    state.gamma_adjusted = true;
  }
  state.lambda_hat = lambda;
  return state;
}

NfsicState nfsic_statistic(const JointSample& sample, const GaussianKernel& kx,
                           const GaussianKernel& ky, const TestLocations& locs,
                           double gamma) {
  const auto [K, L] = compute_kl(sample, kx, ky, locs);
  return nfsic_from_kl(K, L, gamma);
}

double fsic_statistic(const JointSample& sample, const GaussianKernel& kx,
                      const GaussianKernel& ky, const TestLocations& locs) {
  const auto [K, L] = compute_kl(sample, kx, ky, locs);
  const Vector u = u_hat(K, L);
  return u.squaredNorm() / static_cast<double>(locs.count());
}

std::vector<WitnessPoint> witness_surface(const JointSample& sample,
                                          const GaussianKernel& kx,
                                          const GaussianKernel& ky,
                                          const TestLocations& grid,
                                          double gamma) {
  check_dims(sample, grid);
  const int n = sample.n();
  if (n < 2) throw InputError("witness_surface: need n >= 2");
  const double nd = static_cast<double>(n);

  const auto [K, L] = compute_kl(sample, kx, ky, grid);
  std::vector<WitnessPoint> out;
  out.reserve(static_cast<std::size_t>(grid.count()));
  for (int i = 0; i < grid.count(); ++i) {
    const auto k = K.row(i).array();
    const auto l = L.row(i).array();
    const double sum_kl = (k * l).sum();
    const double sum_k = k.sum();
    const double sum_l = l.sum();
    WitnessPoint pt;
    pt.mu_xy = sum_kl / nd;
    pt.mu_x_mu_y = (sum_k * sum_l - sum_kl) / (nd * (nd - 1.0));
    const double u = pt.mu_xy - pt.mu_x_mu_y;
    const double u_b = pt.mu_xy - (sum_k / nd) * (sum_l / nd);
    const auto kc = k - sum_k / nd;
    const auto lc = l - sum_l / nd;
    pt.sigma = ((kc * lc - u_b).square()).sum() / nd;
    pt.lambda = nd * u * u / (pt.sigma + gamma);
    out.push_back(pt);
  }
  return out;
}

}  // namespace nfsic
