#include "nfsic/tuning.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "nfsic/rng.hpp"

namespace nfsic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRelImprovementStop = 1e-6;
constexpr int kMaxHalvings = 10;

struct ParamSpace {
  int J;
  int dx;
  int dy;
  std::pair<double, double> bounds_x;  // sigma^2 range
  std::pair<double, double> bounds_y;
};

struct Decoded {
  GaussianKernel kx;
  GaussianKernel ky;
  TestLocations locs;
};

std::pair<double, double> resolve_bounds(
    const std::optional<std::pair<double, double>>& requested,
    const Matrix& points) {
  if (requested) {
    if (!(requested->first > 0.0) || !(requested->first < requested->second)) {
      throw InputError("width bounds must satisfy 0 < lower < upper");
    }
    return *requested;
  }
  const double m = median_heuristic(points);
  return {1e-4 * m * m, 1e4 * m * m};
}

ParamSpace make_space(const JointSample& train, int J,
                      const TuningConfig& config) {
  ParamSpace space;
  space.J = J;
  space.dx = train.dx();
  space.dy = train.dy();
  space.bounds_x = resolve_bounds(config.width_bounds_x, train.xs);
  space.bounds_y = resolve_bounds(config.width_bounds_y, train.ys);
  return space;
}

int infer_j(const JointSample& train, const Vector& params) {
  const int per_loc = train.dx() + train.dy();
  const auto extra = params.size() - 2;
  if (extra < per_loc || extra % per_loc != 0) {
    throw InputError("parameter vector length does not match 2 + (dx+dy)J");
  }
  return static_cast<int>(extra / per_loc);
}

Decoded decode(const Vector& params, const ParamSpace& space) {
  const double s2x =
      std::clamp(std::exp(params[0]), space.bounds_x.first, space.bounds_x.second);
  const double s2y =
      std::clamp(std::exp(params[1]), space.bounds_y.first, space.bounds_y.second);
  Matrix vs(space.J, space.dx), ws(space.J, space.dy);
  int at = 2;
  for (int r = 0; r < space.J; ++r) {
    for (int d = 0; d < space.dx; ++d) vs(r, d) = params[at++];
  }
  for (int r = 0; r < space.J; ++r) {
    for (int d = 0; d < space.dy; ++d) ws(r, d) = params[at++];
  }
  return {GaussianKernel(s2x), GaussianKernel(s2y),
          TestLocations(std::move(vs), std::move(ws))};
}

double objective_impl(const JointSample& train, const Vector& params,
                      const ParamSpace& space, double gamma) {
  try {
    const Decoded dec = decode(params, space);
    const NfsicState state =
        nfsic_statistic(train, dec.kx, dec.ky, dec.locs, gamma);
    return std::isfinite(state.lambda_hat) ? state.lambda_hat : kNegInf;
  } catch (const SingularCovarianceError&) {
    return kNegInf;
  }
}

// -K log K elementwise with the 0 * log 0 -> 0 limit.
Matrix neg_k_log_k(const Matrix& K) {
  return (K.array() > 0.0)
      .select(-K.array() * K.array().log(), Matrix::Zero(K.rows(), K.cols()))
      .matrix();
}

Vector gradient_impl(const JointSample& train, const Vector& params,
                     const ParamSpace& space, double gamma) {
  const Decoded dec = decode(params, space);
  const int J = space.J;
  const int n = train.n();
  const double nd = static_cast<double>(n);

  const auto [K, L] = compute_kl(train, dec.kx, dec.ky, dec.locs);
  const Vector rk = K.rowwise().sum();
  const Vector rl = L.rowwise().sum();
  const Matrix kb = K.colwise() - (rk / nd).eval();
  const Matrix lb = L.colwise() - (rl / nd).eval();
  const Vector u = u_hat(K, L);
  const Vector ub = u_hat_biased(K, L);
  const Matrix m = (kb.array() * lb.array()).matrix();  // Kb . Lb
  Matrix sigma = m;
  sigma.colwise() -= ub;  // Gamma
  const Matrix gam = sigma;
  sigma = gam * gam.transpose() / nd;
  sigma = 0.5 * (sigma + sigma.transpose()).eval();

  // Same ridge policy as the statistic path.
  double eff_gamma = gamma;
  Matrix a = sigma;
  a.diagonal().array() += eff_gamma;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    eff_gamma = std::max(gamma, 1e-6) * 10.0;
    a = sigma;
    a.diagonal().array() += eff_gamma;
    llt.compute(a);
    if (llt.info() != Eigen::Success) {
      throw SingularCovarianceError("objective_gradient: singular covariance");
    }
  }
  const Vector s = llt.solve(u);
  const Vector g = gam.transpose() * s;  // length n
  const double sum_g = g.sum();
  const Vector t_vec = lb * g;  // t_i = sum_j Lb_ij g_j
  const Vector q_vec = kb * g;  // q_i = sum_j Kb_ij g_j

  Vector grad(params.size());

  // d / d log(s2x): dK = K . Q with Q_ij = ||v_i - x_j||^2 / (2 s2x).
  {
    const Matrix A = neg_k_log_k(K);
    const Vector a1 = A.rowwise().sum();
    const Vector al = (A.array() * L.array()).rowwise().sum();
    const Vector du = al / (nd - 1.0) -
                      (a1.array() * rl.array()).matrix() / (nd * (nd - 1.0));
    const Vector dub =
        al / nd - (a1.array() * rl.array()).matrix() / (nd * nd);
    const double term_gamma =
        s.dot(((A.array() * lb.array()).matrix()) * g) -
        (s.array() * a1.array() * t_vec.array()).sum() / nd -
        s.dot(dub) * sum_g;
    grad[0] = 2.0 * nd * s.dot(du) - 2.0 * term_gamma;
  }
  // d / d log(s2y).
  {
    const Matrix B = neg_k_log_k(L);
    const Vector b1 = B.rowwise().sum();
    const Vector kbv = (K.array() * B.array()).rowwise().sum();
    const Vector du = kbv / (nd - 1.0) -
                      (rk.array() * b1.array()).matrix() / (nd * (nd - 1.0));
    const Vector dub =
        kbv / nd - (rk.array() * b1.array()).matrix() / (nd * nd);
    const double term_gamma =
        s.dot(((kb.array() * B.array()).matrix()) * g) -
        (s.array() * b1.array() * q_vec.array()).sum() / nd -
        s.dot(dub) * sum_g;
    grad[1] = 2.0 * nd * s.dot(du) - 2.0 * term_gamma;
  }

  // Locations: row r of K depends on v_r only, likewise L on w_r.
  int at = 2;
  for (int r = 0; r < J; ++r) {
    const Eigen::ArrayXd krow = K.row(r).transpose().array();
    const Eigen::ArrayXd lrow = L.row(r).transpose().array();
    const Eigen::ArrayXd lbrow = lb.row(r).transpose().array();
    const Eigen::ArrayXd garr = g.array();
    for (int d = 0; d < space.dx; ++d) {
      const Eigen::ArrayXd diff =
          train.xs.col(d).array() - dec.locs.vs(r, d);
      const Eigen::ArrayXd av = krow * diff / dec.kx.width_sq;
      const double sum_a = av.sum();
      const double du_r = (av * lrow).sum() / (nd - 1.0) -
                          sum_a * rl[r] / (nd * (nd - 1.0));
      const double dub_r =
          (av * lrow).sum() / nd - sum_a * rl[r] / (nd * nd);
      const double term_gamma =
          s[r] * ((av * lbrow * garr).sum() - (sum_a / nd) * t_vec[r] -
                  dub_r * sum_g);
      grad[at++] = 2.0 * nd * s[r] * du_r - 2.0 * term_gamma;
    }
  }
  for (int r = 0; r < J; ++r) {
    const Eigen::ArrayXd krow = K.row(r).transpose().array();
    const Eigen::ArrayXd lrow = L.row(r).transpose().array();
    const Eigen::ArrayXd kbrow = kb.row(r).transpose().array();
    const Eigen::ArrayXd garr = g.array();
    for (int d = 0; d < space.dy; ++d) {
      const Eigen::ArrayXd diff =
          train.ys.col(d).array() - dec.locs.ws(r, d);
      const Eigen::ArrayXd bw = lrow * diff / dec.ky.width_sq;
      const double sum_b = bw.sum();
      const double du_r = (krow * bw).sum() / (nd - 1.0) -
                          rk[r] * sum_b / (nd * (nd - 1.0));
      const double dub_r =
          (krow * bw).sum() / nd - rk[r] * sum_b / (nd * nd);
      const double term_gamma =
          s[r] * ((kbrow * bw * garr).sum() - (sum_b / nd) * q_vec[r] -
                  dub_r * sum_g);
      grad[at++] = 2.0 * nd * s[r] * du_r - 2.0 * term_gamma;
    }
  }
  return grad;
}

Vector clamp_widths(Vector params, const ParamSpace& space) {
  params[0] = std::clamp(params[0], std::log(space.bounds_x.first),
                         std::log(space.bounds_x.second));
  params[1] = std::clamp(params[1], std::log(space.bounds_y.first),
                         std::log(space.bounds_y.second));
  return params;
}

}  // namespace

std::pair<JointSample, JointSample> split(const JointSample& sample,
                                          double train_fraction,
                                          std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InputError("split: train_fraction must be in (0, 1)");
  }
  const int n = sample.n();
  if (n < 4) throw InputError("split: need n >= 4");
  const int n_train = static_cast<int>(std::floor(n * train_fraction));
  const int n_test = n - n_train;
  if (n_train < 2 || n_test < 2) {
    throw InputError("split: a part would have fewer than 2 rows");
  }

  Rng rng(derive_seed(seed, 0x73706c6974ULL));
  const auto idx = rng.permutation(n);

  Matrix train_x(n_train, sample.dx()), train_y(n_train, sample.dy());
  Matrix test_x(n_test, sample.dx()), test_y(n_test, sample.dy());
  for (int i = 0; i < n_train; ++i) {
    train_x.row(i) = sample.xs.row(idx[i]);
    train_y.row(i) = sample.ys.row(idx[i]);
  }
  for (int i = 0; i < n_test; ++i) {
    test_x.row(i) = sample.xs.row(idx[n_train + i]);
    test_y.row(i) = sample.ys.row(idx[n_train + i]);
  }
  return {JointSample(std::move(train_x), std::move(train_y)),
          JointSample(std::move(test_x), std::move(test_y))};
}

Vector encode_params(const GaussianKernel& kx, const GaussianKernel& ky,
                     const TestLocations& locs) {
  const int J = locs.count();
  const int dx = static_cast<int>(locs.vs.cols());
  const int dy = static_cast<int>(locs.ws.cols());
  Vector params(2 + (dx + dy) * J);
  params[0] = std::log(kx.width_sq);
  params[1] = std::log(ky.width_sq);
  int at = 2;
  for (int r = 0; r < J; ++r) {
    for (int d = 0; d < dx; ++d) params[at++] = locs.vs(r, d);
  }
  for (int r = 0; r < J; ++r) {
    for (int d = 0; d < dy; ++d) params[at++] = locs.ws(r, d);
  }
  return params;
}

double objective(const JointSample& train, const Vector& params,
                 const TuningConfig& config) {
  const ParamSpace space = make_space(train, infer_j(train, params), config);
  return objective_impl(train, params, space, config.gamma);
}

Vector objective_gradient(const JointSample& train, const Vector& params,
                          const TuningConfig& config) {
  const ParamSpace space = make_space(train, infer_j(train, params), config);
  return gradient_impl(train, params, space, config.gamma);
}

TunedParams optimize(const JointSample& train, int J,
                     const TuningConfig& config) {
  if (J < 1) throw InputError("optimize: need J >= 1");
  if (J > train.n()) {
    throw InputError("optimize: J exceeds the number of training rows");
  }
  const ParamSpace space = make_space(train, J, config);

  // Initialization: median widths, J distinct training pairs with a small
  // jitter so locations never coincide exactly.
  Rng rng(derive_seed(config.seed, 0x696e6974ULL));
  const auto rows = rng.sample_without_replacement(train.n(), J);
  Matrix vs(J, space.dx), ws(J, space.dy);
  for (int r = 0; r < J; ++r) {
    for (int d = 0; d < space.dx; ++d) {
      vs(r, d) = train.xs(rows[r], d) + 1e-2 * rng.normal();
    }
    for (int d = 0; d < space.dy; ++d) {
      ws(r, d) = train.ys(rows[r], d) + 1e-2 * rng.normal();
    }
  }
  const double mx = median_heuristic(train.xs);
  const double my = median_heuristic(train.ys);
  const GaussianKernel kx0(
      std::clamp(mx * mx, space.bounds_x.first, space.bounds_x.second));
  const GaussianKernel ky0(
      std::clamp(my * my, space.bounds_y.first, space.bounds_y.second));

  Vector params = encode_params(kx0, ky0,
                                TestLocations(std::move(vs), std::move(ws)));
  double f = objective_impl(train, params, space, config.gamma);
  std::vector<double> trace{f};
  Vector best_params = params;
  double best_f = f;

  if (std::isfinite(f)) {
    for (int iter = 0; iter < config.max_iters; ++iter) {
      Vector grad;
      try {
        grad = gradient_impl(train, params, space, config.gamma);
      } catch (const SingularCovarianceError&) {
        break;
      }
      const double gmax = grad.cwiseAbs().maxCoeff();
      if (!(gmax > 0.0) || !std::isfinite(gmax)) break;
      grad /= gmax;

      double step = config.step_size;
      bool accepted = false;
      Vector cand;
      double fc = kNegInf;
      for (int h = 0; h <= kMaxHalvings; ++h) {
        cand = clamp_widths(params + step * grad, space);
        fc = objective_impl(train, cand, space, config.gamma);
        if (fc > f) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;

      const double rel = (fc - f) / std::max(std::abs(f), 1e-12);
      params = cand;
      f = fc;
      trace.push_back(f);
      if (f > best_f) {
        best_f = f;
        best_params = params;
      }
      if (rel < kRelImprovementStop) break;
    }
  }

  const Decoded dec = decode(best_params, space);
  return TunedParams{dec.kx, dec.ky, dec.locs, std::move(trace)};
}

TestOutcome adaptive_test(const JointSample& sample, int J, double alpha,
                          const TuningConfig& config) {
  const auto [train, test] =
      split(sample, config.train_fraction, config.seed);
  const TunedParams tuned = optimize(train, J, config);

  TestOutcome out;
  if (config.threshold == ThresholdMethod::chi2) {
    const NfsicState state = nfsic_statistic(test, tuned.kernel_x,
                                             tuned.kernel_y, tuned.locations,
                                             config.gamma);
    out = test_chi2(state, J, alpha);
  } else {
    out = test_permutation(test, tuned.kernel_x, tuned.kernel_y,
                           tuned.locations, config.gamma, alpha,
                           config.num_perms,
                           derive_seed(config.seed, 0x74657374ULL));
  }
  out.tuned = TunedReport{tuned.kernel_x.width_sq, tuned.kernel_y.width_sq,
                          tuned.locations};
  return out;
}

}  // namespace nfsic
