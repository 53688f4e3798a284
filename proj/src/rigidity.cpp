#include "hopfheat/rigidity.hpp"

#include <cmath>
#include <numbers>

#include "hopfheat/parallel.hpp"

namespace hopfheat {

double model_kernel(int dim, const GroupElement& x, const GroupElement& y) {
  const auto pc = pair_coords(x, y);
  if (dim == 4) return std::cos(pc.theta) * std::cos(pc.r);
  if (dim == 3) return std::cos(2 * pc.r);
  throw std::invalid_argument("embedding dimension must be 4 or 3");
}

EmbeddingModel make_model(int dim, const std::vector<GroupElement>& base_points) {
  if (int(base_points.size()) != dim) throw std::invalid_argument("make_model: need dim base points");
  EmbeddingModel m;
  m.dim = dim;
  m.base_points = base_points;
  m.gram.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m.gram(i, j) = i == j ? 1.0 : model_kernel(dim, base_points[i], base_points[j]);
  m.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.gram, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (!(m.min_eigenvalue >= 1e-6))
    throw ConditioningError("Gram matrix is not positive definite (min eigenvalue " +
                            std::to_string(m.min_eigenvalue) + ")");
  Eigen::LLT<Eigen::MatrixXd> llt(m.gram);
  if (llt.info() != Eigen::Success) throw ConditioningError("Cholesky factorization of the Gram matrix failed");
  m.factor = llt.matrixU();
  return m;
}

EmbeddingModel select_base_points(const HaarSample& sample, int dim) {
  if (dim != 3 && dim != 4) throw std::invalid_argument("embedding dimension must be 4 or 3");
  if (sample.size() < std::size_t(dim)) throw std::invalid_argument("select_base_points: sample too small");
  std::vector<std::size_t> ids{0};
  std::vector<GroupElement> pts{sample.points[0]};
  while (int(ids.size()) < dim) {
    const int m = int(ids.size());
    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) A(i, j) = i == j ? 1.0 : model_kernel(dim, pts[i], pts[j]);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    // det grows by the Schur complement 1 - c^T A^{-1} c when a candidate is appended
    const auto schur = parallel_map<double>(sample.size(), [&](std::size_t k) {
      Eigen::VectorXd c(m);
      for (int i = 0; i < m; ++i) c(i) = model_kernel(dim, pts[i], sample.points[k]);
      return 1.0 - c.dot(ldlt.solve(c));
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < schur.size(); ++k)
      if (schur[k] > schur[best]) best = k;
    ids.push_back(best);
    pts.push_back(sample.points[best]);
  }
  auto model = make_model(dim, pts);
  model.base_point_ids = ids;
  return model;
}

Eigen::VectorXd embed(const EmbeddingModel& model, const GroupElement& x) {
  Eigen::VectorXd c(model.dim);
  for (int j = 0; j < model.dim; ++j) c(j) = model_kernel(model.dim, x, model.base_points[j]);
  // M^{-T} c
  return model.factor.transpose().triangularView<Eigen::Lower>().solve(c);
}

Eigen::Vector4d embed_S3(const EmbeddingModel& model, const GroupElement& x) {
  if (model.dim != 4) throw std::invalid_argument("embed_S3 needs the 4-point model");
  return embed(model, x);
}

Eigen::Vector3d embed_S2(const EmbeddingModel& model, const GroupElement& x) {
  if (model.dim != 3) throw std::invalid_argument("embed_S2 needs the 3-point model");
  return embed(model, x);
}

double vector_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return 2 * std::atan2((u - v).norm(), (u + v).norm());
}

EmbeddingReport isometry_report(const EmbeddingModel& m3, const EmbeddingModel& m2,
                                const std::vector<GroupElement>& points, std::uint64_t seed) {
  EmbeddingReport rep;
  rep.seed = seed;
  rep.min_gram_eigenvalue = m3.min_eigenvalue;
  rep.min_gram_eigenvalue_s2 = m2.min_eigenvalue;
  rep.base_point_ids = m3.base_point_ids;
  rep.base_point_ids_s2 = m2.base_point_ids;
  const std::size_t npairs = points.size() / 2;
  rep.pairs = parallel_map<PairResidual>(npairs, [&](std::size_t p) {
    const auto& x = points[2 * p];
    const auto& y = points[2 * p + 1];
    const auto pc = pair_coords(x, y);
    PairResidual res{2 * p, 2 * p + 1, 0, 0};
    res.s3 = std::abs(vector_angle(embed(m3, x), embed(m3, y)) - pc.delta);
    res.s2 = std::abs(vector_angle(embed(m2, x), embed(m2, y)) - 2 * pc.r);
    return res;
  });
  rep.pairs_checked = npairs;
  for (const auto& p : rep.pairs) {
    rep.max_residual_s3 = std::max(rep.max_residual_s3, p.s3);
    rep.max_residual_s2 = std::max(rep.max_residual_s2, p.s2);
  }
  rep.max_isometry_residual = std::max(rep.max_residual_s3, rep.max_residual_s2);
  return rep;
}

SubmersionReport check_submersion(const EmbeddingModel& m3, const EmbeddingModel& m2, const GroupElement& x,
                                  const std::function<double(double)>& direction, int n_steps, double h,
                                  int substeps) {
  if (n_steps < 1 || !(h > 0) || substeps < 1) throw std::invalid_argument("check_submersion: bad step spec");
  SubmersionReport rep;
  rep.steps = n_steps;
  const double dh = h / substeps;
  GroupElement v = x;
  Eigen::VectorXd e3 = embed(m3, v), e2 = embed(m2, v);
  for (int i = 0; i < n_steps; ++i) {
    for (int j = 0; j < substeps; ++j) v = horizontal_step(v, direction((i * substeps + j + 0.5) * dh), dh);
    const Eigen::VectorXd n3 = embed(m3, v), n2 = embed(m2, v);
    rep.length_s3 += vector_angle(e3, n3);
    rep.half_length_s2 += 0.5 * vector_angle(e2, n2);
    e3 = n3;
    e2 = n2;
  }
  rep.error = std::abs(rep.length_s3 - rep.half_length_s2);
  rep.ratio = rep.length_s3 / rep.half_length_s2;
  return rep;
}

SubmersionReport check_submersion(const EmbeddingModel& m3, const EmbeddingModel& m2, const GroupElement& x,
                                  double direction, int n_steps, double h) {
  return check_submersion(m3, m2, x, [direction](double) { return direction; }, n_steps, h, 1);
}

std::vector<GroupElement> great_arc(const GroupElement& x, double z, int samples) {
  if (!(z > 0 && z < std::numbers::pi)) throw std::invalid_argument("great_arc: z must lie in (0, pi)");
  const Eigen::Vector4d a = x.coeffs(), b = (x * GroupElement::exp_z(z)).coeffs();
  std::vector<GroupElement> arc;
  arc.reserve(samples);
  for (int j = 1; j <= samples; ++j) {
    const double s = double(j) / (samples + 1);
    const Eigen::Vector4d p = (std::sin((1 - s) * z) * a + std::sin(s * z) * b) / std::sin(z);
    arc.emplace_back(p(0), p(1), p(2), p(3));
  }
  return arc;
}

double check_fiber_geodesic(const GroupElement& x, double z) {
  double worst = 0;
  for (const auto& g : great_arc(x, z)) worst = std::max(worst, pair_coords(x, g).r);
  return worst;
}

double theta_fiber_average(int n, const GroupElement& x, const Fiber& f, int nodes) {
  double acc = 0;
  for (int j = 0; j < nodes; ++j) {
    const double s = -std::numbers::pi + 2 * std::numbers::pi * j / nodes;
    acc += std::cos(n * pair_coords(x, f.at(s)).theta);
  }
  return 2 * acc / nodes;
}

namespace {

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  Eigen::MatrixXd X(xs.size(), 2);
  Eigen::VectorXd Y(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    X(i, 0) = 1;
    X(i, 1) = std::log(xs[i]);
    Y(i) = std::log(ys[i]);
  }
  return X.colPivHouseholderQr().solve(Y)(1);
}

}  // namespace

VolumeFit volume_growth_fit(const HaarSample& sample, const GroupElement& center, const std::vector<double>& radii) {
  if (radii.size() < 2) throw std::invalid_argument("volume_growth_fit: need at least two radii");
  VolumeFit fit;
  fit.radii = radii;
  const auto coords = parallel_map<PairCoords>(sample.size(), [&](std::size_t i) {
    return pair_coords(center, sample.points[i]);
  });
  for (double rho : radii) {
    if (!(rho > 0)) throw std::invalid_argument("volume_growth_fit: radii must be positive");
    double m3 = 0, mq = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i].delta <= rho) m3 += sample.weights[i];
      if (coords[i].r <= rho) mq += sample.weights[i];
    }
    if (m3 == 0 || mq == 0) throw std::domain_error("volume_growth_fit: empty ball at radius " + std::to_string(rho));
    fit.mass_s3.push_back(m3);
    fit.mass_quotient.push_back(mq);
  }
  fit.slope_s3 = fit_slope(radii, fit.mass_s3);
  fit.slope_quotient = fit_slope(radii, fit.mass_quotient);
  return fit;
}

VolumeFit volume_growth_fit(const HaarSample& sample, std::size_t n_centers, const std::vector<double>& radii) {
  if (radii.size() < 2) throw std::invalid_argument("volume_growth_fit: need at least two radii");
  if (n_centers < 1 || n_centers > sample.size() || sample.size() < 2)
    throw std::invalid_argument("volume_growth_fit: bad center count");
  for (double rho : radii)
    if (!(rho > 0)) throw std::invalid_argument("volume_growth_fit: radii must be positive");
  const std::size_t nr = radii.size(), N = sample.size();
  // delta <= rho  <=>  Re a(x^{-1} y) >= cos rho;  r <= rho  <=>  |a(x^{-1} y)| >= cos rho
  std::vector<double> cos_rho(nr);
  for (std::size_t k = 0; k < nr; ++k) cos_rho[k] = std::cos(radii[k]);
  std::vector<Eigen::Vector4d> q(N);
  for (std::size_t i = 0; i < N; ++i) q[i] = sample.points[i].coeffs();
  struct Counts {
    std::vector<long> s3, quotient;
  };
  const auto per_center = parallel_map<Counts>(n_centers, [&](std::size_t c) {
    Counts out{std::vector<long>(nr, 0), std::vector<long>(nr, 0)};
    const auto xc = sample.points[c].inverse();
    for (std::size_t i = 0; i < N; ++i) {
      if (i == c) continue;
      const auto g = xc * sample.points[i];
      const double re = g.q0(), mod = std::hypot(g.q0(), g.q3());
      for (std::size_t k = 0; k < nr; ++k) {
        out.s3[k] += re >= cos_rho[k];
        out.quotient[k] += mod >= cos_rho[k];
      }
    }
    return out;
  });
  VolumeFit fit;
  fit.radii = radii;
  const double pairs = double(n_centers) * double(N - 1);
  for (std::size_t k = 0; k < nr; ++k) {
    long a = 0, b = 0;
    for (const auto& pc : per_center) {
      a += pc.s3[k];
      b += pc.quotient[k];
    }
    if (a == 0 || b == 0)
      throw std::domain_error("volume_growth_fit: empty ball at radius " + std::to_string(radii[k]));
    fit.mass_s3.push_back(a / pairs);
    fit.mass_quotient.push_back(b / pairs);
  }
  fit.slope_s3 = fit_slope(radii, fit.mass_s3);
  fit.slope_quotient = fit_slope(radii, fit.mass_quotient);
  return fit;
}

}  // namespace hopfheat
