#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hopfheat/su2.hpp"

namespace hopfheat {

// Raised when no well-conditioned set of base points can be found.
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dim = 4: points x_1..x_4 of SU(2) with a_ij = cos theta cos r (the S^3 model);
// dim = 3: fiber representatives with b_ij = cos 2r (the S^2 model).
struct EmbeddingModel {
  int dim = 4;
  std::vector<GroupElement> base_points;
  std::vector<std::size_t> base_point_ids;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd factor;  // upper triangular M, gram = M^T M
  double min_eigenvalue = 0;
};

// kernel-side inner product used by the model of the given dimension
double model_kernel(int dim, const GroupElement& x, const GroupElement& y);

EmbeddingModel make_model(int dim, const std::vector<GroupElement>& base_points);
// greedy max-determinant selection from the sample
EmbeddingModel select_base_points(const HaarSample& sample, int dim);

Eigen::VectorXd embed(const EmbeddingModel& model, const GroupElement& x);
Eigen::Vector4d embed_S3(const EmbeddingModel& model, const GroupElement& x);
Eigen::Vector3d embed_S2(const EmbeddingModel& model, const GroupElement& x);

// angle between unit vectors, accurate at both ends of [0, pi]
double vector_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct PairResidual {
  std::size_t i = 0, j = 0;
  double s3 = 0;  // |angle(Phi x, Phi y) - delta(x, y)|
  double s2 = 0;  // |angle(Psi x, Psi y) - 2 r(x, y)|
};

struct EmbeddingReport {
  double min_gram_eigenvalue = 0;     // S^3 model
  double min_gram_eigenvalue_s2 = 0;  // S^2 model
  double max_isometry_residual = 0;   // over both models
  double max_residual_s3 = 0;
  double max_residual_s2 = 0;
  std::vector<std::size_t> base_point_ids;
  std::vector<std::size_t> base_point_ids_s2;
  std::size_t pairs_checked = 0;
  std::uint64_t seed = 0;
  std::vector<PairResidual> pairs;
};

// Residuals over consecutive pairs (x_{2i}, x_{2i+1}) of `points`.
EmbeddingReport isometry_report(const EmbeddingModel& m3, const EmbeddingModel& m2,
                                const std::vector<GroupElement>& points, std::uint64_t seed);

struct SubmersionReport {
  double length_s3 = 0;       // sum of chord angles of the polyline under Phi
  double half_length_s2 = 0;  // half the sum of chord angles under Psi
  double ratio = 1;
  double error = 0;  // |length_s3 - half_length_s2|
  int steps = 0;
};

// Horizontal curve from x with direction schedule phi(s), sampled every h for n_steps;
// each sampling interval is traced by `substeps` horizontal steps.
SubmersionReport check_submersion(const EmbeddingModel& m3, const EmbeddingModel& m2, const GroupElement& x,
                                  const std::function<double(double)>& direction, int n_steps, double h,
                                  int substeps = 64);
SubmersionReport check_submersion(const EmbeddingModel& m3, const EmbeddingModel& m2, const GroupElement& x,
                                  double direction, int n_steps, double h);

// Great-circle arc of S^3 from x to x exp(zZ) at 100 interior points.
std::vector<GroupElement> great_arc(const GroupElement& x, double z, int samples = 100);
// max over the arc of r(x, sample)
double check_fiber_geodesic(const GroupElement& x, double z);

// 2 * (1/2pi) int cos(n theta(x, y exp(sZ))) ds by the trapezoid rule
double theta_fiber_average(int n, const GroupElement& x, const Fiber& f, int nodes = 64);

struct VolumeFit {
  std::vector<double> radii;
  std::vector<double> mass_s3;        // empirical mu(B_delta(center, rho))
  std::vector<double> mass_quotient;  // empirical mu(r(center, .) <= rho)
  double slope_s3 = 0;
  double slope_quotient = 0;
};

VolumeFit volume_growth_fit(const HaarSample& sample, const GroupElement& center, const std::vector<double>& radii);
// Ball masses averaged over the first n_centers sample points used as centers (self-pairs
// excluded). Left-invariance makes every center's ball mass the same, so this estimates the
// same quantity with far less Monte Carlo noise than a single center.
VolumeFit volume_growth_fit(const HaarSample& sample, std::size_t n_centers, const std::vector<double>& radii);

}  // namespace hopfheat
