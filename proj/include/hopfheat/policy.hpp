#pragma once

#include <stdexcept>

namespace hopfheat {

// Raised when a truncation/quadrature policy cannot deliver its tolerance.
struct PolicyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Precision { Auto, Double, Extended };

struct EvalPolicy {
  double tol = 1e-14;       // relative truncation tolerance
  double t_switch = 0.5;    // direct theta sum below, dual sum above
  int quad_nodes = 400;     // minimum node count for the y- and phi-integrals
  double y_cut = 12.0;      // integration half-width in units of sqrt(t), beyond theta
  int max_index = 10000;    // series gives up past this k or |n|
  Precision precision = Precision::Auto;
  int haar_r_nodes = 64;    // Gauss-Legendre nodes in r for haar_quadrature
  int haar_angle_nodes = 64;  // trapezoid nodes in each chart angle

  void validate() const {
    if (!(tol > 0)) throw std::invalid_argument("EvalPolicy: tol must be positive");
    if (quad_nodes < 16) throw std::invalid_argument("EvalPolicy: quad_nodes must be >= 16");
    if (!(t_switch > 0)) throw std::invalid_argument("EvalPolicy: t_switch must be positive");
    if (!(y_cut > 0)) throw std::invalid_argument("EvalPolicy: y_cut must be positive");
    if (haar_r_nodes < 2 || haar_angle_nodes < 2)
      throw std::invalid_argument("EvalPolicy: quadrature grids need >= 2 nodes per axis");
  }
};

}  // namespace hopfheat
