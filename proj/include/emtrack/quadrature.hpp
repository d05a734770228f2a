#pragma once

#include <functional>
#include <vector>

#include "emtrack/geom.hpp"

namespace emtrack {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes by Newton iteration on P_n; accurate to machine precision for n <= 512.
GaussRule gauss_legendre(int n);

// Same rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

// Adaptive Gauss-Kronrod (15-point) integration of a complex-valued function.
cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  double abs_tol = 1e-12, int max_depth = 30);
double integrate_gk_real(const std::function<double(double)>& f, double a, double b,
                         double abs_tol = 1e-12, int max_depth = 30);

// Product quadrature over the ball |y| < radius:
// Gauss-Legendre radial x (Gauss-Legendre in cos(theta) x uniform azimuth).
struct BallQuad {
  std::vector<Vec3> nodes;
  std::vector<double> weights;  // include r^2 sin(theta) Jacobian
  double radius = 0.0;
};

BallQuad ball_quadrature(double radius, int n_radial, int n_polar, int n_azimuth);

// Global quadrature scale hook (env EMTRACK_QUAD_SCALE); multiplies the order
// arguments of the scenario-level factories. Returns 1.0 when unset.
double quad_scale();
int scaled_order(int base);

}  // namespace emtrack
