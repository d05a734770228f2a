#pragma once

#include <vector>

#include "emtrack/geom.hpp"

namespace emtrack::specfun {

// Spherical Bessel functions of the first/second kind and the outgoing
// Hankel function h_n^(1) = j_n + i y_n. Stable for n <= 200, x in [1e-3, 1e3].
double sph_bessel_j(int n, double x);
double sph_bessel_y(int n, double x);
cplx sph_hankel1(int n, double x);

// Derivatives via f_n' = f_{n-1} - (n+1)/x f_n.
double sph_bessel_j_prime(int n, double x);
double sph_bessel_y_prime(int n, double x);
cplx sph_hankel1_prime(int n, double x);

// Fills j_0..j_n (and optionally y_0..y_n) in one recurrence sweep.
void sph_bessel_j_array(int n, double x, std::vector<double>& out);
void sph_bessel_y_array(int n, double x, std::vector<double>& out);

// Logarithmic derivative of the Riccati-Hankel function zeta_n(z) = z h_n^(1)(z):
// zeta_n'(x)/zeta_n(x), computed from the Hankel ratio recurrence so it stays
// finite for large n where h_n itself overflows.
cplx riccati_hankel_log_derivative(int n, double x);

// Same for the incoming function z h_n^(2)(z); used by the non-radiating probe.
cplx riccati_hankel2_log_derivative(int n, double x);

// Fully normalized associated Legendre values P̄_n^m(cos θ) for m >= 0,
// including the Condon-Shortley phase. N(n,m) = sqrt((2n+1)(n-m)!/(4π (n+m)!)).
// Output is packed by l for a single m: out[l-m] = P̄_l^m, l = m..n.
void legendre_normalized(int n, int m, double cos_theta, std::vector<double>& out);

// One tangential vector-spherical-harmonic pair at (theta, phi):
//   U_nm = grad_S Y_nm / sqrt(n(n+1)),   V_nm = r̂ × U_nm,
// both expressed in Cartesian components on the unit sphere.
struct VshPair {
  CVec3 U;
  CVec3 V;
};
VshPair vsh_eval(int n, int m, double theta, double phi);

// Scalar spherical harmonic Y_nm(theta, phi).
cplx sph_harmonic(int n, int m, double theta, double phi);

// All scalar harmonics and their theta-derivatives for n <= N at one point.
// Linear index: n^2 + n + m (so n = 0 occupies slot 0).
inline std::size_t sh_slot(int n, int m) {
  return static_cast<std::size_t>(n) * n + static_cast<std::size_t>(n + m);
}
void sh_eval_all(int max_degree, double theta, double phi, std::vector<cplx>& out_y,
                 std::vector<cplx>& out_dy_dtheta);

// Coefficients over both tangential families up to degree N.
// Linear index for (n,m): n^2 - 1 + (m + n), n = 1..N, |m| <= n.
class VshCoeffs {
 public:
  VshCoeffs() = default;
  explicit VshCoeffs(int max_degree);

  int max_degree() const { return degree_; }
  std::size_t size() const { return u_.size(); }
  static std::size_t slot(int n, int m);

  cplx& u(int n, int m) { return u_[slot(n, m)]; }
  cplx& v(int n, int m) { return v_[slot(n, m)]; }
  cplx u(int n, int m) const { return u_[slot(n, m)]; }
  cplx v(int n, int m) const { return v_[slot(n, m)]; }

  const std::vector<cplx>& u_all() const { return u_; }
  const std::vector<cplx>& v_all() const { return v_; }
  std::vector<cplx>& u_all() { return u_; }
  std::vector<cplx>& v_all() { return v_; }

  double norm() const;

 private:
  int degree_ = 0;
  std::vector<cplx> u_;  // gradient family
  std::vector<cplx> v_;  // surface-rotation family
};

// Evaluates all U/V harmonics for n <= N at one point; out arrays are indexed
// by VshCoeffs::slot. Used by expansion/synthesis hot loops.
void vsh_eval_all(int max_degree, double theta, double phi,
                  std::vector<CVec3>& out_u, std::vector<CVec3>& out_v);

}  // namespace emtrack::specfun
