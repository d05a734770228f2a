#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gmp.h>

#include <cmath>
#include <complex>

#include "emtrack/forward.hpp"
#include "emtrack/quadrature.hpp"
#include "emtrack/errors.hpp"
#include "emtrack/specfun.hpp"

using namespace emtrack;
namespace sf = emtrack::specfun;

namespace {

// Independent series oracle in 4096-bit arithmetic:
// j_n(x) = x^n Sum_k (-x^2/2)^k / (k! (2n+2k+1)!!).
// The alternating series cancels catastrophically for large x, hence GMP.
double bessel_j_series(int n, double x) {
  mpf_set_default_prec(4096);
  mpf_t term, sum, q, tmp;
  mpf_inits(term, sum, q, tmp, nullptr);
  mpf_set_d(term, 1.0);
  for (int k = 1; k <= 2 * n + 1; k += 2) mpf_div_ui(term, term, static_cast<unsigned>(k));
  mpf_set(sum, term);
  mpf_set_d(q, -x * x / 2.0);
  for (int k = 1; k < 2000; ++k) {
    mpf_mul(term, term, q);
    mpf_div_ui(term, term, static_cast<unsigned>(k));
    mpf_div_ui(term, term, static_cast<unsigned>(2 * n + 2 * k + 1));
    mpf_add(sum, sum, term);
    mpf_abs(tmp, term);
    if (mpf_get_d(tmp) == 0.0 && k > 10 + static_cast<int>(x)) break;
  }
  const double series = mpf_get_d(sum);
  mpf_clears(term, sum, q, tmp, nullptr);
  return std::pow(x, n) * series;
}

}  // namespace

TEST_CASE("gauss-legendre exactness and interval mapping") {
  const GaussRule g = gauss_legendre(12, 0.0, 1.0);
  double sum = 0.0, cube = 0.0;
  for (int i = 0; i < 12; ++i) {
    sum += g.weights[i];
    cube += g.weights[i] * g.nodes[i] * g.nodes[i] * g.nodes[i];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cube == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("adaptive gauss-kronrod on smooth and oscillatory integrands") {
  const double s = integrate_gk_real([](double t) { return std::sin(t); }, 0.0, kPi);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
  const cplx osc = integrate_gk([](double t) { return std::polar(1.0, -25.0 * t); }, 0.0, 1.0);
  const cplx exact = (1.0 - std::polar(1.0, -25.0)) / cplx(0.0, 25.0);
  CHECK(std::abs(osc - exact) < 1e-12);
}

TEST_CASE("ball quadrature integrates volume and smooth moments") {
  const BallQuad q = ball_quadrature(1.5, 16, 12, 24);
  double vol = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    vol += q.weights[i];
    m2 += q.weights[i] * q.nodes[i].norm2();
  }
  CHECK(vol == doctest::Approx(4.0 / 3.0 * kPi * std::pow(1.5, 3)).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(4.0 * kPi * std::pow(1.5, 5) / 5.0).epsilon(1e-12));
}

TEST_CASE("spherical bessel closed forms") {
  CHECK(sf::sph_bessel_j(0, 1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
  const cplx h0 = sf::sph_hankel1(0, 2.0);
  const cplx expect = -cplx(0.0, 1.0) * std::exp(cplx(0.0, 2.0)) / 2.0;
  CHECK(std::abs(h0 - expect) < 1e-14);
}

TEST_CASE("wronskian identity j_n y_n' - j_n' y_n = 1/x^2") {
  const double x = 3.7;
  const int n = 5;
  const double w = sf::sph_bessel_j(n, x) * sf::sph_bessel_y_prime(n, x) -
                   sf::sph_bessel_j_prime(n, x) * sf::sph_bessel_y(n, x);
  CHECK(w == doctest::Approx(1.0 / (x * x)).epsilon(1e-12));
}

TEST_CASE("bessel j against series oracle across the stability split") {
  for (int n : {0, 1, 2, 5, 10, 17, 25, 30}) {
    for (double x : {0.05, 0.4, 1.0, 3.0, 8.0, 20.0, 50.0}) {
      const double ref = bessel_j_series(n, x);
      const double got = sf::sph_bessel_j(n, x);
      if (std::abs(ref) > 1e-280) {
        CHECK(std::abs(got - ref) <= 1e-10 * std::abs(ref));
      }
    }
  }
}

TEST_CASE("wronskian across a wide (n, x) sweep") {
  for (int n : {1, 8, 40, 100, 200}) {
    for (double x : {1e-3, 0.1, 2.0, 30.0, 500.0}) {
      const double jn = sf::sph_bessel_j(n, x);
      const double jp = sf::sph_bessel_j_prime(n, x);
      const double yn = sf::sph_bessel_y(n, x);
      const double yp = sf::sph_bessel_y_prime(n, x);
      if (!std::isfinite(yn) || !std::isfinite(yp)) continue;  // beyond double range
      const double w = jn * yp - jp * yn;
      CHECK(w == doctest::Approx(1.0 / (x * x)).epsilon(1e-11));
    }
  }
}

TEST_CASE("riccati-hankel logarithmic derivative matches direct evaluation") {
  for (int n : {1, 3, 9, 15}) {
    for (double z : {0.7, 2.0, 10.0}) {
      const cplx h = sf::sph_hankel1(n, z);
      const cplx hp = sf::sph_hankel1_prime(n, z);
      const cplx direct = (h + z * hp) / (z * h);
      const cplx got = sf::riccati_hankel_log_derivative(n, z);
      CHECK(std::abs(got - direct) < 1e-11 * std::abs(direct));
    }
  }
  // Large order, small argument: ratio stays finite where h_n overflows.
  const cplx big = sf::riccati_hankel_log_derivative(180, 0.05);
  CHECK(std::isfinite(big.real()));
  CHECK(std::isfinite(big.imag()));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(sf::sph_bessel_j(3, 0.0), DomainError);
  CHECK_THROWS_AS(sf::sph_bessel_j(3, -1.0), DomainError);
  CHECK_THROWS_AS(sf::vsh_eval(2, 3, 1.0, 0.0), IndexError);
}

TEST_CASE("vsh closed form at the equator for n=1, m=0") {
  // Y_10 = sqrt(3/4pi) cos(theta); U_10 = dY/dtheta theta_hat / sqrt(2).
  const auto [U, V] = sf::vsh_eval(1, 0, kPi / 2.0, 0.3);
  const double expect = std::sqrt(3.0 / (4.0 * kPi)) / std::sqrt(2.0);
  CHECK(std::abs(U.z - cplx(expect, 0.0)) < 1e-14);  // theta_hat = -z at equator
  CHECK(std::abs(U.x) < 1e-14);
  CHECK(std::abs(U.y) < 1e-14);
  // V = r_hat x U points along phi_hat.
  CHECK(std::abs(V.z) < 1e-14);
}

TEST_CASE("vsh orthonormality under sphere quadrature") {
  const forward::SphereGrid grid = forward::make_sphere_grid(1.0, 20, 40);
  auto surface_dot = [&](int n1, int m1, bool fam_u1, int n2, int m2, bool fam_u2) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto [U1, V1] = sf::vsh_eval(n1, m1, grid.thetas[i], grid.phis[i]);
      const auto [U2, V2] = sf::vsh_eval(n2, m2, grid.thetas[i], grid.phis[i]);
      const CVec3& a = fam_u1 ? U1 : V1;
      const CVec3& b = fam_u2 ? U2 : V2;
      acc += grid.weights[i] * hdot(a, b);
    }
    return acc;
  };
  CHECK(std::abs(surface_dot(1, 0, true, 1, 0, false)) < 1e-10);        // U:V orthogonal
  CHECK(std::abs(surface_dot(2, 1, true, 2, 1, true) - 1.0) < 1e-10);   // |U_21| = 1
  CHECK(std::abs(surface_dot(2, 1, false, 2, 1, false) - 1.0) < 1e-10); // |V_21| = 1
  CHECK(std::abs(surface_dot(3, -2, true, 2, 1, true)) < 1e-10);        // cross degree
  CHECK(std::abs(surface_dot(4, 2, false, 4, -2, false)) < 1e-10);      // cross order
}

TEST_CASE("vsh orthonormality holds up to the grid 2/3 degree") {
  const forward::SphereGrid grid = forward::make_sphere_grid(2.0, 18, 36);
  const int N = grid.max_degree();
  std::vector<CVec3> u, v;
  // Gram diagonal for a sample of degrees up to N (surface measure / R^2).
  for (int n : {1, N / 2 > 0 ? N / 2 : 1, N}) {
    cplx uu = 0.0, vv = 0.0, uv = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sf::vsh_eval_all(N, grid.thetas[i], grid.phis[i], u, v);
      const std::size_t s = sf::VshCoeffs::slot(n, std::min(n, 1));
      const double w = grid.weights[i] / (grid.radius * grid.radius);
      uu += w * hdot(u[s], u[s]);
      vv += w * hdot(v[s], v[s]);
      uv += w * hdot(u[s], v[s]);
    }
    CHECK(std::abs(uu - 1.0) < 1e-10);
    CHECK(std::abs(vv - 1.0) < 1e-10);
    CHECK(std::abs(uv) < 1e-10);
  }
}
