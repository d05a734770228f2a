#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "emtrack/capacity.hpp"
#include "emtrack/errors.hpp"

using namespace emtrack;
using namespace emtrack::capacity;
using specfun::VshCoeffs;

TEST_CASE("expand: single harmonic lands in its slot, zero stays zero") {
  const forward::SphereGrid grid = forward::make_sphere_grid(1.5, 16, 32);
  VshCoeffs c(6);
  c.u(3, -2) = cplx(0.7, -0.4);
  const TangentialField f = vsh_synthesize(grid, 1.0, c);
  const VshCoeffs back = vsh_expand(f, 6);
  CHECK(std::abs(back.u(3, -2) - c.u(3, -2)) < 1e-10);
  double leak = 0.0;
  for (std::size_t s = 0; s < back.size(); ++s) {
    if (s != VshCoeffs::slot(3, -2)) leak = std::max(leak, std::abs(back.u_all()[s]));
    leak = std::max(leak, std::abs(back.v_all()[s]) * (s == VshCoeffs::slot(3, -2) ? 1.0 : 1.0));
  }
  CHECK(leak < 1e-10);

  TangentialField zero;
  zero.grid = &grid;
  zero.kappa = 1.0;
  zero.values.assign(grid.size(), CVec3{});
  const VshCoeffs zc = vsh_expand(zero, 4);
  CHECK(zc.norm() == 0.0);
}

TEST_CASE("expand/synthesize round trip on a random band-limited field") {
  const forward::SphereGrid grid = forward::make_sphere_grid(2.0, 18, 36);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VshCoeffs c(8);
  for (std::size_t s = 0; s < c.size(); ++s) {
    c.u_all()[s] = cplx(gauss(rng), gauss(rng));
    c.v_all()[s] = cplx(gauss(rng), gauss(rng));
  }
  const TangentialField f = vsh_synthesize(grid, 2.0, c);
  f.check_tangency(1e-10);
  const VshCoeffs back = vsh_expand(f, 8);
  double err = 0.0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    err = std::max(err, std::abs(back.u_all()[s] - c.u_all()[s]));
    err = std::max(err, std::abs(back.v_all()[s] - c.v_all()[s]));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("alias guard") {
  const forward::SphereGrid grid = forward::make_sphere_grid(1.0, 12, 24);
  TangentialField f;
  f.grid = &grid;
  f.kappa = 1.0;
  f.values.assign(grid.size(), CVec3{});
  CHECK_THROWS_AS(vsh_expand(f, grid.max_degree() + 1), AliasError);
}

TEST_CASE("capacity_apply: zero, linearity, diagonality") {
  const double kappa = 1.3, radius = 2.0;
  VshCoeffs zero(5);
  CHECK(capacity_apply(zero, kappa, radius).norm() == 0.0);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VshCoeffs a(5), b(5);
  for (std::size_t s = 0; s < a.size(); ++s) {
    a.u_all()[s] = cplx(gauss(rng), gauss(rng));
    a.v_all()[s] = cplx(gauss(rng), gauss(rng));
    b.u_all()[s] = cplx(gauss(rng), gauss(rng));
    b.v_all()[s] = cplx(gauss(rng), gauss(rng));
  }
  const cplx alpha(0.3, -1.1), beta(-0.6, 0.2);
  VshCoeffs lin(5);
  for (std::size_t s = 0; s < a.size(); ++s) {
    lin.u_all()[s] = alpha * a.u_all()[s] + beta * b.u_all()[s];
    lin.v_all()[s] = alpha * a.v_all()[s] + beta * b.v_all()[s];
  }
  const VshCoeffs ta = capacity_apply(a, kappa, radius);
  const VshCoeffs tb = capacity_apply(b, kappa, radius);
  const VshCoeffs tl = capacity_apply(lin, kappa, radius);
  double err = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    err = std::max(err, std::abs(tl.u_all()[s] - alpha * ta.u_all()[s] - beta * tb.u_all()[s]));
    err = std::max(err, std::abs(tl.v_all()[s] - alpha * ta.v_all()[s] - beta * tb.v_all()[s]));
  }
  CHECK(err < 1e-12);
  // Diagonality: a single-slot input cannot excite other slots.
  VshCoeffs single(5);
  single.u(2, 1) = 1.0;
  const VshCoeffs ts = capacity_apply(single, kappa, radius);
  for (std::size_t s = 0; s < ts.size(); ++s) {
    if (s != VshCoeffs::slot(2, 1)) {
      CHECK(std::abs(ts.u_all()[s]) == 0.0);
      CHECK(std::abs(ts.v_all()[s]) == 0.0);
    }
  }
  CHECK_THROWS_AS(capacity_apply(a, -1.0, radius), DomainError);
}

TEST_CASE("capacity magnetic trace matches the exact Mie multipole") {
  const forward::SphereGrid grid = forward::make_sphere_grid(1.0, 20, 40);
  const double kappa = 2.0;
  for (int n : {1, 2, 4}) {
    for (bool electric : {true, false}) {
      const MieTraces mie = mie_multipole_traces(grid, kappa, n, 1, electric);
      const TangentialField e_tan = tangential_part(grid, kappa, mie.e_trace);
      const VshCoeffs ec = vsh_expand(e_tan, 8);
      const VshCoeffs hc = capacity_apply(ec, kappa, grid.radius);
      const TangentialField h_tan = vsh_synthesize(grid, kappa, hc);
      // Exact magnetic trace: H = curl E / (i kappa), tangential part.
      const cplx iu(0.0, 1.0);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3& nu = grid.normals[i];
        CVec3 h_exact = mie.curl_trace[i] * (1.0 / (iu * kappa));
        h_exact = h_exact - CVec3(nu) * dot(h_exact, nu);
        const CVec3 diff = h_exact - h_tan.values[i];
        num += grid.weights[i] * (std::norm(diff.x) + std::norm(diff.y) + std::norm(diff.z));
        den += grid.weights[i] *
               (std::norm(h_exact.x) + std::norm(h_exact.y) + std::norm(h_exact.z));
      }
      CHECK(std::sqrt(num / den) < 1e-9);
    }
  }
}

TEST_CASE("tbc residual: tiny for outgoing Mie fields, O(1) for incoming") {
  const forward::SphereGrid grid = forward::make_sphere_grid(1.0, 24, 48);
  for (double kr : {2.0, 5.0, 10.0}) {
    const double kappa = kr / grid.radius;
    const int N0 = static_cast<int>(std::ceil(kr)) + 4;
    for (int n : {1, 3, 7}) {
      const int N = std::min(grid.max_degree(), std::max(N0, n + 2));
      for (bool electric : {true, false}) {
        const MieTraces out = mie_multipole_traces(grid, kappa, n, std::min(n, 2), electric, true);
        const TangentialField e_tan = tangential_part(grid, kappa, out.e_trace);
        const TangentialField c_tan = tangential_part(grid, kappa, out.curl_trace);
        CHECK(tbc_residual(e_tan, c_tan, kappa, N) < 1e-8);
        // Incoming control: meaningful in the propagating regime n <= kR
        // (evanescent multipoles have incoming ~ outgoing near fields).
        if (n <= kr) {
          const MieTraces in =
              mie_multipole_traces(grid, kappa, n, std::min(n, 2), electric, false);
          const TangentialField e_in = tangential_part(grid, kappa, in.e_trace);
          const TangentialField c_in = tangential_part(grid, kappa, in.curl_trace);
          CHECK(tbc_residual(e_in, c_in, kappa, N) > 0.5);
        }
      }
    }
  }
  // Zero traces give zero residual.
  TangentialField z1, z2;
  const forward::SphereGrid g2 = forward::make_sphere_grid(1.0, 8, 16);
  z1.grid = &g2;
  z2.grid = &g2;
  z1.kappa = z2.kappa = 1.0;
  z1.values.assign(g2.size(), CVec3{});
  z2.values.assign(g2.size(), CVec3{});
  CHECK(tbc_residual(z1, z2, 1.0, 3) == 0.0);
}

TEST_CASE("masked completion recovers a band-limited trace from a partial aperture") {
  const forward::SphereGrid grid = forward::make_sphere_grid(1.0, 16, 32);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VshCoeffs c(4);
  for (std::size_t s = 0; s < c.size(); ++s) {
    c.u_all()[s] = cplx(gauss(rng), gauss(rng));
    c.v_all()[s] = cplx(gauss(rng), gauss(rng));
  }
  const TangentialField full = vsh_synthesize(grid, 1.0, c);
  // Keep a spherical cap complement: drop nodes within 50 degrees of +z.
  std::vector<bool> keep(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) keep[i] = grid.thetas[i] > 50.0 * kPi / 180.0;
  const CompletionResult res = vsh_complete_masked(full, keep, 4);
  CHECK(res.residual < 1e-8);
  double err = 0.0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    err = std::max(err, std::abs(res.coeffs.u_all()[s] - c.u_all()[s]));
    err = std::max(err, std::abs(res.coeffs.v_all()[s] - c.v_all()[s]));
  }
  CHECK(err < 1e-7);
}
