#include "emtrack/capacity.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "emtrack/errors.hpp"

namespace emtrack::capacity {

using specfun::VshCoeffs;

void TangentialField::check_tangency(double tol) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = values[i].norm();
    if (a == 0.0) continue;
    if (std::abs(dot(values[i], grid->normals[i])) > tol * std::max(1.0, a))
      throw ValueError("tangential field has a normal component");
  }
}

TangentialField tangential_part(const forward::SphereGrid& grid, double kappa,
                                const std::vector<CVec3>& field) {
  if (field.size() != grid.size()) throw GridMismatch("tangential_part: size mismatch");
  TangentialField f;
  f.grid = &grid;
  f.kappa = kappa;
  f.values.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Vec3& nu = grid.normals[i];
    f.values[i] = field[i] - CVec3(nu) * dot(field[i], nu);
  }
  return f;
}

namespace {

void check_degree(const forward::SphereGrid& grid, int max_degree) {
  if (max_degree < 1) throw IndexError("vsh degree must be >= 1");
  if (max_degree > grid.max_degree())
    throw AliasError("vsh degree exceeds 2/3 of the grid band-limit");
}

}  // namespace

VshCoeffs vsh_expand(const TangentialField& f, int max_degree) {
  const forward::SphereGrid& grid = *f.grid;
  check_degree(grid, max_degree);
  VshCoeffs c(max_degree);
  const double inv_r2 = 1.0 / (grid.radius * grid.radius);
  std::vector<CVec3> u, v;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    specfun::vsh_eval_all(max_degree, grid.thetas[i], grid.phis[i], u, v);
    const double w = grid.weights[i] * inv_r2;
    const CVec3& val = f.values[i];
    for (std::size_t s = 0; s < c.size(); ++s) {
      c.u_all()[s] += w * hdot(u[s], val);
      c.v_all()[s] += w * hdot(v[s], val);
    }
  }
  return c;
}

TangentialField vsh_synthesize(const forward::SphereGrid& grid, double kappa, const VshCoeffs& c) {
  TangentialField f;
  f.grid = &grid;
  f.kappa = kappa;
  f.values.assign(grid.size(), CVec3{});
  std::vector<CVec3> u, v;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    specfun::vsh_eval_all(c.max_degree(), grid.thetas[i], grid.phis[i], u, v);
    CVec3 acc;
    for (std::size_t s = 0; s < c.size(); ++s) {
      acc += u[s] * c.u_all()[s];
      acc += v[s] * c.v_all()[s];
    }
    f.values[i] = acc;
  }
  return f;
}

CompletionResult vsh_complete_masked(const TangentialField& f, const std::vector<bool>& keep,
                                     int max_degree) {
  const forward::SphereGrid& grid = *f.grid;
  check_degree(grid, max_degree);
  if (keep.size() != grid.size()) throw GridMismatch("vsh_complete_masked: mask size");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) idx.push_back(i);
  if (idx.empty()) throw ValueError("vsh_complete_masked: empty aperture");
  const VshCoeffs probe(max_degree);
  const std::size_t ncoef = probe.size();
  // Rows: 3 Cartesian components per kept node, weighted by sqrt(w).
  Eigen::MatrixXcd a(3 * idx.size(), 2 * ncoef);
  Eigen::VectorXcd b(3 * idx.size());
  std::vector<CVec3> u, v;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const std::size_t i = idx[r];
    const double sw = std::sqrt(grid.weights[i]);
    specfun::vsh_eval_all(max_degree, grid.thetas[i], grid.phis[i], u, v);
    for (std::size_t s = 0; s < ncoef; ++s) {
      a(3 * r + 0, s) = sw * u[s].x;
      a(3 * r + 1, s) = sw * u[s].y;
      a(3 * r + 2, s) = sw * u[s].z;
      a(3 * r + 0, ncoef + s) = sw * v[s].x;
      a(3 * r + 1, ncoef + s) = sw * v[s].y;
      a(3 * r + 2, ncoef + s) = sw * v[s].z;
    }
    b(3 * r + 0) = sw * f.values[i].x;
    b(3 * r + 1) = sw * f.values[i].y;
    b(3 * r + 2) = sw * f.values[i].z;
  }
  const Eigen::VectorXcd sol = a.colPivHouseholderQr().solve(b);
  CompletionResult out{VshCoeffs(max_degree), 0.0};
  for (std::size_t s = 0; s < ncoef; ++s) {
    out.coeffs.u_all()[s] = sol(static_cast<Eigen::Index>(s));
    out.coeffs.v_all()[s] = sol(static_cast<Eigen::Index>(ncoef + s));
  }
  const double bnorm = b.norm();
  out.residual = bnorm > 0.0 ? (a * sol - b).norm() / bnorm : 0.0;
  return out;
}

VshCoeffs capacity_apply(const VshCoeffs& c, double kappa, double radius) {
  if (kappa <= 0.0) throw DomainError("capacity_apply: kappa must be positive");
  const int N = c.max_degree();
  VshCoeffs h(N);
  const cplx iu(0.0, 1.0);
  // Radiating means causal under the e^{-i kappa t} window transform, so the
  // radial factor is z h_n^(2)(z) = conj(z h_n^(1)(z)) for real z.
  for (int n = 1; n <= N; ++n) {
    const cplx L = specfun::riccati_hankel2_log_derivative(n, kappa * radius);
    for (int m = -n; m <= n; ++m) {
      const std::size_t s = VshCoeffs::slot(n, m);
      h.u_all()[s] = iu * L * c.v_all()[s];
      h.v_all()[s] = iu / L * c.u_all()[s];
    }
  }
  return h;
}

double tbc_residual(const TangentialField& e_trace, const TangentialField& curl_trace,
                    double kappa, int max_degree) {
  if (e_trace.grid != curl_trace.grid) throw GridMismatch("tbc_residual: traces on different grids");
  if (e_trace.kappa != curl_trace.kappa) throw GridMismatch("tbc_residual: frequency mismatch");
  const forward::SphereGrid& grid = *e_trace.grid;
  const VshCoeffs ec = vsh_expand(e_trace, max_degree);
  const VshCoeffs hc = capacity_apply(ec, kappa, grid.radius);
  const TangentialField h_tan = vsh_synthesize(grid, kappa, hc);
  const cplx iu(0.0, 1.0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3& nu = grid.normals[i];
    const CVec3 lhs = cross(curl_trace.values[i], nu);
    const CVec3 rhs = (iu * kappa) * cross(h_tan.values[i], nu);
    const CVec3 diff = lhs - rhs;
    num += grid.weights[i] * (std::norm(diff.x) + std::norm(diff.y) + std::norm(diff.z));
    den += grid.weights[i] * (std::norm(lhs.x) + std::norm(lhs.y) + std::norm(lhs.z));
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

std::vector<CVec3> curl_trace_from_electric(const forward::SphereGrid& grid, double kappa,
                                            const std::vector<CVec3>& e_field, int max_degree) {
  const TangentialField e_tan = tangential_part(grid, kappa, e_field);
  const VshCoeffs ec = vsh_expand(e_tan, max_degree);
  const VshCoeffs hc = capacity_apply(ec, kappa, grid.radius);
  const TangentialField h_tan = vsh_synthesize(grid, kappa, hc);
  std::vector<CVec3> curl(grid.size());
  const cplx iu(0.0, 1.0);
  // curl E = i kappa H for the radiating extension; only the tangential part
  // is produced (the radial part is annihilated by every x nu pairing).
  for (std::size_t i = 0; i < grid.size(); ++i) curl[i] = (iu * kappa) * h_tan.values[i];
  return curl;
}

MieTraces mie_multipole_traces(const forward::SphereGrid& grid, double kappa, int n, int m,
                               bool electric_type, bool outgoing) {
  if (n < 1 || std::abs(m) > n) throw IndexError("mie_multipole_traces: bad (n,m)");
  const double z = kappa * grid.radius;
  // Outgoing/causal waves carry h^(2)(z) = conj(h^(1)(z)) phases under the
  // e^{-i kappa t} transform convention; incoming probes use h^(1).
  const cplx h = outgoing ? std::conj(specfun::sph_hankel1(n, z)) : specfun::sph_hankel1(n, z);
  const cplx hp = outgoing ? std::conj(specfun::sph_hankel1_prime(n, z))
                           : specfun::sph_hankel1_prime(n, z);
  const cplx zeta_prime = h + z * hp;  // d/dz (z h_n(z))
  const double root = std::sqrt(n * (n + 1.0));
  MieTraces out;
  out.e_trace.resize(grid.size());
  out.curl_trace.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [U, V] = specfun::vsh_eval(n, m, grid.thetas[i], grid.phis[i]);
    const cplx y = specfun::sph_harmonic(n, m, grid.thetas[i], grid.phis[i]);
    const CVec3 radial = CVec3(grid.normals[i]) * (n * (n + 1.0) * h / z * y);
    const CVec3 m_wave = -root * h * V;
    const CVec3 n_wave = radial + (zeta_prime / z * root) * U;
    if (electric_type) {
      out.e_trace[i] = n_wave;                 // E = N multipole
      out.curl_trace[i] = kappa * m_wave;      // curl N = kappa M
    } else {
      out.e_trace[i] = m_wave;                 // E = M multipole
      out.curl_trace[i] = kappa * n_wave;      // curl M = kappa N
    }
  }
  return out;
}

}  // namespace emtrack::capacity
