#include "emtrack/forward.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "emtrack/errors.hpp"
#include "emtrack/parallel.hpp"
#include "emtrack/specfun.hpp"

namespace emtrack::forward {

int SphereGrid::max_degree() const {
  const int band = std::min(n_polar - 1, n_azimuth / 2 - 1);
  return 2 * band / 3;
}

SphereGrid make_sphere_grid(double radius, int n_polar, int n_azimuth) {
  if (radius <= 0.0) throw ValueError("sphere grid: radius must be positive");
  if (n_polar < 2 || n_azimuth < 4) throw ValueError("sphere grid: order too small");
  SphereGrid g;
  g.radius = radius;
  g.n_polar = n_polar;
  g.n_azimuth = n_azimuth;
  const GaussRule pol = gauss_legendre(n_polar, -1.0, 1.0);
  const double dphi = 2.0 * kPi / n_azimuth;
  const std::size_t count = static_cast<std::size_t>(n_polar) * n_azimuth;
  g.nodes.reserve(count);
  g.normals.reserve(count);
  g.weights.reserve(count);
  g.thetas.reserve(count);
  g.phis.reserve(count);
  for (int i = 0; i < n_polar; ++i) {
    const double ct = pol.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double theta = std::acos(ct);
    const double w = pol.weights[i] * dphi * radius * radius;
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = dphi * (j + 0.5);
      const Vec3 nu{st * std::cos(phi), st * std::sin(phi), ct};
      g.normals.push_back(nu);
      g.nodes.push_back(nu * radius);
      g.weights.push_back(w);
      g.thetas.push_back(theta);
      g.phis.push_back(phi);
    }
  }
  return g;
}

namespace {

// Shared retarded-potential engine: accumulates, per receiver, the full time
// series of the Kirchhoff volume potential. The time loop per quadrature node
// is clipped to the pulse support window [r, r + T0].
template <typename Density>
void retarded_series(const std::vector<Vec3>& receivers, const BallQuad& quad, double pulse_end,
                     double dt, std::size_t n_steps, const Density& f, std::vector<Vec3>& out) {
  out.assign(receivers.size() * n_steps, Vec3{});
  parallel_for(receivers.size(), [&](std::size_t rec) {
    Vec3* row = out.data() + rec * n_steps;
    const Vec3 x = receivers[rec];
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
      const Vec3& y = quad.nodes[q];
      const double r = (x - y).norm();
      const double scale = quad.weights[q] / (4.0 * kPi * r);
      const auto k_lo = static_cast<std::size_t>(std::max(0.0, std::ceil(r / dt)));
      const auto k_hi_d = std::floor((r + pulse_end) / dt);
      if (k_hi_d < 0.0) continue;
      const std::size_t k_hi = std::min(n_steps - 1, static_cast<std::size_t>(k_hi_d));
      for (std::size_t k = k_lo; k <= k_hi && k < n_steps; ++k) {
        const double s = dt * static_cast<double>(k) - r;
        row[k] += f(y, s) * scale;
      }
    }
  });
}

std::vector<double> simpson_weights(std::size_t n_samples, double dt) {
  if (n_samples < 2) throw ValueError("simpson: need at least two samples");
  std::vector<double> w(n_samples, 0.0);
  const std::size_t n_int = n_samples - 1;
  if (n_samples == 2) {
    w[0] = w[1] = 0.5 * dt;  // trapezoid fallback
    return w;
  }
  std::size_t simpson_end = n_int;  // number of intervals covered by 1-4-2 Simpson
  const bool odd = (n_int % 2) != 0;
  if (odd) simpson_end = n_int - 3;  // close with a 3/8 panel
  if (simpson_end >= 2) {
    w[0] += dt / 3.0;
    w[simpson_end] += dt / 3.0;
    for (std::size_t k = 1; k < simpson_end; ++k) w[k] += (k % 2 == 1 ? 4.0 : 2.0) * dt / 3.0;
  }
  if (odd) {
    const std::size_t b = simpson_end;
    w[b] += 3.0 * dt / 8.0;
    w[b + 1] += 9.0 * dt / 8.0;
    w[b + 2] += 9.0 * dt / 8.0;
    w[b + 3] += 3.0 * dt / 8.0;
  }
  return w;
}

}  // namespace

Vec3 retarded_field(const model::Scenario& s, const SourceSpec& src, const Vec3& x, double t,
                    const VolumeQuad& q) {
  if (src.pulse.kind() != model::PulseKind::SmoothBump)
    throw KindError("retarded_field: impulsive pulses route to delta_field");
  if (t <= 0.0) return {};
  const double ball = s.source_ball_radius();
  if (q.n_radial < static_cast<int>(8.0 * ball / s.hat_r))
    throw ValueError("retarded_field: radial quadrature under-resolves the profile");
  const BallQuad quad = ball_quadrature(ball, q.n_radial, q.n_polar, q.n_azimuth);
  Vec3 acc{};
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const Vec3& y = quad.nodes[i];
    const double r = (x - y).norm();
    const double s_ret = t - r;
    if (s_ret <= 0.0 || s_ret >= src.pulse.support_end()) continue;
    acc += src.density(y, s_ret) * (quad.weights[i] / (4.0 * kPi * r));
  }
  return acc;
}

namespace {

// f̂(y, kappa) on the quadrature nodes: one time-quadrature sweep reused by
// every evaluation point.
std::vector<CVec3> source_time_transform(const SourceSpec& src, const BallQuad& quad, double kappa,
                                         int n_time) {
  const GaussRule tg = gauss_legendre(n_time, 0.0, src.pulse.support_end());
  std::vector<CVec3> fhat(quad.nodes.size());
  parallel_for(quad.nodes.size(), [&](std::size_t i) {
    CVec3 acc;
    for (int k = 0; k < n_time; ++k) {
      const double t = tg.nodes[k];
      const Vec3 f = src.density(quad.nodes[i], t);
      const cplx phase = std::polar(tg.weights[k], -kappa * t);
      acc += CVec3(f) * phase;
    }
    fhat[i] = acc;
  });
  return fhat;
}

int time_quad_order(double kappa, double pulse_end) {
  return std::max(48, static_cast<int>(8.0 * kappa * pulse_end / kPi) + 16);
}

}  // namespace

CVec3 frequency_field(const model::Scenario& s, const SourceSpec& src, const Vec3& x, double kappa,
                      const VolumeQuad& q) {
  if (kappa <= 0.0) throw DomainError("frequency_field: kappa must be positive");
  const double ball = s.source_ball_radius();
  if (x.norm() <= ball)
    throw DomainError("frequency_field: evaluation point inside the source ball");
  const BallQuad quad = ball_quadrature(ball, q.n_radial, q.n_polar, q.n_azimuth);
  const std::vector<CVec3> fhat =
      source_time_transform(src, quad, kappa, time_quad_order(kappa, src.pulse.support_end()));
  // The e^{-i kappa t} window transform of the causal (retarded) solution
  // carries the e^{-i kappa r} kernel; radiating means causal throughout.
  CVec3 acc;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const double r = (x - quad.nodes[i]).norm();
    const cplx g = std::polar(quad.weights[i] / (4.0 * kPi * r), -kappa * r);
    acc += fhat[i] * g;
  }
  return acc;
}

CVec3 frequency_field_curl(const model::Scenario& s, const SourceSpec& src, const Vec3& x,
                           double kappa, const VolumeQuad& q) {
  if (kappa <= 0.0) throw DomainError("frequency_field_curl: kappa must be positive");
  const double ball = s.source_ball_radius();
  if (x.norm() <= ball)
    throw DomainError("frequency_field_curl: evaluation point inside the source ball");
  const BallQuad quad = ball_quadrature(ball, q.n_radial, q.n_polar, q.n_azimuth);
  const std::vector<CVec3> fhat =
      source_time_transform(src, quad, kappa, time_quad_order(kappa, src.pulse.support_end()));
  CVec3 acc;
  const cplx iu(0.0, 1.0);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const Vec3 d = x - quad.nodes[i];
    const double r = d.norm();
    const cplx g = std::polar(quad.weights[i] / (4.0 * kPi * r), -kappa * r);
    const cplx radial = g * (-iu * kappa - 1.0 / r) / r;  // (dg/dr)/r along (x - y)
    acc += cross(CVec3(d) * radial, fhat[i]);
  }
  return acc;
}

Vec3 delta_field(const model::Scenario& s, const model::SourceProfile& profile, const Vec3& a0,
                 double t0, const Vec3& x, double t, int n_polar, int n_azimuth) {
  (void)s;
  const double rho = t - t0;
  if (rho <= 0.0) return {};
  const double hat_r = profile.support_radius();
  const Vec3 to_src = a0 - x;
  const double dist = to_src.norm();
  double mu_min = -1.0;
  Vec3 u{0.0, 0.0, 1.0};
  if (dist > 1e-14) {
    u = to_src / dist;
    const double c0 = (rho * rho + dist * dist - hat_r * hat_r) / (2.0 * rho * dist);
    if (c0 >= 1.0) return {};
    mu_min = std::max(-1.0, c0);
  } else if (rho >= hat_r) {
    return {};
  }
  // Orthonormal frame around the receiver-to-source axis.
  Vec3 e1 = std::abs(u.z) < 0.9 ? cross(u, Vec3{0.0, 0.0, 1.0}) : cross(u, Vec3{1.0, 0.0, 0.0});
  e1 = normalized(e1);
  const Vec3 e2 = cross(u, e1);
  const GaussRule pol = gauss_legendre(n_polar, mu_min, 1.0);
  const double dbeta = 2.0 * kPi / n_azimuth;
  Vec3 acc{};
  for (int i = 0; i < n_polar; ++i) {
    const double mu = pol.nodes[i];
    const double sm = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const double w = pol.weights[i] * dbeta;
    for (int j = 0; j < n_azimuth; ++j) {
      const double beta = dbeta * (j + 0.5);
      const Vec3 omega = u * mu + (e1 * std::cos(beta) + e2 * std::sin(beta)) * sm;
      const Vec3 y = x + omega * rho;
      acc += profile.eval(y - a0) * w;
    }
  }
  return acc * (rho / (4.0 * kPi));
}

SphereShTables make_sh_tables(const SphereGrid& grid, int max_degree) {
  SphereShTables t;
  t.degree = max_degree;
  t.n_slots = static_cast<std::size_t>(max_degree + 1) * (max_degree + 1);
  t.y.resize(grid.size() * t.n_slots);
  t.dy.resize(grid.size() * t.n_slots);
  std::vector<cplx> y, dy;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    specfun::sh_eval_all(max_degree, grid.thetas[i], grid.phis[i], y, dy);
    std::copy(y.begin(), y.end(), t.y.begin() + static_cast<std::ptrdiff_t>(i * t.n_slots));
    std::copy(dy.begin(), dy.end(), t.dy.begin() + static_cast<std::ptrdiff_t>(i * t.n_slots));
  }
  return t;
}

namespace {

// Tangential derivatives of a real scalar sampled on the grid via projection
// onto scalar spherical harmonics. Polynomial interpolation in cos(theta)
// would lose accuracy on odd-m content (sqrt(1-x^2) factors); the projection
// is exact for band-limited fields.
void tangential_derivatives(const SphereGrid& grid, const SphereShTables& t,
                            const double* f, std::vector<double>& dtheta,
                            std::vector<double>& dphi) {
  const std::size_t n = grid.size();
  const std::size_t slots = t.n_slots;
  std::vector<cplx> coef(slots, cplx{});
  const double inv_r2 = 1.0 / (grid.radius * grid.radius);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = grid.weights[i] * inv_r2 * f[i];
    const cplx* yi = t.y.data() + i * slots;
    for (std::size_t s = 0; s < slots; ++s) coef[s] += w * std::conj(yi[s]);
  }
  dtheta.assign(n, 0.0);
  dphi.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* yi = t.y.data() + i * slots;
    const cplx* dyi = t.dy.data() + i * slots;
    cplx dth{}, dph{};
    for (int deg = 0; deg <= t.degree; ++deg) {
      for (int m = -deg; m <= deg; ++m) {
        const std::size_t s = specfun::sh_slot(deg, m);
        dth += coef[s] * dyi[s];
        dph += coef[s] * cplx(0.0, m) * yi[s];
      }
    }
    dtheta[i] = dth.real();
    dphi[i] = dph.real();
  }
}

}  // namespace

std::vector<Vec3> sphere_curl_from_shells(const SphereGrid& grid, const SphereShTables& tables,
                                          double h, const std::array<const Vec3*, 5>& shells) {
  const std::size_t n = grid.size();
  std::vector<Vec3> out(n);
  std::vector<Vec3> dr(n);
  for (std::size_t i = 0; i < n; ++i) {
    dr[i] = (shells[0][i] - 8.0 * shells[1][i] + 8.0 * shells[3][i] - shells[4][i]) / (12.0 * h);
  }
  const Vec3* center = shells[2];
  std::vector<double> comp(n), dth(n), dph(n);
  std::vector<std::array<double, 3>> grad_theta(n), grad_phi(n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i)
      comp[i] = c == 0 ? center[i].x : (c == 1 ? center[i].y : center[i].z);
    tangential_derivatives(grid, tables, comp.data(), dth, dph);
    for (std::size_t i = 0; i < n; ++i) {
      grad_theta[i][static_cast<std::size_t>(c)] = dth[i];
      grad_phi[i][static_cast<std::size_t>(c)] = dph[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = grid.thetas[i], phi = grid.phis[i];
    const double stn = std::sin(theta), ctn = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    const Vec3 rhat{stn * cp, stn * sp, ctn};
    const Vec3 that{ctn * cp, ctn * sp, -stn};
    const Vec3 phat{-sp, cp, 0.0};
    const double inv_r = 1.0 / grid.radius;
    const double inv_rs = 1.0 / (grid.radius * stn);
    // grad E_c = (dr E_c) rhat + (dtheta E_c / R) that + (dphi E_c / (R sin)) phat
    Vec3 grad[3];
    const double drc[3] = {dr[i].x, dr[i].y, dr[i].z};
    for (int c = 0; c < 3; ++c) {
      grad[c] = rhat * drc[c] + that * (grad_theta[i][static_cast<std::size_t>(c)] * inv_r) +
                phat * (grad_phi[i][static_cast<std::size_t>(c)] * inv_rs);
    }
    out[i] = Vec3{grad[2].y - grad[1].z, grad[0].z - grad[2].x, grad[1].x - grad[0].y};
  }
  return out;
}

namespace {

template <typename Density>
FieldRecord record_engine(const model::Scenario& s, double support_radius, double pulse_end,
                          const SphereGrid& grid, const RecordRequest& req, const Density& f,
                          std::uint64_t source_hash) {
  if (req.dt <= 0.0) throw ValueError("record: dt must be positive");
  FieldRecord rec;
  rec.receivers = grid.nodes;
  rec.dt = req.dt;
  rec.t_start = 0.0;
  const double t_rec = req.t_record > 0.0 ? req.t_record : s.horizon;
  rec.n_steps = static_cast<std::size_t>(std::ceil(t_rec / req.dt)) + 1;
  rec.with_curl = req.with_curl;
  rec.source_hash = source_hash;
  const BallQuad quad =
      ball_quadrature(support_radius, req.quad.n_radial, req.quad.n_polar, req.quad.n_azimuth);

  if (!req.with_curl) {
    retarded_series(grid.nodes, quad, pulse_end, rec.dt, rec.n_steps, f, rec.e_samples);
    return rec;
  }

  // Five concentric shells; centre shell is the record itself.
  constexpr int kShells = 5;
  const double h = req.shell_offset * grid.radius;
  std::vector<Vec3> all_nodes;
  all_nodes.reserve(grid.size() * kShells);
  for (int c = -2; c <= 2; ++c) {
    const double scale = (grid.radius + c * h) / grid.radius;
    for (const Vec3& p : grid.nodes) all_nodes.push_back(p * scale);
  }
  std::vector<Vec3> series;
  retarded_series(all_nodes, quad, pulse_end, rec.dt, rec.n_steps, f, series);

  const std::size_t n = grid.size();
  rec.e_samples.assign(n * rec.n_steps, Vec3{});
  rec.curl_samples.assign(n * rec.n_steps, Vec3{});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < rec.n_steps; ++k)
      rec.e(i, k) = series[(2 * n + i) * rec.n_steps + k];

  const SphereShTables tables = make_sh_tables(grid, grid.max_degree());
  std::vector<Vec3> shell_buf(n * kShells);
  parallel_for(rec.n_steps, [&, tables = &tables](std::size_t k) {
    std::vector<Vec3> local(n * kShells);
    std::array<const Vec3*, 5> rows{};
    for (int c = 0; c < kShells; ++c) {
      for (std::size_t i = 0; i < n; ++i)
        local[static_cast<std::size_t>(c) * n + i] =
            series[(static_cast<std::size_t>(c) * n + i) * rec.n_steps + k];
      rows[static_cast<std::size_t>(c)] = local.data() + static_cast<std::size_t>(c) * n;
    }
    const std::vector<Vec3> curl = sphere_curl_from_shells(grid, *tables, h, rows);
    for (std::size_t i = 0; i < n; ++i) rec.curl(i, k) = curl[i];
  });
  (void)shell_buf;
  return rec;
}

}  // namespace

FieldRecord record_traces(const model::Scenario& s, const SourceSpec& src, const SphereGrid& grid,
                          const RecordRequest& req) {
  if (src.pulse.kind() != model::PulseKind::SmoothBump)
    throw KindError("record_traces: impulsive pulses route to record_impulsive");
  const auto density = [&src](const Vec3& y, double t) { return src.density(y, t); };
  return record_engine(s, s.source_ball_radius(), src.pulse.support_end(), grid, req, density,
                       0);
}

FieldRecord record_traces_planar(const model::Scenario& s, const PlanarSourceSpec& src,
                                 const SphereGrid& grid, const RecordRequest& req) {
  if (src.pulse.kind() != model::PulseKind::SmoothBump)
    throw KindError("record_traces_planar: smooth pulses only");
  src.source.validate(s.hat_r);
  const auto density = [&src](const Vec3& y, double t) { return src.density(y, t); };
  return record_engine(s, s.hat_r, src.pulse.support_end(), grid, req, density, 0);
}

FieldRecord record_impulsive(const model::Scenario& s, const model::SourceProfile& profile,
                             const model::Orbit& orbit, const model::TemporalPulse& pulse,
                             const std::vector<Vec3>& receivers, double dt, double t_record) {
  if (pulse.kind() == model::PulseKind::SmoothBump)
    throw KindError("record_impulsive: requires a Dirac pulse");
  if (dt <= 0.0) throw ValueError("record_impulsive: dt must be positive");
  FieldRecord rec;
  rec.receivers = receivers;
  rec.dt = dt;
  rec.n_steps = static_cast<std::size_t>(std::ceil(t_record / dt)) + 1;
  rec.e_samples.assign(receivers.size() * rec.n_steps, Vec3{});
  const auto& times = pulse.impulse_times();
  parallel_for(receivers.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < rec.n_steps; ++k) {
      const double t = rec.time_at(k);
      Vec3 acc{};
      for (double tj : times) {
        if (t <= tj) continue;
        acc += delta_field(s, profile, orbit.position(tj), tj, receivers[i], t);
      }
      rec.e(i, k) = acc;
    }
  });
  return rec;
}

double huygens_residual(const FieldRecord& rec, const model::Scenario& s) {
  if (rec.t_record() <= s.horizon)
    throw WindowError("huygens_residual: record must extend beyond the horizon T");
  double peak = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < rec.receivers.size(); ++i) {
    for (std::size_t k = 0; k < rec.n_steps; ++k) {
      const double a = rec.e(i, k).norm();
      peak = std::max(peak, a);
      if (rec.time_at(k) >= s.horizon) tail = std::max(tail, a);
    }
  }
  if (peak == 0.0) return 0.0;
  return tail / peak;
}

namespace {

std::vector<CVec3> transform_series(const FieldRecord& rec, const std::vector<Vec3>& samples,
                                    double kappa, double t_max) {
  std::size_t m = rec.n_steps;
  if (t_max > 0.0) {
    m = std::min(rec.n_steps,
                 static_cast<std::size_t>(std::floor((t_max - rec.t_start) / rec.dt)) + 1);
  }
  const std::vector<double> w = simpson_weights(m, rec.dt);
  std::vector<cplx> phase(m);
  for (std::size_t k = 0; k < m; ++k) phase[k] = std::polar(w[k], -kappa * rec.time_at(k));
  std::vector<CVec3> out(rec.receivers.size());
  for (std::size_t i = 0; i < rec.receivers.size(); ++i) {
    CVec3 acc;
    const Vec3* row = samples.data() + i * rec.n_steps;
    for (std::size_t k = 0; k < m; ++k) acc += CVec3(row[k]) * phase[k];
    out[i] = acc;
  }
  return out;
}

}  // namespace

std::vector<CVec3> time_fourier(const FieldRecord& rec, double kappa, double t_max) {
  return transform_series(rec, rec.e_samples, kappa, t_max);
}

std::vector<CVec3> time_fourier_curl(const FieldRecord& rec, double kappa, double t_max) {
  if (!rec.with_curl) throw ValueError("time_fourier_curl: record has no curl traces");
  return transform_series(rec, rec.curl_samples, kappa, t_max);
}

SpectralTrace spectral_trace(const FieldRecord& rec, const SphereGrid& grid,
                             const std::vector<double>& kappas, double t_max) {
  if (rec.receivers.size() != grid.size())
    throw GridMismatch("spectral_trace: record receivers do not match the grid");
  SpectralTrace tr;
  tr.grid = grid;
  tr.kappas = kappas;
  tr.with_curl = rec.with_curl;
  tr.e_hat.resize(kappas.size() * grid.size());
  if (rec.with_curl) tr.curl_hat.resize(kappas.size() * grid.size());
  parallel_for(kappas.size(), [&](std::size_t ik) {
    const auto e = time_fourier(rec, kappas[ik], t_max);
    for (std::size_t i = 0; i < grid.size(); ++i) tr.e(ik, i) = e[i];
    if (rec.with_curl) {
      const auto c = time_fourier_curl(rec, kappas[ik], t_max);
      for (std::size_t i = 0; i < grid.size(); ++i) tr.curl(ik, i) = c[i];
    }
  });
  return tr;
}

FieldRecord add_noise(const FieldRecord& rec, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw ValueError("add_noise: sigma must be non-negative");
  FieldRecord out = rec;
  out.noise_seed = seed;
  if (sigma == 0.0) return out;
  double peak = 0.0;
  for (const Vec3& v : rec.e_samples)
    peak = std::max({peak, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
  const double std_dev = sigma * peak;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std_dev);
  for (Vec3& v : out.e_samples) {
    v.x += gauss(rng);
    v.y += gauss(rng);
    v.z += gauss(rng);
  }
  for (Vec3& v : out.curl_samples) {
    v.x += gauss(rng);
    v.y += gauss(rng);
    v.z += gauss(rng);
  }
  return out;
}

}  // namespace emtrack::forward
