#pragma once

#include <cstdint>
#include <vector>

#include "emtrack/model.hpp"
#include "emtrack/quadrature.hpp"

namespace emtrack::forward {

// Quadrature grid on the sphere Gamma_R: Gauss-Legendre in the polar angle
// times a uniform azimuth rule. Weights sum to 4 pi R^2.
struct SphereGrid {
  double radius = 1.0;
  int n_polar = 0;
  int n_azimuth = 0;
  std::vector<Vec3> nodes;
  std::vector<Vec3> normals;      // outward unit normals  nu = node / R
  std::vector<double> weights;    // surface measure weights (include R^2)
  std::vector<double> thetas;     // per-node polar angle
  std::vector<double> phis;       // per-node azimuth

  std::size_t size() const { return nodes.size(); }
  // Largest VSH degree the grid can carry without aliasing (2/3 rule).
  int max_degree() const;
};

SphereGrid make_sphere_grid(double radius, int n_polar, int n_azimuth);

// Full source description for the wave-equation forward problem.
struct SourceSpec {
  model::SourceProfile profile;
  model::Orbit orbit;
  model::TemporalPulse pulse;

  Vec3 density(const Vec3& x, double t) const {
    return profile.eval(x - orbit.position(t)) * pulse.eval(t);
  }
};

// Planar variant (profile x vertical factor x pulse).
struct PlanarSourceSpec {
  model::PlanarSource source;
  model::TemporalPulse pulse;
  Vec3 density(const Vec3& x, double t) const { return source.density(x, t, pulse); }
};

// Volume quadrature specification for the retarded/frequency solvers.
struct VolumeQuad {
  int n_radial = 18;
  int n_polar = 14;
  int n_azimuth = 28;
};

// Sampled time series of E (and optionally curl E) at a set of receivers.
struct FieldRecord {
  std::vector<Vec3> receivers;
  double dt = 0.0;
  double t_start = 0.0;
  std::size_t n_steps = 0;  // number of samples per receiver
  bool with_curl = false;
  std::vector<Vec3> e_samples;      // receiver-major, time-minor
  std::vector<Vec3> curl_samples;   // same layout when with_curl
  std::uint64_t scenario_hash = 0;
  std::uint64_t source_hash = 0;
  std::uint64_t noise_seed = 0;

  double time_at(std::size_t k) const { return t_start + dt * static_cast<double>(k); }
  double t_record() const { return t_start + dt * static_cast<double>(n_steps - 1); }
  const Vec3& e(std::size_t rec, std::size_t k) const { return e_samples[rec * n_steps + k]; }
  Vec3& e(std::size_t rec, std::size_t k) { return e_samples[rec * n_steps + k]; }
  const Vec3& curl(std::size_t rec, std::size_t k) const { return curl_samples[rec * n_steps + k]; }
  Vec3& curl(std::size_t rec, std::size_t k) { return curl_samples[rec * n_steps + k]; }
};

// Frequency-domain samples on a sphere grid: Ê (and optionally curl Ê)
// per node per positive frequency; no conjugate symmetry is assumed.
struct SpectralTrace {
  SphereGrid grid;
  std::vector<double> kappas;
  bool with_curl = false;
  std::vector<CVec3> e_hat;      // kappa-major, node-minor
  std::vector<CVec3> curl_hat;   // same layout

  const CVec3& e(std::size_t ik, std::size_t node) const { return e_hat[ik * grid.size() + node]; }
  CVec3& e(std::size_t ik, std::size_t node) { return e_hat[ik * grid.size() + node]; }
  const CVec3& curl(std::size_t ik, std::size_t node) const { return curl_hat[ik * grid.size() + node]; }
  CVec3& curl(std::size_t ik, std::size_t node) { return curl_hat[ik * grid.size() + node]; }
};

// Kirchhoff retarded volume potential for the smooth-pulse source:
// E(x,t) = Int f(y, t-|x-y|) / (4 pi |x-y|) dy over the source ball.
Vec3 retarded_field(const model::Scenario& s, const SourceSpec& src, const Vec3& x, double t,
                    const VolumeQuad& quad);

// Time-harmonic field Ê(x,kappa) = Int g_kappa(x-y) f̂(y,kappa) dy, where
// f̂(y,kappa) = Int_0^T0 J(y - a(t)) g(t) e^{-i kappa t} dt and g_kappa is the
// outgoing Helmholtz kernel. Valid for x outside the source ball.
CVec3 frequency_field(const model::Scenario& s, const SourceSpec& src, const Vec3& x, double kappa,
                      const VolumeQuad& quad);
// curl_x of the same representation (kernel gradient crossed with f̂).
CVec3 frequency_field_curl(const model::Scenario& s, const SourceSpec& src, const Vec3& x,
                           double kappa, const VolumeQuad& quad);

// Impulsive-source field: surface integral of J(y - a0)/(4 pi |x-y|) over the
// sphere of radius t - t0 centred at x (zero when that sphere misses supp J).
Vec3 delta_field(const model::Scenario& s, const model::SourceProfile& profile, const Vec3& a0,
                 double t0, const Vec3& x, double t, int n_polar = 48, int n_azimuth = 96);

struct RecordRequest {
  double dt = 0.025;
  double t_record = 0.0;     // 0 -> scenario horizon
  bool with_curl = false;
  double shell_offset = 1e-3;  // relative offset of the curl differencing shells
  VolumeQuad quad;
};

// Samples E (and optionally curl E via 4th-order differencing across offset
// shells) at the grid nodes over [0, t_record].
FieldRecord record_traces(const model::Scenario& s, const SourceSpec& src, const SphereGrid& grid,
                          const RecordRequest& req);

// Planar-source variant of record_traces (same engine, planar density).
FieldRecord record_traces_planar(const model::Scenario& s, const PlanarSourceSpec& src,
                                 const SphereGrid& grid, const RecordRequest& req);

// Record E at arbitrary receivers for an impulsive source (Dirac or train).
FieldRecord record_impulsive(const model::Scenario& s, const model::SourceProfile& profile,
                             const model::Orbit& orbit, const model::TemporalPulse& pulse,
                             const std::vector<Vec3>& receivers, double dt, double t_record);

// Scalar spherical-harmonic tables at the grid nodes (values and
// theta-derivatives), used for alias-safe tangential differentiation.
struct SphereShTables {
  int degree = 0;
  std::size_t n_slots = 0;
  std::vector<cplx> y;   // node-major, slot-minor
  std::vector<cplx> dy;  // d/dtheta
};
SphereShTables make_sh_tables(const SphereGrid& grid, int max_degree);

// Curl at the centre-shell nodes from five concentric shells at radii
// radius + c*h, c = -2..2. Radial derivative by the 4th-order stencil,
// tangential derivatives by spherical-harmonic projection.
std::vector<Vec3> sphere_curl_from_shells(const SphereGrid& grid, const SphereShTables& tables,
                                          double h, const std::array<const Vec3*, 5>& shells);

// Max |E| over t in [T, T_record], relative to the global peak.
double huygens_residual(const FieldRecord& rec, const model::Scenario& s);

// Windowed transform Ê(x,kappa) = Int_0^T E(x,t) e^{-i kappa t} dt by
// composite Simpson on the record grid, up to t_max (default: full record).
std::vector<CVec3> time_fourier(const FieldRecord& rec, double kappa, double t_max = 0.0);
std::vector<CVec3> time_fourier_curl(const FieldRecord& rec, double kappa, double t_max = 0.0);

// Transforms a record on a sphere grid into a SpectralTrace over a kappa list.
SpectralTrace spectral_trace(const FieldRecord& rec, const SphereGrid& grid,
                             const std::vector<double>& kappas, double t_max = 0.0);

// Additive Gaussian noise, std sigma * (peak |E| component), reproducible.
FieldRecord add_noise(const FieldRecord& rec, double sigma, std::uint64_t seed);

}  // namespace emtrack::forward
