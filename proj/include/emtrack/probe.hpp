#pragma once

#include <functional>
#include <vector>

#include "emtrack/capacity.hpp"
#include "emtrack/forward.hpp"

namespace emtrack::probe {

// Propagating plane-wave probe frame: orthonormal {p, q, d} with q = p x d.
struct ProbeDirection {
  Vec3 d;
  Vec3 p;
  Vec3 q;
};

// Deterministic polarization choice for a given direction.
ProbeDirection make_probe(const Vec3& direction);

// Accumulated surface moments of a trace pair against the plane-wave phase
// e^{-i kappa d.x}; every polarization functional is a cheap contraction of
// these, so they are computed once per (kappa, d).
struct PlaneWaveMoments {
  CVec3 curl_moment;    // sum w e^{-i k d.x} (nu x curl E)
  CVec3 tangent_moment; // sum w e^{-i k d.x} (E x nu)
  cplx normal_moment;   // sum w e^{-i k d.x} (E . nu)
};

PlaneWaveMoments plane_wave_moments(const forward::SphereGrid& grid,
                                    const std::vector<CVec3>& e_trace,
                                    const std::vector<CVec3>& curl_trace, double kappa,
                                    const Vec3& d);

// Reciprocity functional with test field W = c e^{-i kappa d.x}:
//   Int_Gamma [ (nu x curl E) . W - (nu x curl W) . E ] ds
// which equals the volume pairing Int f_hat . W for radiating solutions.
cplx plane_wave_functional(const PlaneWaveMoments& m, double kappa, const Vec3& d, const Vec3& pol);
cplx plane_wave_functional(const forward::SphereGrid& grid, const std::vector<CVec3>& e_trace,
                           const std::vector<CVec3>& curl_trace, double kappa, const Vec3& d,
                           const Vec3& pol);

// The two polarization functionals Dp, Dq of one probe direction.
struct SpectrumProbe {
  cplx dp;
  cplx dq;
};
SpectrumProbe source_spectrum(const forward::SphereGrid& grid, const std::vector<CVec3>& e_trace,
                              const std::vector<CVec3>& curl_trace, double kappa,
                              const ProbeDirection& probe);

// d-component functional corrected by the normal-trace term; vanishes for
// solenoidal sources, O(1) for the non-solenoidal control.
cplx divergence_null_check(const forward::SphereGrid& grid, const std::vector<CVec3>& e_trace,
                           const std::vector<CVec3>& curl_trace, double kappa, const Vec3& d);

// Interval of vertical rates where Int e^{lambda x3} h(x3) dx3 stays above
// 0.1 of its scanned maximum. Scan over (0, 10/hatR] at 1000 points.
struct LambdaInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double lambda) const { return lambda > lo && lambda < hi; }
};
LambdaInterval find_lambda_interval(const std::function<double(double)>& h, double half_width,
                                    double hat_r);

// Evanescent probe: in-plane direction/polarization, temporal frequency k1,
// spatial frequency k2 > k1; vertical growth rate lambda = sqrt(k2^2 - k1^2).
struct EvanescentProbe {
  Vec3 d_tilde;  // unit, in-plane
  Vec3 p_tilde;  // unit, in-plane, orthogonal to d_tilde
  double kappa1 = 0.0;
  double kappa2 = 0.0;

  double lambda() const;
  void validate(const LambdaInterval& region) const;
};

EvanescentProbe make_evanescent_probe(double angle, double kappa1, double lambda);

// Time-domain evanescent reciprocity functional over the full record
// (requires curl traces): Int_0^T Int_Gamma [nu x curl E . F - nu x curl F . E].
cplx evanescent_functional(const forward::FieldRecord& rec, const forward::SphereGrid& grid,
                           const EvanescentProbe& probe, const LambdaInterval& region);

// Same functional evaluated from one frequency slice (the probe's time factor
// e^{-i kappa1 t} makes the time integral a windowed transform).
cplx evanescent_functional_spectral(const forward::SphereGrid& grid,
                                    const std::vector<CVec3>& e_hat,
                                    const std::vector<CVec3>& curl_hat,
                                    const EvanescentProbe& probe, const LambdaInterval& region);

// Aperture mask: keep nodes within half_angle of axis. Masked traces are
// completed by VSH least squares before probing; the residual is reported.
struct ApertureCompletion {
  std::vector<CVec3> completed;
  double residual = 0.0;
};
ApertureCompletion complete_masked_trace(const forward::SphereGrid& grid, double kappa,
                                         const std::vector<CVec3>& trace,
                                         const Vec3& cap_axis, double half_angle, int max_degree);

}  // namespace emtrack::probe
