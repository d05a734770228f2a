#pragma once

#include <vector>

#include "emtrack/forward.hpp"
#include "emtrack/specfun.hpp"

namespace emtrack::capacity {

// Complex tangential vector field on a sphere grid at one frequency.
struct TangentialField {
  const forward::SphereGrid* grid = nullptr;
  double kappa = 0.0;
  std::vector<CVec3> values;

  void check_tangency(double tol = 1e-12) const;
};

// Tangential part nu x (f x nu) of an arbitrary complex field on the grid.
TangentialField tangential_part(const forward::SphereGrid& grid, double kappa,
                                const std::vector<CVec3>& field);

// Projection onto the two tangential VSH families by surface quadrature.
// Throws AliasError when N exceeds the grid band-limit safety margin.
specfun::VshCoeffs vsh_expand(const TangentialField& f, int max_degree);

// Synthesis back onto the grid nodes.
TangentialField vsh_synthesize(const forward::SphereGrid& grid, double kappa,
                               const specfun::VshCoeffs& c);

// Weighted least-squares completion of a masked trace: fits coefficients on
// the unmasked nodes only and reports the fit residual there. Realizes the
// partial-aperture pipeline (mask = spherical cap complement).
struct CompletionResult {
  specfun::VshCoeffs coeffs;
  double residual = 0.0;  // relative L2 on the unmasked nodes
};
CompletionResult vsh_complete_masked(const TangentialField& f, const std::vector<bool>& keep,
                                     int max_degree);

// Capacity operator: coefficients of the tangential magnetic trace
// H_tan = (1/(i kappa)) (curl E)_tan of the outgoing solution with electric
// trace coefficients c. Diagonal over (n,m) with Riccati-Hankel multipliers.
specfun::VshCoeffs capacity_apply(const specfun::VshCoeffs& c, double kappa, double radius);

// Relative L2(Gamma_R) residual of the transparent boundary condition
// (curl Ê) x nu = i kappa T(Ê x nu) evaluated at the grid nodes.
double tbc_residual(const TangentialField& e_trace, const TangentialField& curl_trace,
                    double kappa, int max_degree);

// Derives the curl trace on the grid from the electric trace alone
// (radiating-solution assumption), via expand -> capacity -> synthesize.
std::vector<CVec3> curl_trace_from_electric(const forward::SphereGrid& grid, double kappa,
                                            const std::vector<CVec3>& e_field, int max_degree);

// Outgoing (or incoming) pure multipole fields for validation: tangential
// electric trace and tangential curl trace of M- and N-type waves of degree n,
// order m, evaluated on the grid at radius R.
struct MieTraces {
  std::vector<CVec3> e_trace;     // full tangential E
  std::vector<CVec3> curl_trace;  // full (curl E), tangential by construction
};
MieTraces mie_multipole_traces(const forward::SphereGrid& grid, double kappa, int n, int m,
                               bool electric_type, bool outgoing = true);

}  // namespace emtrack::capacity
