#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "emtrack/geom.hpp"

namespace emtrack::model {

// Geometric and temporal constants of a measurement scenario. Wave speed is
// normalized to one throughout; T is always recomputed as T0 + hatR + R1 + R.
struct Scenario {
  double hat_r = 0.0;  // support radius of the profile
  double r1 = 0.0;     // orbit bound
  double radius = 0.0; // measurement sphere radius R
  double t0 = 0.0;     // pulse support end
  double horizon = 0.0; // T

  double source_ball_radius() const { return hat_r + r1; }
};

struct RawScenario {
  double hat_r = 0.0;
  double r1 = 0.0;
  double radius = 0.0;
  double t0 = 0.0;
  double horizon = 0.0;  // ignored on input; recomputed
};

Scenario validate_scenario(const RawScenario& raw);

enum class ProfileKind {
  CurlBump,    // J = curl(psi e), psi a smooth radial bump: C^inf, solenoidal
  ShellRotor,  // truncated rotor minus a recentered interior curl bump;
               // support is exactly the closed ball, |J| stays O(1) near the
               // boundary shell (discontinuous at |x| = rho, tangential jump)
  Custom,      // user-supplied evaluator (test profiles, negative controls)
};

class SourceProfile {
 public:
  using Evaluator = std::function<Vec3(const Vec3&)>;

  static SourceProfile curl_bump(double rho, double amplitude = 1.0,
                                 Vec3 axis = {0.0, 0.0, 1.0}, Vec3 center = {0.0, 0.0, 0.0});
  static SourceProfile shell_rotor(double rho, double amplitude = 1.0,
                                   Vec3 axis = {0.0, 0.0, 1.0});
  static SourceProfile custom(Evaluator f, double support_radius, bool solenoidal);

  Vec3 eval(const Vec3& x) const;
  ProfileKind kind() const { return kind_; }
  double support_radius() const { return support_radius_; }
  double amplitude() const { return amplitude_; }
  Vec3 axis() const { return axis_; }
  Vec3 center() const { return center_; }
  bool solenoidal() const { return solenoidal_; }
  // True for profiles that are C^2 everywhere (finite-difference divergence
  // probes are meaningful on the whole grid only for these).
  bool smooth() const { return kind_ == ProfileKind::CurlBump; }

  // Scalar potential of the curl construction; exposed for oracles.
  double potential(const Vec3& x) const;

 private:
  ProfileKind kind_ = ProfileKind::CurlBump;
  double support_radius_ = 1.0;
  double amplitude_ = 1.0;
  Vec3 axis_{0.0, 0.0, 1.0};
  Vec3 center_{0.0, 0.0, 0.0};
  bool solenoidal_ = true;
  Evaluator custom_;
  // shell-rotor interior correction
  Vec3 inner_center_{0.0, 0.0, 0.0};
  double inner_rho_ = 0.0;
  double inner_amp_ = 0.0;
};

// Centered finite-difference divergence; O(h^2) for smooth profiles.
double profile_divergence_probe(const SourceProfile& p, const Vec3& x, double h);

enum class OrbitKind { PolynomialPerComponent, PiecewiseCubic };

// Parametric source path a(t) on [0, t_end]; evaluation clamps to a(t_end)
// beyond the pulse support since the field never sees those values.
class Orbit {
 public:
  static Orbit stationary(double t_end = 1.0);
  // coeffs[c] = polynomial coefficients of component c (ascending powers).
  static Orbit polynomial(std::array<std::vector<double>, 3> coeffs, double t_end, double r1);
  // Catmull-Rom C^1 interpolant through uniformly spaced waypoints.
  static Orbit piecewise_cubic(std::vector<Vec3> waypoints, double t_end, double r1);

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;
  double t_end() const { return t_end_; }
  double bound() const { return r1_; }
  OrbitKind kind() const { return kind_; }
  bool planar() const;  // identically zero third component

  // Slow-motion hypothesis |a_j'(t)| < 1 per component, sampled on a fine grid.
  bool slow_motion(int samples = 1000) const;
  // Bound check |a(t)| < r1 on a fine grid; throws GeometryError on violation.
  void validate(int samples = 1000) const;

 private:
  OrbitKind kind_ = OrbitKind::PolynomialPerComponent;
  std::array<std::vector<double>, 3> coeffs_{};
  std::vector<Vec3> waypoints_;
  double t_end_ = 1.0;
  double r1_ = 0.0;
};

enum class PulseKind { SmoothBump, Dirac, DiracTrain };

class TemporalPulse {
 public:
  static TemporalPulse smooth_bump(double t_end, double amplitude = 1.0);
  static TemporalPulse dirac(double t_impulse);
  // Impulse times must be increasing; the gap condition (> R) is checked at
  // scenario assembly where R is known.
  static TemporalPulse dirac_train(std::vector<double> times);

  PulseKind kind() const { return kind_; }
  double support_end() const { return t_end_; }
  double amplitude() const { return amplitude_; }
  const std::vector<double>& impulse_times() const { return times_; }

  // Pointwise value; throws KindError for Dirac kinds.
  double eval(double t) const;
  double derivative(double t) const;
  // Integral of g over its support (adaptive quadrature).
  double integral() const;

 private:
  PulseKind kind_ = PulseKind::SmoothBump;
  double t_end_ = 1.0;
  double amplitude_ = 1.0;
  std::vector<double> times_;
};

// Planar profile J(x~) = (J1, J2, 0) built from a stream function, so the
// in-plane divergence vanishes identically. The admissible variant has a
// strict peak of J1 at the origin; the two-peak variant violates that and is
// used as a negative control.
class PlanarProfile {
 public:
  static PlanarProfile admissible(double rho, double amplitude = 1.0);
  static PlanarProfile two_peak(double rho, double amplitude = 1.0, double separation = 0.45);

  // In-plane value at x~ = (x, y).
  Vec3 eval(double x, double y) const;
  double support_radius() const { return rho_; }
  int peak_component() const { return 1; }  // J1 carries the peak
  bool admissible_by_construction() const { return admissible_; }

  // Sampling check of the peak condition J1(0) > J1(x~) on a grid.
  bool peak_condition_holds(int grid = 201) const;

 private:
  double rho_ = 0.5;
  double amplitude_ = 1.0;
  bool admissible_ = true;
  double separation_ = 0.0;
};

// Vertical factor h(x3) for the planar source: smooth bump of half-width w.
class VerticalFactor {
 public:
  static VerticalFactor bump(double half_width, double amplitude = 1.0);
  static VerticalFactor odd_bump(double half_width, double amplitude = 1.0);
  static VerticalFactor zero(double half_width);

  double eval(double x3) const;
  double half_width() const { return half_width_; }

 private:
  int kind_ = 0;  // 0 bump, 1 odd, 2 zero
  double half_width_ = 0.3;
  double amplitude_ = 1.0;
};

struct PlanarSource {
  PlanarProfile profile;
  VerticalFactor vertical;
  Orbit orbit;  // planar: third component identically zero

  // Checks supp(J(.-a(t)) h) stays inside B_hatR for all t.
  void validate(double hat_r) const;
  Vec3 density(const Vec3& x, double t, const TemporalPulse& g) const;
};

}  // namespace emtrack::model
