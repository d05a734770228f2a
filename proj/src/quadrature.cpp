#include "emtrack/quadrature.hpp"

#include <cmath>
#include <cstdlib>

#include "emtrack/errors.hpp"

namespace emtrack {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ValueError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000e+00, 2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01, 5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01, 8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01, 9.914553711208126392068546975263285e-01};
constexpr double kKronrodWeights[8] = {
    2.094821410847278280129991748917143e-01, 2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01, 1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01, 1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02, 2.293532201052922496373200805896959e-02};
constexpr double kGaussWeights[4] = {
    4.179591836734693877551020408163265e-01, 3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01, 1.294849661688696932706114326790820e-01};

struct GkResult {
  cplx value;
  double err;
};

GkResult gk15(const std::function<cplx(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const cplx fc = f(mid);
  cplx resk = kKronrodWeights[0] * fc;
  cplx resg = kGaussWeights[0] * fc;
  for (int j = 1; j < 8; ++j) {
    const double dx = half * kKronrodNodes[j];
    const cplx f1 = f(mid - dx), f2 = f(mid + dx);
    resk += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 0) resg += kGaussWeights[j / 2] * (f1 + f2);
  }
  const cplx value = resk * half;
  const double err = std::abs((resk - resg) * half);
  return {value, err};
}

cplx integrate_gk_impl(const std::function<cplx(double)>& f, double a, double b,
                       double abs_tol, int depth) {
  const GkResult r = gk15(f, a, b);
  if (r.err <= abs_tol || depth <= 0) return r.value;
  const double mid = 0.5 * (a + b);
  return integrate_gk_impl(f, a, mid, 0.5 * abs_tol, depth - 1) +
         integrate_gk_impl(f, mid, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace

cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  double abs_tol, int max_depth) {
  return integrate_gk_impl(f, a, b, abs_tol, max_depth);
}

double integrate_gk_real(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, int max_depth) {
  return integrate_gk_impl([&](double t) { return cplx(f(t), 0.0); }, a, b, abs_tol, max_depth)
      .real();
}

BallQuad ball_quadrature(double radius, int n_radial, int n_polar, int n_azimuth) {
  if (radius <= 0.0) throw ValueError("ball_quadrature: radius must be positive");
  BallQuad q;
  q.radius = radius;
  const GaussRule rad = gauss_legendre(n_radial, 0.0, radius);
  const GaussRule pol = gauss_legendre(n_polar, -1.0, 1.0);  // cos(theta)
  const double dphi = 2.0 * kPi / n_azimuth;
  q.nodes.reserve(static_cast<std::size_t>(n_radial) * n_polar * n_azimuth);
  q.weights.reserve(q.nodes.capacity());
  for (int i = 0; i < n_radial; ++i) {
    const double r = rad.nodes[i];
    const double wr = rad.weights[i] * r * r;
    for (int j = 0; j < n_polar; ++j) {
      const double ct = pol.nodes[j];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      const double w = wr * pol.weights[j] * dphi;
      for (int k = 0; k < n_azimuth; ++k) {
        const double phi = dphi * (k + 0.5);
        q.nodes.push_back({r * st * std::cos(phi), r * st * std::sin(phi), r * ct});
        q.weights.push_back(w);
      }
    }
  }
  return q;
}

double quad_scale() {
  if (const char* env = std::getenv("EMTRACK_QUAD_SCALE")) {
    const double s = std::atof(env);
    if (s > 0.0) return s;
  }
  return 1.0;
}

int scaled_order(int base) {
  const int n = static_cast<int>(std::lround(base * quad_scale()));
  return n < 3 ? 3 : n;
}

}  // namespace emtrack
