#include "emtrack/specfun.hpp"

#include <cmath>

#include "emtrack/errors.hpp"

namespace emtrack::specfun {

namespace {

constexpr int kMaxOrder = 200;

void check_order_arg(int n, double x) {
  if (x <= 0.0) throw DomainError("spherical Bessel: x must be positive");
  if (n < 0 || n > kMaxOrder) throw DomainError("spherical Bessel: order out of range");
}

// Downward Miller recurrence normalized by j_0; stable for n >= x.
void bessel_j_downward(int n, double x, std::vector<double>& out) {
  const int start = n + static_cast<int>(std::sqrt(40.0 * (n + 1))) + 12;
  double jp = 0.0;          // j~_{k+1}
  double jc = 1e-300;       // j~_k seed
  std::vector<double> tmp(static_cast<std::size_t>(n + 1));
  for (int k = start; k >= 1; --k) {
    const double jm = (2.0 * k + 1.0) / x * jc - jp;
    jp = jc;
    jc = jm;
    if (k - 1 <= n) tmp[static_cast<std::size_t>(k - 1)] = jm;
    if (std::abs(jc) > 1e250) {  // rescale to avoid overflow
      const double s = 1e-250;
      jc *= s;
      jp *= s;
      for (int i = k - 1; i <= n; ++i)
        if (i >= 0) tmp[static_cast<std::size_t>(i)] *= s;
    }
  }
  const double j0 = std::sin(x) / x;
  const double scale = j0 / tmp[0];
  out.resize(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) out[static_cast<std::size_t>(i)] = tmp[static_cast<std::size_t>(i)] * scale;
}

}  // namespace

void sph_bessel_j_array(int n, double x, std::vector<double>& out) {
  check_order_arg(n, x);
  out.resize(static_cast<std::size_t>(n + 1));
  const double j0 = std::sin(x) / x;
  out[0] = j0;
  if (n == 0) return;
  if (x > n) {
    // Upward recurrence is stable when x dominates the order.
    double jm = j0;
    double jc = std::sin(x) / (x * x) - std::cos(x) / x;
    out[1] = jc;
    for (int k = 1; k < n; ++k) {
      const double jn = (2.0 * k + 1.0) / x * jc - jm;
      jm = jc;
      jc = jn;
      out[static_cast<std::size_t>(k + 1)] = jn;
    }
  } else {
    bessel_j_downward(n, x, out);
  }
}

void sph_bessel_y_array(int n, double x, std::vector<double>& out) {
  check_order_arg(n, x);
  out.resize(static_cast<std::size_t>(n + 1));
  out[0] = -std::cos(x) / x;
  if (n == 0) return;
  out[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  // y_n is the dominant solution; upward recurrence is always stable.
  for (int k = 1; k < n; ++k) {
    out[static_cast<std::size_t>(k + 1)] =
        (2.0 * k + 1.0) / x * out[static_cast<std::size_t>(k)] - out[static_cast<std::size_t>(k - 1)];
  }
}

double sph_bessel_j(int n, double x) {
  std::vector<double> tmp;
  sph_bessel_j_array(n, x, tmp);
  return tmp[static_cast<std::size_t>(n)];
}

double sph_bessel_y(int n, double x) {
  std::vector<double> tmp;
  sph_bessel_y_array(n, x, tmp);
  return tmp[static_cast<std::size_t>(n)];
}

cplx sph_hankel1(int n, double x) { return {sph_bessel_j(n, x), sph_bessel_y(n, x)}; }

double sph_bessel_j_prime(int n, double x) {
  if (n == 0) return -sph_bessel_j(1, x);
  std::vector<double> j;
  sph_bessel_j_array(n, x, j);
  return j[static_cast<std::size_t>(n - 1)] - (n + 1.0) / x * j[static_cast<std::size_t>(n)];
}

double sph_bessel_y_prime(int n, double x) {
  if (n == 0) return -sph_bessel_y(1, x);
  std::vector<double> y;
  sph_bessel_y_array(n, x, y);
  return y[static_cast<std::size_t>(n - 1)] - (n + 1.0) / x * y[static_cast<std::size_t>(n)];
}

cplx sph_hankel1_prime(int n, double x) {
  return {sph_bessel_j_prime(n, x), sph_bessel_y_prime(n, x)};
}

namespace {

// Ratio recurrence r_k = h_k(x)/h_{k-1}(x) (outgoing or incoming); avoids
// forming h_n itself, which overflows for n >> x.
cplx hankel_ratio(int n, double x, bool outgoing) {
  const cplx i_unit(0.0, 1.0);
  const cplx h0 = outgoing ? -i_unit * std::exp(i_unit * x) / x
                           : i_unit * std::exp(-i_unit * x) / x;
  const cplx h1 = h0 * (1.0 / x - (outgoing ? i_unit : -i_unit));
  if (n == 0) return h0;  // unused marker; callers ask for n >= 1 ratios
  cplx r = h1 / h0;
  for (int k = 1; k < n; ++k) r = (2.0 * k + 1.0) / x - 1.0 / r;
  return r;  // = h_n / h_{n-1}
}

cplx riccati_log_derivative(int n, double x, bool outgoing) {
  check_order_arg(n, x);
  const cplx i_unit(0.0, 1.0);
  if (n == 0) {
    // zeta_0 = z h_0 = -i e^{iz} (outgoing): zeta_0'/zeta_0 = +-i.
    return outgoing ? i_unit : -i_unit;
  }
  // zeta_n'/zeta_n = h_{n-1}/h_n - n/x.
  const cplx r = hankel_ratio(n, x, outgoing);
  return 1.0 / r - static_cast<double>(n) / x;
}

}  // namespace

cplx riccati_hankel_log_derivative(int n, double x) { return riccati_log_derivative(n, x, true); }
cplx riccati_hankel2_log_derivative(int n, double x) { return riccati_log_derivative(n, x, false); }

void legendre_normalized(int n, int m, double cos_theta, std::vector<double>& out) {
  if (m < 0 || m > n) throw IndexError("legendre_normalized: need 0 <= m <= n");
  const double x = cos_theta;
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));  // sin(theta) >= 0
  out.resize(static_cast<std::size_t>(n - m + 1));
  // P̄_m^m with Condon-Shortley phase.
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  out[0] = pmm;
  if (n == m) return;
  double p_prev = pmm;
  double p_cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
  out[1] = p_cur;
  for (int l = m + 2; l <= n; ++l) {
    const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
    const double b = std::sqrt(((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
    const double p_next = a * (x * p_cur - b * p_prev);
    p_prev = p_cur;
    p_cur = p_next;
    out[static_cast<std::size_t>(l - m)] = p_next;
  }
}

cplx sph_harmonic(int n, int m, double theta, double phi) {
  if (std::abs(m) > n) throw IndexError("sph_harmonic: |m| > n");
  const int am = std::abs(m);
  std::vector<double> p;
  legendre_normalized(n, am, std::cos(theta), p);
  const double pnm = p[static_cast<std::size_t>(n - am)];
  const cplx e = std::polar(1.0, am * phi);
  if (m >= 0) return pnm * e;
  const double sign = (am % 2 == 0) ? 1.0 : -1.0;
  return sign * pnm * std::conj(e);
}

void sh_eval_all(int max_degree, double theta, double phi, std::vector<cplx>& out_y,
                 std::vector<cplx>& out_dy_dtheta) {
  const int N = max_degree;
  const std::size_t count = static_cast<std::size_t>(N + 1) * (N + 1);
  out_y.assign(count, cplx{});
  out_dy_dtheta.assign(count, cplx{});
  const double x = std::cos(theta);
  const double st = std::sin(theta);
  std::vector<double> p;
  for (int m = 0; m <= N; ++m) {
    legendre_normalized(N, m, x, p);
    const cplx eim = std::polar(1.0, m * phi);
    for (int n = std::max(0, m); n <= N; ++n) {
      const double pnm = p[static_cast<std::size_t>(n - m)];
      double pl = 0.0;
      if (n - 1 >= m) pl = p[static_cast<std::size_t>(n - 1 - m)];
      const double c = n == m ? 0.0
                              : std::sqrt((2.0 * n + 1.0) *
                                          (static_cast<double>(n) * n - static_cast<double>(m) * m) /
                                          (2.0 * n - 1.0));
      const double dp = (n * x * pnm - c * pl) / st;
      out_y[sh_slot(n, m)] = pnm * eim;
      out_dy_dtheta[sh_slot(n, m)] = dp * eim;
      if (m > 0) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        out_y[sh_slot(n, -m)] = sign * std::conj(out_y[sh_slot(n, m)]);
        out_dy_dtheta[sh_slot(n, -m)] = sign * std::conj(out_dy_dtheta[sh_slot(n, m)]);
      }
    }
  }
}

namespace {

struct SphBasis {
  Vec3 rhat, that, phat;  // r̂, θ̂, φ̂
};

SphBasis sph_basis(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  return {{st * cp, st * sp, ct}, {ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

}  // namespace

void vsh_eval_all(int max_degree, double theta, double phi,
                  std::vector<CVec3>& out_u, std::vector<CVec3>& out_v) {
  const int N = max_degree;
  const std::size_t count = static_cast<std::size_t>(N) * (N + 2);
  out_u.assign(count, CVec3{});
  out_v.assign(count, CVec3{});
  const double x = std::cos(theta);
  const double st = std::sin(theta);
  const SphBasis basis = sph_basis(theta, phi);
  std::vector<double> p, plow;
  for (int m = 0; m <= N; ++m) {
    const int n0 = std::max(1, m);
    legendre_normalized(N, m, x, p);  // p[l-m] = P̄_l^m
    const cplx eim = std::polar(1.0, m * phi);
    for (int n = n0; n <= N; ++n) {
      const double pnm = p[static_cast<std::size_t>(n - m)];
      // dP̄_n^m/dθ = (n cosθ P̄_n^m - sqrt((2n+1)(n²-m²)/(2n-1)) P̄_{n-1}^m)/sinθ
      double pl = 0.0;
      if (n - 1 >= m) pl = p[static_cast<std::size_t>(n - 1 - m)];
      const double c = std::sqrt((2.0 * n + 1.0) * (static_cast<double>(n) * n - static_cast<double>(m) * m) / (2.0 * n - 1.0));
      const double dp_dtheta = (n * x * pnm - c * pl) / st;
      const double inv = 1.0 / std::sqrt(static_cast<double>(n) * (n + 1.0));
      // U = (∂θY θ̂ + (i m Y / sinθ) φ̂)/sqrt(n(n+1)); V = r̂ × U.
      const cplx ut = inv * dp_dtheta * eim;
      const cplx up = inv * cplx(0.0, m) * (pnm / st) * eim;
      const CVec3 U{ut * basis.that.x + up * basis.phat.x, ut * basis.that.y + up * basis.phat.y,
                    ut * basis.that.z + up * basis.phat.z};
      const CVec3 V{ut * basis.phat.x - up * basis.that.x, ut * basis.phat.y - up * basis.that.y,
                    ut * basis.phat.z - up * basis.that.z};
      out_u[VshCoeffs::slot(n, m)] = U;
      out_v[VshCoeffs::slot(n, m)] = V;
      if (m > 0) {
        // Y_{n,-m} = (-1)^m conj(Y_{n,m}); the same relation carries to U, V.
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        out_u[VshCoeffs::slot(n, -m)] = sign * U.conj();
        out_v[VshCoeffs::slot(n, -m)] = sign * V.conj();
      }
    }
  }
}

VshPair vsh_eval(int n, int m, double theta, double phi) {
  if (n < 1) throw IndexError("vsh_eval: degree must be >= 1");
  if (std::abs(m) > n) throw IndexError("vsh_eval: |m| > n");
  std::vector<CVec3> u, v;
  vsh_eval_all(n, theta, phi, u, v);
  return {u[VshCoeffs::slot(n, m)], v[VshCoeffs::slot(n, m)]};
}

VshCoeffs::VshCoeffs(int max_degree) : degree_(max_degree) {
  if (max_degree < 1) throw IndexError("VshCoeffs: degree must be >= 1");
  const std::size_t count = static_cast<std::size_t>(max_degree) * (max_degree + 2);
  u_.assign(count, cplx{});
  v_.assign(count, cplx{});
}

std::size_t VshCoeffs::slot(int n, int m) {
  return static_cast<std::size_t>(n) * n - 1 + static_cast<std::size_t>(m + n);
}

double VshCoeffs::norm() const {
  double s = 0.0;
  for (const cplx& c : u_) s += std::norm(c);
  for (const cplx& c : v_) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace emtrack::specfun
