#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace emtrack {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec3 normalized(const Vec3& v) { return v / v.norm(); }

// Complex 3-vector; bilinear (unconjugated) pairing is the default since the
// reciprocity identities are bilinear, not sesquilinear.
struct CVec3 {
  cplx x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};

  CVec3() = default;
  CVec3(cplx x_, cplx y_, cplx z_) : x(x_), y(y_), z(z_) {}
  explicit CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

  CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  CVec3 operator*(cplx s) const { return {x * s, y * s, z * s}; }
  CVec3 operator-() const { return {-x, -y, -z}; }
  CVec3& operator+=(const CVec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

  double norm() const { return std::sqrt(std::norm(x) + std::norm(y) + std::norm(z)); }
  CVec3 conj() const { return {std::conj(x), std::conj(y), std::conj(z)}; }
  Vec3 real() const { return {x.real(), y.real(), z.real()}; }
  Vec3 imag() const { return {x.imag(), y.imag(), z.imag()}; }
};

inline CVec3 operator*(cplx s, const CVec3& v) { return v * s; }
inline CVec3 operator*(double s, const CVec3& v) { return v * cplx(s, 0.0); }

// Bilinear products: sum a_i b_i with no conjugation.
inline cplx dot(const CVec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline cplx dot(const CVec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline cplx dot(const Vec3& a, const CVec3& b) { return b.x * a.x + b.y * a.y + b.z * a.z; }

// Hermitian product: sum conj(a_i) b_i.
inline cplx hdot(const CVec3& a, const CVec3& b) {
  return std::conj(a.x) * b.x + std::conj(a.y) * b.y + std::conj(a.z) * b.z;
}

inline CVec3 cross(const CVec3& a, const CVec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline CVec3 cross(const Vec3& a, const CVec3& b) { return cross(CVec3(a), b); }
inline CVec3 cross(const CVec3& a, const Vec3& b) { return cross(a, CVec3(b)); }

// 64-bit FNV-1a, used for provenance hashes of configs and artifacts.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace emtrack
