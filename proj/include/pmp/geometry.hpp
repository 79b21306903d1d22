#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pmp {

// Planar vector. All arithmetic is component-wise.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr double& operator[](int axis) { return axis == 0 ? x : y; }
  constexpr double operator[](int axis) const { return axis == 0 ? x : y; }

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, const Vec2& a) {
    return {s * a.x, s * a.y};
  }
  friend constexpr Vec2 operator*(const Vec2& a, double s) { return s * a; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Vec2& v) {
    return os << "(" << v.x << ", " << v.y << ")";
  }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double norm_inf(const Vec2& a) {
  return std::max(std::abs(a.x), std::abs(a.y));
}

// Sign with sign(0) = +1.
inline double sign_nonzero(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Closed axis-aligned box [lo.x, hi.x] x [lo.y, hi.y]. A box with lo > hi on
// any axis is empty.
struct Box {
  Vec2 lo;
  Vec2 hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double extent(int axis) const { return hi[axis] - lo[axis]; }
  Vec2 center() const { return 0.5 * (lo + hi); }
  bool empty() const { return lo.x > hi.x || lo.y > hi.y; }

  bool contains(const Vec2& p, double tol = 0.0) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol &&
           p.y <= hi.y + tol;
  }
  bool contains(const Box& b, double tol = 0.0) const {
    return contains(b.lo, tol) && contains(b.hi, tol);
  }

  // Shrinks by dx on both horizontal sides and dy on both vertical sides.
  Box shrunk(double dx, double dy) const {
    return {{lo.x + dx, lo.y + dy}, {hi.x - dx, hi.y - dy}};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

inline Box intersection(const Box& a, const Box& b) {
  return {{std::max(a.lo.x, b.lo.x), std::max(a.lo.y, b.lo.y)},
          {std::min(a.hi.x, b.hi.x), std::min(a.hi.y, b.hi.y)}};
}

// True when the intersection has positive area (touching edges do not count).
inline bool overlaps_with_area(const Box& a, const Box& b, double tol = 1e-12) {
  const Box i = intersection(a, b);
  return i.width() > tol && i.height() > tol;
}

}  // namespace pmp
