#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace conelab {

/// A point (x, y) of the closed quarter-plane; x and y are the radii of the two
/// spheres whose product is the orbit.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// The same point in the coordinates u = (x^2 - y^2)/2, v = xy, r = sqrt(u^2 + v^2).
struct UVPoint {
  double u = 0.0;
  double v = 0.0;
  double r = 0.0;
};

/// Normalization of the orbit weight F = c_n (xy)^(n-1).
///
/// `SphereVolume` uses c_n = |S^(n-1)|^2 so h-lengths are hypersurface volumes.
/// `Unit` sets c_n = 1. Eigenvalues do not depend on the choice.
enum class WeightScale { SphereVolume, Unit };

/// Squared surface measure of the unit (n-1)-sphere, (2 pi^(n/2) / Gamma(n/2))^2.
double sphere_constant(int n);

/// c_n under the given scale.
double weight_constant(int n, WeightScale scale);

/// F(x, y) = c_n (xy)^(n-1). Throws DomainError on negative coordinates.
double weight_F(Point point, int n, WeightScale scale = WeightScale::SphereVolume);

UVPoint to_uv(Point point);

/// Inverse of to_uv; only u and v are read, r is recomputed. Throws DomainError if v < 0.
Point from_uv(UVPoint point);
Point from_uv(double u, double v);

/// The fixed boundary orbit of the problem. Instances with x0 < y0 are reflected so
/// that x0 >= y0 always holds; `reflected()` records whether that happened.
class BoundaryOrbit {
 public:
  BoundaryOrbit(int n, double x0, double y0);

  int n() const noexcept { return n_; }
  double x0() const noexcept { return x0_; }
  double y0() const noexcept { return y0_; }
  Point point() const noexcept { return {x0_, y0_}; }
  bool reflected() const noexcept { return reflected_; }
  bool symmetric() const noexcept { return x0_ == y0_; }

 private:
  int n_;
  double x0_;
  double y0_;
  bool reflected_ = false;
};

/// A sampled profile curve t -> (x(t), y(t)), piecewise linear between nodes.
///
/// Construction validates: nodes strictly increase from exactly 0 to exactly 1,
/// interior points lie in the open quarter-plane, and the last point lies on its
/// boundary (x_N y_N = 0).
class ProfileCurve {
 public:
  ProfileCurve(std::vector<double> nodes, std::vector<Point> points);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t elements() const noexcept { return nodes_.size() - 1; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const Point> points() const noexcept { return points_; }
  double node(std::size_t i) const { return nodes_[i]; }
  Point point(std::size_t i) const { return points_[i]; }
  Point start() const { return points_.front(); }
  Point end() const { return points_.back(); }

  bool starts_at(const BoundaryOrbit& orbit) const;

  /// (x, y) -> (y, x) at every node.
  ProfileCurve reflected() const;
  /// (x, y) -> (factor x, factor y); factor > 0.
  ProfileCurve scaled(double factor) const;
  /// Splits every element into `factor` equal pieces (in t and in the plane).
  ProfileCurve subdivided(std::size_t factor) const;

 private:
  std::vector<double> nodes_;
  std::vector<Point> points_;
};

/// Uniform nodes i/N, i = 0..N.
std::vector<double> uniform_nodes(std::size_t elements);

/// Curve through the given (u, v) samples on the given nodes.
ProfileCurve curve_from_uv(std::vector<double> nodes, std::span<const UVPoint> samples);

/// g-speed |Delta(x, y)| / Delta t of one element.
double speed_g(const ProfileCurve& curve, std::size_t element);
/// g-speed of one element measured in (u, v): sqrt(du^2 + dv^2) / sqrt(2 r_mid) / Delta t,
/// with r_mid the (u, v)-radius of the chord midpoint in (x, y).
double speed_g_uv(const ProfileCurve& curve, std::size_t element);
/// F(chord midpoint) times the g-speed.
double speed_h(const ProfileCurve& curve, std::size_t element, int n,
               WeightScale scale = WeightScale::SphereVolume);
double length_g(const ProfileCurve& curve);
double length_h(const ProfileCurve& curve, int n, WeightScale scale = WeightScale::SphereVolume);

/// Straight segment from (R, R) to the origin. Requires a symmetric orbit.
ProfileCurve cone_curve(const BoundaryOrbit& orbit, std::size_t elements);
/// Vertical segment from (x0, y0) to (x0, 0).
ProfileCurve cylinder_curve(const BoundaryOrbit& orbit, std::size_t elements);
/// The curve (u, v) = (s t, 1 - t) from (1, 1); s >= 0.
ProfileCurve sigma_s_curve(double s, std::size_t elements);
/// (1 - t)^(1/2) (1, 1).
ProfileCurve sigma0_curve(std::size_t elements);

/// CSV with header `t,x,y`. The reader validates the curve invariants.
void write_curve_csv(std::ostream& out, const ProfileCurve& curve);
ProfileCurve read_curve_csv(std::istream& in);

}  // namespace conelab
