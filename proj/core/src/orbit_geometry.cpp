#include "conelab/orbit_geometry.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <system_error>

#include "conelab/errors.hpp"

namespace conelab {
namespace {

double integer_power(double base, int exponent) {
  double result = 1.0;
  for (int k = 0; k < exponent; ++k) result *= base;
  return result;
}

void require_valid_n(int n) {
  if (n < 2) throw PreconditionError("dimension parameter n must be at least 2");
}

Point midpoint(Point a, Point b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

void append_double(std::string& out, double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  out.append(buffer, end);
}

double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw PreconditionError("curve csv: malformed number on line " + std::to_string(line));
  return value;
}

}  // namespace

double sphere_constant(int n) {
  require_valid_n(n);
  const double half = 0.5 * n;
  const double area = 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
  return area * area;
}

double weight_constant(int n, WeightScale scale) {
  return scale == WeightScale::Unit ? (require_valid_n(n), 1.0) : sphere_constant(n);
}

double weight_F(Point point, int n, WeightScale scale) {
  if (point.x < 0.0 || point.y < 0.0) throw DomainError("weight_F: negative coordinate");
  return weight_constant(n, scale) * integer_power(point.x * point.y, n - 1);
}

UVPoint to_uv(Point point) {
  if (point.x < 0.0 || point.y < 0.0) throw DomainError("to_uv: negative coordinate");
  return {0.5 * (point.x - point.y) * (point.x + point.y), point.x * point.y,
          0.5 * (point.x * point.x + point.y * point.y)};
}

Point from_uv(double u, double v) {
  if (!(v >= 0.0)) throw DomainError("from_uv: v must be nonnegative");
  const double r = std::hypot(u, v);
  // Take the square root of the larger of r +- u and recover the other factor from
  // xy = v, which avoids cancellation near the boundary.
  if (u >= 0.0) {
    const double x = std::sqrt(r + u);
    return {x, x > 0.0 ? v / x : 0.0};
  }
  const double y = std::sqrt(r - u);
  return {v / y, y};
}

Point from_uv(UVPoint point) { return from_uv(point.u, point.v); }

BoundaryOrbit::BoundaryOrbit(int n, double x0, double y0) : n_(n), x0_(x0), y0_(y0) {
  require_valid_n(n);
  if (!(x0 > 0.0) || !(y0 > 0.0) || !std::isfinite(x0) || !std::isfinite(y0))
    throw PreconditionError("boundary orbit radii must be positive and finite");
  if (x0_ < y0_) {
    std::swap(x0_, y0_);
    reflected_ = true;
  }
}

ProfileCurve::ProfileCurve(std::vector<double> nodes, std::vector<Point> points)
    : nodes_(std::move(nodes)), points_(std::move(points)) {
  if (nodes_.size() < 2) throw PreconditionError("profile curve needs at least two nodes");
  if (nodes_.size() != points_.size())
    throw PreconditionError("profile curve: nodes and points differ in length");
  if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
    throw PreconditionError("profile curve: parameter must run from 0 to 1");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]))
      throw PreconditionError("profile curve: nodes must be strictly increasing");
  }
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Point p = points_[i];
    if (!(p.x > 0.0) || !(p.y > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y))
      throw PreconditionError("profile curve: interior node " + std::to_string(i) +
                              " leaves the open quarter-plane");
  }
  const Point last = points_.back();
  if (!(last.x >= 0.0) || !(last.y >= 0.0) || !std::isfinite(last.x) || !std::isfinite(last.y) ||
      last.x * last.y != 0.0)
    throw PreconditionError("profile curve: terminal node must lie on the quarter-plane boundary");
}

bool ProfileCurve::starts_at(const BoundaryOrbit& orbit) const {
  return points_.front().x == orbit.x0() && points_.front().y == orbit.y0();
}

ProfileCurve ProfileCurve::reflected() const {
  std::vector<Point> swapped(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) swapped[i] = {points_[i].y, points_[i].x};
  return {nodes_, std::move(swapped)};
}

ProfileCurve ProfileCurve::scaled(double factor) const {
  if (!(factor > 0.0)) throw PreconditionError("scale factor must be positive");
  std::vector<Point> out(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    out[i] = {factor * points_[i].x, factor * points_[i].y};
  return {nodes_, std::move(out)};
}

ProfileCurve ProfileCurve::subdivided(std::size_t factor) const {
  if (factor == 0) throw PreconditionError("subdivision factor must be positive");
  if (factor == 1) return *this;
  std::vector<double> t;
  std::vector<Point> p;
  t.reserve(elements() * factor + 1);
  p.reserve(elements() * factor + 1);
  for (std::size_t i = 0; i < elements(); ++i) {
    for (std::size_t k = 0; k < factor; ++k) {
      const double w = static_cast<double>(k) / static_cast<double>(factor);
      t.push_back(nodes_[i] + w * (nodes_[i + 1] - nodes_[i]));
      p.push_back({points_[i].x + w * (points_[i + 1].x - points_[i].x),
                   points_[i].y + w * (points_[i + 1].y - points_[i].y)});
    }
  }
  t.push_back(nodes_.back());
  p.push_back(points_.back());
  return {std::move(t), std::move(p)};
}

std::vector<double> uniform_nodes(std::size_t elements) {
  if (elements < 1) throw PreconditionError("need at least one element");
  std::vector<double> t(elements + 1);
  for (std::size_t i = 0; i <= elements; ++i)
    t[i] = static_cast<double>(i) / static_cast<double>(elements);
  t.back() = 1.0;
  return t;
}

ProfileCurve curve_from_uv(std::vector<double> nodes, std::span<const UVPoint> samples) {
  std::vector<Point> points(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) points[i] = from_uv(samples[i]);
  return {std::move(nodes), std::move(points)};
}

double speed_g(const ProfileCurve& curve, std::size_t element) {
  const Point a = curve.point(element);
  const Point b = curve.point(element + 1);
  return std::hypot(b.x - a.x, b.y - a.y) / (curve.node(element + 1) - curve.node(element));
}

double speed_g_uv(const ProfileCurve& curve, std::size_t element) {
  const Point a = curve.point(element);
  const Point b = curve.point(element + 1);
  const UVPoint ua = to_uv(a);
  const UVPoint ub = to_uv(b);
  const UVPoint mid = to_uv(midpoint(a, b));
  return std::hypot(ub.u - ua.u, ub.v - ua.v) / std::sqrt(2.0 * mid.r) /
         (curve.node(element + 1) - curve.node(element));
}

double speed_h(const ProfileCurve& curve, std::size_t element, int n, WeightScale scale) {
  const Point mid = midpoint(curve.point(element), curve.point(element + 1));
  return weight_F(mid, n, scale) * speed_g(curve, element);
}

double length_g(const ProfileCurve& curve) {
  double total = 0.0;
  for (std::size_t i = 0; i < curve.elements(); ++i) {
    const Point a = curve.point(i);
    const Point b = curve.point(i + 1);
    total += std::hypot(b.x - a.x, b.y - a.y);
  }
  return total;
}

double length_h(const ProfileCurve& curve, int n, WeightScale scale) {
  double total = 0.0;
  for (std::size_t i = 0; i < curve.elements(); ++i)
    total += speed_h(curve, i, n, scale) * (curve.node(i + 1) - curve.node(i));
  return total;
}

ProfileCurve cone_curve(const BoundaryOrbit& orbit, std::size_t elements) {
  if (!orbit.symmetric()) throw PreconditionError("cone curve requires x0 = y0");
  if (elements < 2) throw PreconditionError("cone curve needs N >= 2");
  auto t = uniform_nodes(elements);
  std::vector<Point> p(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double c = (1.0 - t[i]) * orbit.x0();
    p[i] = {c, c};
  }
  p.back() = {0.0, 0.0};
  return {std::move(t), std::move(p)};
}

ProfileCurve cylinder_curve(const BoundaryOrbit& orbit, std::size_t elements) {
  if (elements < 2) throw PreconditionError("cylinder curve needs N >= 2");
  auto t = uniform_nodes(elements);
  std::vector<Point> p(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) p[i] = {orbit.x0(), (1.0 - t[i]) * orbit.y0()};
  p.back() = {orbit.x0(), 0.0};
  return {std::move(t), std::move(p)};
}

ProfileCurve sigma_s_curve(double s, std::size_t elements) {
  if (!(s >= 0.0)) throw PreconditionError("sigma_s requires s >= 0");
  if (elements < 2) throw PreconditionError("sigma_s curve needs N >= 2");
  auto t = uniform_nodes(elements);
  std::vector<Point> p(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) p[i] = from_uv(s * t[i], 1.0 - t[i]);
  p.back() = from_uv(s, 0.0);
  return {std::move(t), std::move(p)};
}

ProfileCurve sigma0_curve(std::size_t elements) {
  if (elements < 2) throw PreconditionError("sigma_0 curve needs N >= 2");
  auto t = uniform_nodes(elements);
  std::vector<Point> p(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double c = std::sqrt(1.0 - t[i]);
    p[i] = {c, c};
  }
  p.back() = {0.0, 0.0};
  return {std::move(t), std::move(p)};
}

void write_curve_csv(std::ostream& out, const ProfileCurve& curve) {
  std::string text = "t,x,y\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    append_double(text, curve.node(i));
    text += ',';
    append_double(text, curve.point(i).x);
    text += ',';
    append_double(text, curve.point(i).y);
    text += '\n';
  }
  out << text;
}

ProfileCurve read_curve_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<double> t;
  std::vector<Point> p;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!header) {
      std::string compact;
      for (char c : line)
        if (c != ' ' && c != '\t') compact += c;
      if (compact != "t,x,y") throw PreconditionError("curve csv: expected header t,x,y");
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
      throw PreconditionError("curve csv: expected three fields on line " + std::to_string(line_no));
    const std::string_view view(line);
    t.push_back(parse_double(view.substr(0, c1), line_no));
    p.push_back({parse_double(view.substr(c1 + 1, c2 - c1 - 1), line_no),
                 parse_double(view.substr(c2 + 1), line_no)});
  }
  if (!header) throw PreconditionError("curve csv: empty input");
  return {std::move(t), std::move(p)};
}

}  // namespace conelab
