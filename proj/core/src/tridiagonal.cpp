#include "tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace conelab::detail {

std::vector<double> SymTridiagonal::multiply(std::span<const double> x) const {
  const std::size_t m = size();
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = diag[i] * x[i];
    if (i > 0) acc += off[i - 1] * x[i - 1];
    if (i + 1 < m) acc += off[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

std::size_t count_below(const SymTridiagonal& k, const SymTridiagonal& m, double sigma) {
  const std::size_t size = k.size();
  std::size_t negatives = 0;
  double pivot = 1.0;
  for (std::size_t i = 0; i < size; ++i) {
    double d = k.diag[i] - sigma * m.diag[i];
    if (i > 0) {
      const double e = k.off[i - 1] - sigma * m.off[i - 1];
      d -= e * e / pivot;
    }
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::abs(k.diag[i]) + 1e-300);
    if (d < 0.0) ++negatives;
    pivot = d;
  }
  return negatives;
}

std::optional<std::vector<double>> solve_shifted(const SymTridiagonal& k, const SymTridiagonal& m,
                                                 double sigma, std::span<const double> rhs) {
  const std::size_t size = k.size();
  std::vector<double> d(size), l(size, 0.0), y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < size; ++i) {
    d[i] = k.diag[i] - sigma * m.diag[i];
    if (i > 0) {
      const double e = k.off[i - 1] - sigma * m.off[i - 1];
      l[i] = e / d[i - 1];
      d[i] -= l[i] * e;
      y[i] -= l[i] * y[i - 1];
    }
    if (d[i] == 0.0 || !std::isfinite(d[i])) return std::nullopt;
  }
  std::vector<double> x(size);
  for (std::size_t i = size; i-- > 0;) {
    x[i] = y[i] / d[i];
    if (i + 1 < size) x[i] -= (k.off[i] - sigma * m.off[i]) / d[i] * x[i + 1];
  }
  return x;
}

std::optional<std::vector<double>> solve_pivoted(const SymTridiagonal& a, std::span<const double> rhs) {
  const std::size_t size = a.size();
  if (size == 0) return std::vector<double>{};
  // Row i holds entries at columns i, i+1, i+2 after elimination (dl, d, du, du2 as in gtsv).
  std::vector<double> sub(a.off), d(a.diag), sup(a.off), sup2(size, 0.0), b(rhs.begin(), rhs.end());
  sub.resize(size, 0.0);
  sup.resize(size, 0.0);
  for (std::size_t i = 0; i + 1 < size; ++i) {
    if (std::abs(d[i]) >= std::abs(sub[i])) {
      if (d[i] == 0.0) return std::nullopt;
      const double f = sub[i] / d[i];
      d[i + 1] -= f * sup[i];
      b[i + 1] -= f * b[i];
      sub[i] = 0.0;
    } else {
      const double f = d[i] / sub[i];
      d[i] = sub[i];
      const double row_d = d[i + 1];
      d[i + 1] = sup[i] - f * row_d;
      if (i + 2 < size) {
        sup2[i] = sup[i + 1];
        sup[i + 1] = -f * sup2[i];
      }
      sup[i] = row_d;
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= f * b[i];
    }
  }
  if (d[size - 1] == 0.0) return std::nullopt;
  std::vector<double> x(size);
  for (std::size_t i = size; i-- > 0;) {
    double acc = b[i];
    if (i + 1 < size) acc -= sup[i] * x[i + 1];
    if (i + 2 < size) acc -= sup2[i] * x[i + 2];
    x[i] = acc / d[i];
    if (!std::isfinite(x[i])) return std::nullopt;
  }
  return x;
}

}  // namespace conelab::detail
