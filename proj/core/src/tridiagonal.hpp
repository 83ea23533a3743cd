#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace conelab::detail {

// Symmetric tridiagonal matrix: diag[0..m), off[k] couples k and k+1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  std::vector<double> multiply(std::span<const double> x) const;
};

// Number of eigenvalues of the pencil (k, m) below sigma, from the inertia of k - sigma m.
std::size_t count_below(const SymTridiagonal& k, const SymTridiagonal& m, double sigma);

// Solves (k - sigma m) x = rhs by LDL^T without pivoting; returns nullopt on a zero pivot.
std::optional<std::vector<double>> solve_shifted(const SymTridiagonal& k, const SymTridiagonal& m,
                                                 double sigma, std::span<const double> rhs);

// Solves a symmetric tridiagonal system with partial pivoting; nullopt when singular.
std::optional<std::vector<double>> solve_pivoted(const SymTridiagonal& a, std::span<const double> rhs);

}  // namespace conelab::detail
