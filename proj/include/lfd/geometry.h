#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lfd/numerics.h"

namespace lfd {

struct Simplex {
  std::vector<int> vertices;  // ascending point indices, n+1 of them
  Vec circumcenter;
  double circumradius = 0.0;
};

enum class TriangulationKind { kDelaunay, kUserSupplied };

std::string to_string(TriangulationKind kind);

struct Triangulation {
  std::vector<Vec> points;
  std::vector<Simplex> simplices;
  TriangulationKind kind = TriangulationKind::kDelaunay;

  int dimension() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  std::vector<Vec> vertices_of(std::size_t simplex) const;
};

/// Centre and radius of the sphere through n+1 affinely independent points.
std::pair<Vec, double> circumsphere(const std::vector<Vec>& vertices);

/// θ with Σθ = 1 and Σθᵢxᵢ = ξ. Entries are negative outside the simplex.
Vec barycentric(const std::vector<Vec>& vertices, const Vec& xi);

/// Delaunay triangulation by exhaustive search over (n+1)-subsets, cost
/// C(M, n+1)·M in-sphere tests. Cospherical ties are broken by symbolic
/// perturbation of the lifted heights in point-index order (lower index is
/// lifted higher), which selects a unique tiling.
/// Throws kDegenerateInput when the points do not span ℝⁿ or repeat.
Triangulation delaunay(const std::vector<Vec>& points);

/// Wraps a caller-provided list of simplices. Each must be affinely
/// independent; tiling is the caller's responsibility.
Triangulation make_triangulation(const std::vector<Vec>& points,
                                 const std::vector<std::vector<int>>& simplices);

inline constexpr double kLocateTolerance = 1e-9;

/// Lowest-index simplex whose barycentric coordinates of ξ are all ≥ −tol.
std::optional<std::size_t> locate(const Triangulation& tri, const Vec& xi,
                                  double tol = kLocateTolerance);

struct HullProjection {
  Vec point;    // ξ*
  Vec weights;  // θ ≥ 0 over the input points, Σθ = 1
};

/// Euclidean projection of ξ onto conv(points) (Wolfe's nearest-point
/// method). The result is checked against the variational inequality
/// (ξ−ξ*)ᵀ(y−ξ*) ≤ tol for every point y; an exhaustive search over faces
/// is used if that check fails.
HullProjection project_to_hull(const std::vector<Vec>& points, const Vec& xi);

/// Largest violation max_y (ξ−ξ*)ᵀ(y−ξ*), ≤ 0 at the exact projection.
double variational_gap(const std::vector<Vec>& points, const Vec& xi, const Vec& projection);

/// Piecewise-linear interpolant Σ θᵢ yᵢ over the simplex containing x.
/// Throws kRange when x is outside the hull.
Vec pl_interpolate(const std::vector<Vec>& points, const std::vector<Vec>& values,
                   const Triangulation& tri, const Vec& x);

}  // namespace lfd
