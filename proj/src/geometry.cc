#include "lfd/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lfd/errors.h"

namespace lfd {

std::string to_string(TriangulationKind kind) {
  return kind == TriangulationKind::kDelaunay ? "delaunay" : "user";
}

std::vector<Vec> Triangulation::vertices_of(std::size_t simplex) const {
  std::vector<Vec> out;
  out.reserve(simplices[simplex].vertices.size());
  for (int i : simplices[simplex].vertices) out.push_back(points[static_cast<std::size_t>(i)]);
  return out;
}

namespace {

Mat edge_matrix(const std::vector<Vec>& vertices) {
  const Eigen::Index n = vertices.front().size();
  Mat E(n, static_cast<Eigen::Index>(vertices.size()) - 1);
  for (std::size_t j = 1; j < vertices.size(); ++j) {
    E.col(static_cast<Eigen::Index>(j) - 1) = vertices[j] - vertices[0];
  }
  return E;
}

bool affinely_independent(const Mat& edges) {
  if (edges.cols() != edges.rows()) return false;
  Eigen::JacobiSVD<Mat> svd(edges);
  const Vec& s = svd.singularValues();
  return s(0) > 0.0 && s(s.size() - 1) > 1e-10 * s(0);
}

void require_simplex(const std::vector<Vec>& vertices) {
  if (vertices.empty() || vertices.size() != static_cast<std::size_t>(vertices.front().size()) + 1) {
    throw Error(ErrorKind::kInvalidDimension, "a simplex in R^n needs n+1 vertices");
  }
  if (!affinely_independent(edge_matrix(vertices))) {
    throw Error(ErrorKind::kDegenerateInput, "simplex vertices are affinely dependent");
  }
}

// Advances `combo` to the next k-subset of {0..m-1} in lexicographic order.
bool next_combination(std::vector<int>& combo, int m) {
  const int k = static_cast<int>(combo.size());
  int i = k - 1;
  while (i >= 0 && combo[static_cast<std::size_t>(i)] == m - k + i) --i;
  if (i < 0) return false;
  ++combo[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j) - 1] + 1;
  return true;
}

}  // namespace

std::pair<Vec, double> circumsphere(const std::vector<Vec>& vertices) {
  require_simplex(vertices);
  const Mat E = edge_matrix(vertices);
  Vec rhs(E.cols());
  for (Eigen::Index j = 0; j < E.cols(); ++j) rhs(j) = 0.5 * E.col(j).squaredNorm();
  // Centre relative to the first vertex: Eᵀ c = ½|eⱼ|².
  const Vec offset = E.transpose().fullPivLu().solve(rhs);
  return {vertices[0] + offset, offset.norm()};
}

Vec barycentric(const std::vector<Vec>& vertices, const Vec& xi) {
  require_simplex(vertices);
  const Mat E = edge_matrix(vertices);
  const Vec lambda = E.fullPivLu().solve(xi - vertices[0]);
  Vec theta(lambda.size() + 1);
  theta(0) = 1.0 - lambda.sum();
  theta.tail(lambda.size()) = lambda;
  return theta;
}

Triangulation delaunay(const std::vector<Vec>& points) {
  if (points.empty()) throw Error(ErrorKind::kDegenerateInput, "delaunay: no points");
  const int n = static_cast<int>(points.front().size());
  const int M = static_cast<int>(points.size());
  if (n < 1) throw Error(ErrorKind::kInvalidDimension, "delaunay: zero-dimensional points");
  if (M < n + 1) throw Error(ErrorKind::kDegenerateInput, "delaunay: need at least n+1 points");

  Vec centroid = Vec::Zero(n);
  for (const Vec& p : points) {
    if (p.size() != n) throw Error(ErrorKind::kInvalidDimension, "delaunay: mixed point dimensions");
    centroid += p;
  }
  centroid /= static_cast<double>(M);
  double scale = 0.0;
  for (const Vec& p : points) scale = std::max(scale, (p - centroid).norm());
  if (!(scale > 0.0)) throw Error(ErrorKind::kDegenerateInput, "delaunay: all points coincide");
  for (int i = 0; i < M; ++i) {
    for (int j = i + 1; j < M; ++j) {
      if ((points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)]).norm() <= 1e-12 * scale) {
        throw Error(ErrorKind::kDegenerateInput, "delaunay: duplicate points");
      }
    }
  }
  {
    Mat spread(n, M);
    for (int i = 0; i < M; ++i) spread.col(i) = points[static_cast<std::size_t>(i)] - centroid;
    Eigen::JacobiSVD<Mat> svd(spread);
    const Vec& s = svd.singularValues();
    if (s.size() < n || !(s(n - 1) > 1e-10 * s(0))) {
      throw Error(ErrorKind::kDegenerateInput, "delaunay: points do not span R^n");
    }
  }

  // Lifted heights relative to the centroid keep the in-sphere test well
  // scaled.
  std::vector<Vec> local(points.size());
  std::vector<double> height(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    local[i] = (points[i] - centroid) / scale;
    height[i] = local[i].squaredNorm();
  }
  const double tie_tol = 1e-10;

  Triangulation tri;
  tri.points = points;
  tri.kind = TriangulationKind::kDelaunay;

  std::vector<int> combo(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) combo[static_cast<std::size_t>(i)] = i;
  do {
    std::vector<Vec> verts;
    verts.reserve(combo.size());
    for (int i : combo) verts.push_back(local[static_cast<std::size_t>(i)]);
    const Mat E = edge_matrix(verts);
    if (!affinely_independent(E)) continue;
    const Eigen::FullPivLU<Mat> lu(E);

    bool empty = true;
    for (int q = 0; q < M && empty; ++q) {
      if (std::find(combo.begin(), combo.end(), q) != combo.end()) continue;
      const Vec lambda = lu.solve(local[static_cast<std::size_t>(q)] - verts[0]);
      Vec theta(n + 1);
      theta(0) = 1.0 - lambda.sum();
      theta.tail(n) = lambda;
      // Height of q above the affine lift of the simplex; negative means
      // q is strictly inside the circumsphere.
      double above = height[static_cast<std::size_t>(q)];
      for (int j = 0; j <= n; ++j) above -= theta(j) * height[static_cast<std::size_t>(combo[static_cast<std::size_t>(j)])];
      if (above < -tie_tol) {
        empty = false;
      } else if (above <= tie_tol) {
        // Cospherical: the smallest index with a non-zero perturbation
        // coefficient decides. q's own coefficient is +1; vertex j's is −θⱼ.
        int decider = q;
        double coefficient = 1.0;
        for (int j = 0; j <= n; ++j) {
          const int idx = combo[static_cast<std::size_t>(j)];
          if (idx < decider && std::abs(theta(j)) > 1e-9) {
            decider = idx;
            coefficient = -theta(j);
          }
        }
        if (coefficient < 0.0) empty = false;
      }
    }
    if (!empty) continue;

    Simplex s;
    s.vertices = combo;
    std::vector<Vec> original;
    for (int i : combo) original.push_back(points[static_cast<std::size_t>(i)]);
    std::tie(s.circumcenter, s.circumradius) = circumsphere(original);
    tri.simplices.push_back(std::move(s));
  } while (next_combination(combo, M));

  if (tri.simplices.empty()) {
    throw Error(ErrorKind::kDegenerateInput, "delaunay: no simplex found");
  }
  return tri;
}

namespace {

double simplex_volume(const std::vector<Vec>& vertices) {
  const Mat E = edge_matrix(vertices);
  double factorial = 1.0;
  for (Eigen::Index k = 2; k <= E.cols(); ++k) factorial *= static_cast<double>(k);
  return std::abs(E.determinant()) / factorial;
}

// Interiors pairwise disjoint (tested on sample points of each simplex) and
// total volume equal to that of the hull.
void check_tiling(const Triangulation& tri) {
  if (tri.simplices.empty()) throw Error(ErrorKind::kInvalidArgument, "triangulation has no simplices");
  const Triangulation reference = delaunay(tri.points);
  double hull = 0.0;
  for (std::size_t s = 0; s < reference.simplices.size(); ++s) hull += simplex_volume(reference.vertices_of(s));
  double total = 0.0;
  for (std::size_t s = 0; s < tri.simplices.size(); ++s) {
    const std::vector<Vec> v = tri.vertices_of(s);
    total += simplex_volume(v);
    Vec centroid = Vec::Zero(tri.dimension());
    for (const Vec& x : v) centroid += x;
    centroid /= static_cast<double>(v.size());
    std::vector<Vec> samples = {centroid};
    for (const Vec& x : v) samples.push_back(0.5 * (x + centroid));
    for (std::size_t other = 0; other < tri.simplices.size(); ++other) {
      if (other == s) continue;
      const std::vector<Vec> w = tri.vertices_of(other);
      for (const Vec& x : samples) {
        if (barycentric(w, x).minCoeff() > 1e-9) {
          throw Error(ErrorKind::kInvalidArgument, "triangulation simplices overlap");
        }
      }
    }
  }
  if (std::abs(total - hull) > 1e-9 * hull) {
    throw Error(ErrorKind::kInvalidArgument, "triangulation does not cover the convex hull");
  }
}

}  // namespace

Triangulation make_triangulation(const std::vector<Vec>& points,
                                 const std::vector<std::vector<int>>& simplices) {
  Triangulation tri;
  tri.points = points;
  tri.kind = TriangulationKind::kUserSupplied;
  for (std::vector<int> verts : simplices) {
    std::sort(verts.begin(), verts.end());
    std::vector<Vec> coords;
    for (int i : verts) {
      if (i < 0 || static_cast<std::size_t>(i) >= points.size()) {
        throw Error(ErrorKind::kInvalidArgument, "simplex vertex index out of range");
      }
      coords.push_back(points[static_cast<std::size_t>(i)]);
    }
    Simplex s;
    s.vertices = verts;
    std::tie(s.circumcenter, s.circumradius) = circumsphere(coords);
    tri.simplices.push_back(std::move(s));
  }
  check_tiling(tri);
  return tri;
}

std::optional<std::size_t> locate(const Triangulation& tri, const Vec& xi, double tol) {
  for (std::size_t s = 0; s < tri.simplices.size(); ++s) {
    const Vec theta = barycentric(tri.vertices_of(s), xi);
    if (theta.minCoeff() >= -tol) return s;
  }
  return std::nullopt;
}

double variational_gap(const std::vector<Vec>& points, const Vec& xi, const Vec& projection) {
  double gap = -std::numeric_limits<double>::infinity();
  const Vec d = xi - projection;
  for (const Vec& y : points) gap = std::max(gap, d.dot(y - projection));
  return gap;
}

namespace {

// Minimizer of ‖Σ αᵢ pᵢ‖ subject to Σ αᵢ = 1 over the given subset.
Vec affine_minimizer(const std::vector<Vec>& shifted, const std::vector<int>& subset) {
  const Eigen::Index k = static_cast<Eigen::Index>(subset.size());
  const Eigen::Index n = shifted.front().size();
  Mat P(n, k);
  for (Eigen::Index j = 0; j < k; ++j) P.col(j) = shifted[static_cast<std::size_t>(subset[static_cast<std::size_t>(j)])];
  Mat K = Mat::Zero(k + 1, k + 1);
  K.topLeftCorner(k, k) = P.transpose() * P;
  K.topRightCorner(k, 1).setOnes();
  K.bottomLeftCorner(1, k).setOnes();
  Vec rhs = Vec::Zero(k + 1);
  rhs(k) = 1.0;
  const Vec sol = K.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

double gap_tolerance(const std::vector<Vec>& shifted) {
  double r = 0.0;
  for (const Vec& p : shifted) r = std::max(r, p.squaredNorm());
  return 1e-10 * std::max(r, 1e-300);
}

HullProjection wolfe(const std::vector<Vec>& points, const Vec& xi) {
  const std::size_t M = points.size();
  std::vector<Vec> shifted(M);
  for (std::size_t i = 0; i < M; ++i) shifted[i] = points[i] - xi;
  const double tol = gap_tolerance(shifted);

  std::size_t start = 0;
  for (std::size_t i = 1; i < M; ++i) {
    if (shifted[i].squaredNorm() < shifted[start].squaredNorm()) start = i;
  }
  std::vector<int> active{static_cast<int>(start)};
  std::vector<double> lambda{1.0};
  Vec x = shifted[start];

  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < M; ++i) {
      const double d = x.dot(shifted[i]);
      if (d < best) {
        best = d;
        j = i;
      }
    }
    if (best >= x.squaredNorm() - tol) break;
    if (std::find(active.begin(), active.end(), static_cast<int>(j)) != active.end()) break;
    active.push_back(static_cast<int>(j));
    lambda.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const Vec alpha = affine_minimizer(shifted, active);
      if (alpha.minCoeff() > 1e-14) {
        for (std::size_t k = 0; k < lambda.size(); ++k) lambda[k] = alpha(static_cast<Eigen::Index>(k));
        break;
      }
      double theta = 1.0;
      for (std::size_t k = 0; k < lambda.size(); ++k) {
        const double a = alpha(static_cast<Eigen::Index>(k));
        if (a <= 1e-14 && lambda[k] - a > 0.0) theta = std::min(theta, lambda[k] / (lambda[k] - a));
      }
      std::vector<int> kept;
      std::vector<double> kept_lambda;
      for (std::size_t k = 0; k < lambda.size(); ++k) {
        const double value = theta * alpha(static_cast<Eigen::Index>(k)) + (1.0 - theta) * lambda[k];
        if (value > 1e-14) {
          kept.push_back(active[k]);
          kept_lambda.push_back(value);
        }
      }
      if (kept.empty()) break;
      active = std::move(kept);
      lambda = std::move(kept_lambda);
    }
    double total = 0.0;
    for (double l : lambda) total += l;
    x.setZero();
    for (std::size_t k = 0; k < active.size(); ++k) {
      lambda[k] /= total;
      x += lambda[k] * shifted[static_cast<std::size_t>(active[k])];
    }
  }

  HullProjection out;
  out.weights = Vec::Zero(static_cast<Eigen::Index>(M));
  for (std::size_t k = 0; k < active.size(); ++k) out.weights(active[k]) = lambda[k];
  out.point = xi + x;
  return out;
}

HullProjection exhaustive_projection(const std::vector<Vec>& points, const Vec& xi) {
  const int M = static_cast<int>(points.size());
  const int n = static_cast<int>(xi.size());
  std::vector<Vec> shifted(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) shifted[i] = points[i] - xi;
  HullProjection best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= std::min(M, n + 1); ++k) {
    std::vector<int> combo(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = i;
    do {
      const Vec alpha = affine_minimizer(shifted, combo);
      if (alpha.minCoeff() < -1e-12) continue;
      Vec weights = Vec::Zero(M);
      Vec x = Vec::Zero(n);
      for (int j = 0; j < k; ++j) {
        const double a = std::max(0.0, alpha(j));
        weights(combo[static_cast<std::size_t>(j)]) = a;
        x += a * shifted[static_cast<std::size_t>(combo[static_cast<std::size_t>(j)])];
      }
      weights /= weights.sum();
      const double dist = x.norm();
      if (dist < best_dist) {
        best_dist = dist;
        best.weights = weights;
        best.point = xi + x;
      }
    } while (next_combination(combo, M));
  }
  return best;
}

}  // namespace

HullProjection project_to_hull(const std::vector<Vec>& points, const Vec& xi) {
  if (points.empty()) throw Error(ErrorKind::kInvalidArgument, "project_to_hull: no points");
  HullProjection proj = wolfe(points, xi);
  double r2 = 0.0;
  for (const Vec& p : points) r2 = std::max(r2, (p - xi).squaredNorm());
  if (variational_gap(points, xi, proj.point) > 1e-9 * std::max(r2, 1e-300)) {
    proj = exhaustive_projection(points, xi);
  }
  return proj;
}

Vec pl_interpolate(const std::vector<Vec>& points, const std::vector<Vec>& values,
                   const Triangulation& tri, const Vec& x) {
  if (values.size() != points.size()) {
    throw Error(ErrorKind::kInvalidArgument, "pl_interpolate: one value per point required");
  }
  const auto simplex = locate(tri, x);
  if (!simplex) throw Error(ErrorKind::kRange, "pl_interpolate: point outside the convex hull");
  std::vector<Vec> verts;
  for (int i : tri.simplices[*simplex].vertices) verts.push_back(points[static_cast<std::size_t>(i)]);
  const Vec theta = barycentric(verts, x);
  Vec out = Vec::Zero(values.front().size());
  const auto& idx = tri.simplices[*simplex].vertices;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out += theta(static_cast<Eigen::Index>(j)) * values[static_cast<std::size_t>(idx[j])];
  }
  return out;
}

}  // namespace lfd
