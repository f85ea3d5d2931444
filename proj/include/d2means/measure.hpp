#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace d2means {

using Point = std::vector<double>;

// Indexed collection of n points sharing one dimension. Construct through
// make_dataset to get the invariants (n >= 1, d >= 1, finite coordinates)
// checked once at the boundary.
struct Dataset {
  std::vector<Point> points;

  std::size_t n() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
};

using CenterSet = std::vector<Point>;

inline Dataset make_dataset(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("dataset: needs at least one point");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw std::invalid_argument("dataset: points need at least one coordinate");
  for (const Point& p : points) {
    if (p.size() != dim) throw std::invalid_argument("dataset: points differ in dimension");
    for (double coord : p) {
      if (!std::isfinite(coord)) throw std::invalid_argument("dataset: non-finite coordinate");
    }
  }
  return Dataset{std::move(points)};
}

// A dissimilarity measure together with its declared slack constants and the
// uniform-sample size that makes the sample mean a near-optimal single
// center. The constants are declared, not verified; the check_* operations
// below spot-check them on caller-supplied tuples.
template <class M>
concept DissimilarityMeasure = requires(const M m, const Point& p, const Point& q, double gamma,
                                        double delta) {
  { m(p, q) } -> std::convertible_to<double>;
  { m.alpha } -> std::convertible_to<double>;  // triangle-inequality slack, >= 1
  { m.beta } -> std::convertible_to<double>;   // symmetry slack, in (0, 1]
  { m.sample_size(gamma, delta) } -> std::convertible_to<std::size_t>;
};

inline double sq_euclidean(const Point& p, const Point& q) {
  if (p.size() != q.size()) throw std::invalid_argument("sq_euclidean: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - q[i];
    acc += diff * diff;
  }
  return acc;
}

struct SquaredEuclidean {
  static constexpr double alpha = 2.0;
  static constexpr double beta = 1.0;

  double operator()(const Point& p, const Point& q) const { return sq_euclidean(p, q); }

  // Sample size whose mean is a (1+gamma)-approximate single center with
  // probability at least 1-delta. Rounded up: sizes are integers and
  // rounding up preserves the guarantee direction.
  static std::size_t sample_size(double gamma, double delta) {
    if (!(gamma > 0.0 && gamma <= 1.0) || !(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("sample_size: gamma in (0,1], delta in (0,1) required");
    return static_cast<std::size_t>(std::ceil(1.0 / (gamma * delta)));
  }
};

// Sum over points of the minimum dissimilarity to any center.
template <DissimilarityMeasure M>
double cost(const Dataset& data, const CenterSet& centers, const M& measure) {
  if (centers.empty()) throw std::invalid_argument("cost: empty center set");
  double total = 0.0;
  for (const Point& p : data.points) {
    double best = measure(p, centers.front());
    for (std::size_t j = 1; j < centers.size(); ++j) {
      const double d = measure(p, centers[j]);
      if (d < best) best = d;
    }
    total += best;
  }
  return total;
}

// Coordinate-wise mean; duplicates count with multiplicity.
inline Point centroid(std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("centroid: empty input");
  const std::size_t dim = points.front().size();
  Point mean(dim, 0.0);
  for (const Point& p : points) {
    if (p.size() != dim) throw std::invalid_argument("centroid: dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i) mean[i] += p[i];
  }
  const double count = static_cast<double>(points.size());
  for (double& coord : mean) coord /= count;
  return mean;
}

// Mean of the points selected by `indices` (a multiset; repeats count).
inline Point centroid_at(const Dataset& data, std::span<const std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("centroid_at: empty index set");
  Point mean(data.dim(), 0.0);
  for (std::size_t idx : indices) {
    const Point& p = data.points.at(idx);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += p[i];
  }
  const double count = static_cast<double>(indices.size());
  for (double& coord : mean) coord /= count;
  return mean;
}

// Checks the decomposition cost(P, {c}) = cost(P, {mean}) + n * D(mean, c)
// within rel_tol. Holds exactly (up to rounding) for squared Euclidean; it
// is what makes block centroids optimal single centers.
template <DissimilarityMeasure M>
bool check_centroid_property(const Dataset& data, const Point& c, const M& measure,
                             double rel_tol) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("check_centroid_property: rel_tol must be > 0");
  const Point mean = centroid(std::span<const Point>(data.points));
  const CenterSet at_c{c};
  const CenterSet at_mean{mean};
  const double lhs = cost(data, at_c, measure);
  const double rhs = cost(data, at_mean, measure) +
                     static_cast<double>(data.n()) * measure(mean, c);
  return std::abs(lhs - rhs) <= rel_tol * std::max(1.0, lhs);
}

// Spot-checks beta-approximate symmetry on the pairs and the
// alpha-approximate triangle inequality on the triples (as ordered:
// D(p,q) <= alpha * (D(p,r) + D(r,q))). Tuples are supplied by the caller,
// never drawn internally, so a failing check is reproducible.
template <DissimilarityMeasure M>
bool check_symmetry_and_triangle(std::span<const std::pair<Point, Point>> pairs,
                                 std::span<const std::array<Point, 3>> triples,
                                 const M& measure) {
  const double alpha = measure.alpha;
  const double beta = measure.beta;
  for (const auto& [p, q] : pairs) {
    const double forward = measure(p, q);
    const double backward = measure(q, p);
    if (!(beta * backward <= forward && forward <= backward / beta)) return false;
  }
  for (const auto& [p, q, r] : triples) {
    if (!(measure(p, q) <= alpha * (measure(p, r) + measure(r, q)))) return false;
  }
  return true;
}

}  // namespace d2means
