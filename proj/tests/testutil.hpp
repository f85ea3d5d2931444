#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "d2means/harness.hpp"
#include "d2means/measure.hpp"

namespace d2means::testutil {

// 1-d dataset from scalars.
inline Dataset scalar_dataset(std::initializer_list<double> values) {
  std::vector<Point> points;
  points.reserve(values.size());
  for (double v : values) points.push_back(Point{v});
  return make_dataset(std::move(points));
}

inline Dataset point_dataset(std::initializer_list<Point> rows) {
  return make_dataset(std::vector<Point>(rows));
}

inline Dataset random_dataset(std::size_t n, std::size_t d, Rng& rng) {
  return generate_instance(GeneratorKind::uniform_box, n, d, 1, rng);
}

}  // namespace d2means::testutil
