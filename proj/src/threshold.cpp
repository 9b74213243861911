#include "crgg/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace crgg {

namespace {

void require_finite(std::span<const double> points) {
  for (const double x : points) {
    if (!std::isfinite(x)) throw std::domain_error("points must be finite reals");
  }
}

std::vector<double> sorted_copy(std::span<const double> points) {
  std::vector<double> v(points.begin(), points.end());
  std::sort(v.begin(), v.end());
  return v;
}

// Widest consecutive gap, leftmost on ties. Requires sorted input of size >= 2.
ThresholdResult widest_gap(const std::vector<double>& v, ThresholdMethod method) {
  ThresholdResult res;
  res.method = method;
  res.r = -1.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double g = v[i + 1] - v[i];
    if (g > res.r) {
      res.r = g;
      res.gap_left = v[i];
      res.gap_right = v[i + 1];
    }
  }
  return res;
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::string_view method_name(ThresholdMethod m) {
  return m == ThresholdMethod::max_gap ? "max_gap" : "graph_search";
}

ThresholdResult connectivity_threshold(std::span<const double> points) {
  if (points.empty()) throw std::domain_error("connectivity_threshold: need at least one point");
  require_finite(points);
  if (points.size() == 1) return {0.0, points[0], points[0], ThresholdMethod::max_gap};
  return widest_gap(sorted_copy(points), ThresholdMethod::max_gap);
}

bool is_connected(std::span<const double> points, double r) {
  if (points.empty()) throw std::domain_error("is_connected: need at least one point");
  if (!(r > 0.0)) throw std::domain_error("is_connected: radius must be strictly positive");
  require_finite(points);
  const std::size_t n = points.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(points[i] - points[j]) <= r) {
        uf.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    }
  }
  const std::uint32_t root = uf.find(0);
  for (std::size_t i = 1; i < n; ++i) {
    if (uf.find(static_cast<std::uint32_t>(i)) != root) return false;
  }
  return true;
}

ThresholdResult threshold_by_search(std::span<const double> points) {
  if (points.size() < 2) throw std::domain_error("threshold_by_search: need at least two points");
  require_finite(points);
  const std::vector<double> v = sorted_copy(points);

  std::vector<double> gaps;
  gaps.reserve(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double g = v[i + 1] - v[i];
    if (g > 0.0) gaps.push_back(g);
  }
  if (gaps.empty()) {
    // all points coincide: connected at every positive radius
    return {0.0, v[0], v[1], ThresholdMethod::graph_search};
  }
  std::sort(gaps.begin(), gaps.end());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());

  std::size_t lo = 0, hi = gaps.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (is_connected(points, gaps[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const double r = gaps[lo];

  ThresholdResult res;
  res.method = ThresholdMethod::graph_search;
  res.r = r;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] - v[i] == r) {
      res.gap_left = v[i];
      res.gap_right = v[i + 1];
      break;
    }
  }
  return res;
}

}  // namespace crgg
