#pragma once

#include <span>
#include <string_view>

namespace crgg {

enum class ThresholdMethod { max_gap, graph_search };

std::string_view method_name(ThresholdMethod m);

struct ThresholdResult {
  double r = 0.0;
  double gap_left = 0.0;   // endpoints of the widest gap (leftmost on ties);
  double gap_right = 0.0;  // both equal the point itself when n == 1
  ThresholdMethod method = ThresholdMethod::max_gap;
};

/// Least r such that the r-neighborhood graph on `points` is connected:
/// the widest consecutive gap of the sorted list. O(n log n), one working copy.
ThresholdResult connectivity_threshold(std::span<const double> points);

/// Union-find connectivity of the graph with edges {i,j : |x_i - x_j| <= r}, r > 0.
bool is_connected(std::span<const double> points, double r);

/// Search-based oracle for connectivity_threshold: bisects the distinct gap values,
/// deciding each probe with is_connected only. Requires n >= 2.
ThresholdResult threshold_by_search(std::span<const double> points);

}  // namespace crgg
