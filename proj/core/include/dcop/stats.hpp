#pragma once

#include <span>

namespace dcop {

struct PenaltyStats {
  double mean = 0.0;
  double normalized_iqr = 0.0;
  double cv = 0.0;
  bool empty = false;
};

/// Mean, interquartile range over mean, and coefficient of variation
/// (population stddev over mean) of a pool of penalty values. Quartiles use
/// linear interpolation between order statistics. Both ratios are 0 when the
/// mean is 0; an empty pool gives all zeros with `empty` set.
PenaltyStats penalty_stats(std::span<const double> values);

/// Linear-interpolated quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Pearson correlation coefficient; 0 if either series is constant.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace dcop
