#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rgglab {

/// Sum in a fixed binary-tree order; identical result for identical input order.
double pairwise_sum(std::span<const double> values);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;      ///< standard error of the mean (sample sd / sqrt(count))
  std::size_t count = 0;
};

/// Mean and standard error of per-trial values. A single value has se = 0.
MeanSe mean_se(std::span<const double> values);

/// Least-squares slope and intercept of y on x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Runs body(i) for i in [0, count) on up to `threads` worker threads.
/// Each index is visited exactly once; callers write results into slot i.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Thread count to use when the caller passes 0.
unsigned default_thread_count();

}  // namespace rgglab
