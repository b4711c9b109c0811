#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "typekg/sweep_grid.hpp"

namespace typekg {

// Raised when a correlation is undefined (constant series); reported as
// n/a in outputs rather than a fabricated 0.
class undefined_correlation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Paired observations across the margin grid for a fixed k.
struct MetricSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string x_label;
  std::string y_label;
};

// Average (fractional) ranks, 1-based; ties receive the mean of the rank
// block they occupy.
std::vector<double> average_ranks(std::span<const double> values);

// Product-moment coefficient; throws undefined_correlation when either
// series is constant, std::invalid_argument on length mismatch / n < 3 /
// non-finite values.
double pearson(const MetricSeries& series);

// Pearson of the average-ranked series.
double spearman(const MetricSeries& series);

struct CorrelationRow {
  std::uint32_t k = 0;
  std::string metric;  // "mrr" or "mrr_r"
  std::optional<double> pearson;   // nullopt = n/a
  std::optional<double> spearman;
  std::string note;  // reason when n/a
};

// For each k and each LP metric in {MRR, MRR_r}: Pearson and Spearman
// against classifier accuracy across the margin axis, completed cells only.
std::vector<CorrelationRow> correlate_sweep(const SweepGrid& grid);

}  // namespace typekg
