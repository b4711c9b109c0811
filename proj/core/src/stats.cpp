#include "typekg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace typekg {

namespace {

void validate(const MetricSeries& s) {
  if (s.x.size() != s.y.size())
    throw std::invalid_argument("series lengths differ: " + std::to_string(s.x.size()) +
                                " vs " + std::to_string(s.y.size()));
  if (s.x.size() < 3)
    throw std::invalid_argument("need at least 3 paired observations, got " +
                                std::to_string(s.x.size()));
  for (const auto* v : {&s.x, &s.y})
    for (double d : *v)
      if (!std::isfinite(d)) throw std::invalid_argument("non-finite value in series");
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double d) { return d == v.front(); });
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j hold one tied block; mean of ranks i+1..j+1
    double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const MetricSeries& series) {
  validate(series);
  if (is_constant(series.x) || is_constant(series.y))
    throw undefined_correlation("correlation undefined: '" +
                                (is_constant(series.x) ? series.x_label : series.y_label) +
                                "' is constant");
  const std::size_t n = series.x.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += series.x[i];
    mean_y += series.y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = series.x[i] - mean_x;
    const double dy = series.y[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  return cov / std::sqrt(var_x * var_y);
}

double spearman(const MetricSeries& series) {
  validate(series);
  MetricSeries ranked;
  ranked.x = average_ranks(series.x);
  ranked.y = average_ranks(series.y);
  ranked.x_label = series.x_label;
  ranked.y_label = series.y_label;
  return pearson(ranked);
}

std::vector<CorrelationRow> correlate_sweep(const SweepGrid& grid) {
  std::vector<CorrelationRow> rows;
  for (std::size_t d = 0; d < grid.dims.size(); ++d) {
    for (const char* metric : {"mrr", "mrr_r"}) {
      CorrelationRow row;
      row.k = grid.dims[d];
      row.metric = metric;

      MetricSeries series;
      series.x_label = metric;
      series.y_label = "cls_acc";
      for (std::size_t m = 0; m < grid.margins.size(); ++m) {
        const SweepCell& cell = grid.cell(m, d);
        if (!cell.ok) continue;
        series.x.push_back(row.metric == "mrr" ? cell.lp.mrr : cell.mrr_r);
        series.y.push_back(cell.cls_accuracy);
      }

      if (series.x.size() < 3) {
        row.note = "n/a: only " + std::to_string(series.x.size()) +
                   " completed margins for k=" + std::to_string(row.k);
      } else {
        try {
          row.pearson = pearson(series);
        } catch (const undefined_correlation& e) {
          row.note = std::string("n/a: ") + e.what();
        }
        try {
          row.spearman = spearman(series);
        } catch (const undefined_correlation& e) {
          if (row.note.empty()) row.note = std::string("n/a: ") + e.what();
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace typekg
