#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "typekg/lp_eval.hpp"

namespace typekg {

// Result of one (margin, dim) grid cell: LP metrics on the test split, the
// target-relation MRR, and the downstream classifier accuracy.
struct SweepCell {
  double gamma = 0.0;
  std::uint32_t k = 0;
  bool ok = false;
  std::string error;  // set when the cell failed

  LPReport lp;
  double mrr_r = 0.0;
  double cls_accuracy = 0.0;
  double cls_valid_accuracy = 0.0;
  std::uint32_t cls_epochs = 0;
  std::uint32_t n_classes = 0;
  std::string target_relation;
  std::uint32_t chosen_replica = 0;
  double wall_seconds = 0.0;
};

struct SweepGrid {
  std::string dataset_label;
  std::vector<double> margins;       // ascending
  std::vector<std::uint32_t> dims;   // ascending
  std::vector<SweepCell> cells;      // margin-major: cells[m * dims.size() + d]
  std::map<RelationId, std::string> relation_names;

  SweepCell& cell(std::size_t margin_idx, std::size_t dim_idx) {
    return cells[margin_idx * dims.size() + dim_idx];
  }
  const SweepCell& cell(std::size_t margin_idx, std::size_t dim_idx) const {
    return cells[margin_idx * dims.size() + dim_idx];
  }
};

}  // namespace typekg
