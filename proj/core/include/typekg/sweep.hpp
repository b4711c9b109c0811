#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "typekg/classifier.hpp"
#include "typekg/stats.hpp"
#include "typekg/sweep_grid.hpp"
#include "typekg/trainer.hpp"

namespace typekg {

struct SweepConfig {
  std::vector<double> margins{0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
  std::vector<std::uint32_t> dims{32, 64, 128};
  TrainConfig train;
  ClassifierConfig cls;
  std::filesystem::path out_dir;
  unsigned parallelism = 0;  // 0 = hardware concurrency
};

// Metrics the heatmap writer understands; mr ranks lower-is-better, the
// rest higher-is-better.
const std::vector<std::string>& heatmap_metrics();

// Trains and evaluates one grid cell: full replica protocol, test-split LP
// report, target-relation MRR, downstream classifier.
SweepCell run_cell(const DatasetSplits& ds, double gamma, std::uint32_t dim,
                   const TrainConfig& train_cfg, const ClassifierConfig& cls_cfg,
                   RelationId target_relation, unsigned replica_threads = 1,
                   std::vector<ReplicaResult>* replica_log = nullptr);

// Full grid over margins x dims. Completed cells already present in
// out_dir are loaded instead of recomputed; a failing cell records its
// error and the sweep continues. Emits per-cell files, heatmaps,
// correlation table and summary into out_dir.
SweepGrid run_sweep(const DatasetSplits& ds, const SweepConfig& config);

// Cell persistence: one self-describing CSV per cell.
std::filesystem::path cell_file_name(double gamma, std::uint32_t dim);
void save_cell(const SweepCell& cell, const std::string& dataset_label,
               const std::map<RelationId, std::string>& relation_names,
               const std::filesystem::path& dir);
bool load_cell(SweepCell& cell, std::string& dataset_label,
               const std::filesystem::path& file,
               std::map<RelationId, std::string>* relation_names = nullptr);

// Reconstructs a grid from the cell files in a directory (used by resume
// and by the report re-emitter). Margins and dims are discovered from the
// files and sorted ascending.
SweepGrid load_grid(const std::filesystem::path& dir);

// (a) CSV matrix with margins as rows and dims as columns, and (b) an SVG
// grid with per-column grey scale from worst (lightest) to best (darkest),
// value annotated, per-column best cell outlined. Unknown metric names
// raise std::invalid_argument listing the valid ones.
void emit_heatmap(const SweepGrid& grid, const std::string& metric,
                  const std::filesystem::path& out_base);

// cells.csv + classifier.csv + eval.csv (per-relation long format) +
// correlations.csv + heatmaps per metric + summary.txt.
void emit_report(const SweepGrid& grid, const std::filesystem::path& dir);

}  // namespace typekg
