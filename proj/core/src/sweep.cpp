#include "typekg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "typekg/text.hpp"

namespace typekg {

namespace fs = std::filesystem;

const std::vector<std::string>& heatmap_metrics() {
  static const std::vector<std::string> metrics = {"mrr", "mrr_r", "cls_acc", "mr",
                                                   "hits1", "hits3", "hits10"};
  return metrics;
}

namespace {

double metric_value(const SweepCell& cell, const std::string& metric) {
  if (metric == "mrr") return cell.lp.mrr;
  if (metric == "mrr_r") return cell.mrr_r;
  if (metric == "cls_acc") return cell.cls_accuracy;
  if (metric == "mr") return cell.lp.mean_rank;
  if (metric == "hits1") return cell.lp.hits1;
  if (metric == "hits3") return cell.lp.hits3;
  if (metric == "hits10") return cell.lp.hits10;
  std::string valid;
  for (const auto& m : heatmap_metrics()) valid += (valid.empty() ? "" : ", ") + m;
  throw std::invalid_argument("unknown metric '" + metric + "' (valid: " + valid + ")");
}

bool lower_is_better(const std::string& metric) { return metric == "mr"; }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

SweepCell run_cell(const DatasetSplits& ds, double gamma, std::uint32_t dim,
                   const TrainConfig& train_cfg, const ClassifierConfig& cls_cfg,
                   RelationId target_relation, unsigned replica_threads,
                   std::vector<ReplicaResult>* replica_log) {
  SweepCell cell;
  cell.gamma = gamma;
  cell.k = dim;
  cell.target_relation = ds.vocab.relation_name(target_relation);

  TrainOutcome outcome = train_model(ds, dim, gamma, train_cfg, replica_threads);
  const ReplicaResult& winner = outcome.replicas[outcome.chosen];
  cell.chosen_replica = winner.replica_index;

  cell.lp = evaluate(winner.params, ds.test);
  cell.mrr_r = mrr_for_relation(cell.lp, target_relation);

  ClassifierTask task = build_task(ds, target_relation, cls_cfg.seed);
  ClassifierResult cls = train_classifier(task, winner.params, cls_cfg);
  cell.cls_accuracy = cls.test_accuracy;
  cell.cls_valid_accuracy = cls.valid_accuracy;
  cell.cls_epochs = cls.epochs_run;
  cell.n_classes = static_cast<std::uint32_t>(task.classes.size());

  if (replica_log != nullptr) *replica_log = std::move(outcome.replicas);
  cell.ok = true;
  return cell;
}

fs::path cell_file_name(double gamma, std::uint32_t dim) {
  return fs::path("cell_g" + format_double(gamma) + "_k" + std::to_string(dim) + ".csv");
}

void save_cell(const SweepCell& cell, const std::string& dataset_label,
               const std::map<RelationId, std::string>& relation_names, const fs::path& dir) {
  std::ofstream out = open_out(dir / cell_file_name(cell.gamma, cell.k));
  out << "key,arg,value\n";
  auto kv = [&](const std::string& key, const std::string& value) {
    out << key << ",," << csv_escape(value) << "\n";
  };
  kv("format", "typekg-cell 1");
  kv("dataset", dataset_label);
  kv("gamma", format_double(cell.gamma));
  kv("k", std::to_string(cell.k));
  kv("status", cell.ok ? "ok" : "failed");
  if (!cell.ok) {
    kv("error", cell.error);
    return;
  }
  kv("mrr", format_double(cell.lp.mrr));
  kv("mr", format_double(cell.lp.mean_rank));
  kv("hits1", format_double(cell.lp.hits1));
  kv("hits3", format_double(cell.lp.hits3));
  kv("hits10", format_double(cell.lp.hits10));
  kv("query_count", std::to_string(cell.lp.query_count));
  kv("mrr_r", format_double(cell.mrr_r));
  kv("cls_acc", format_double(cell.cls_accuracy));
  kv("cls_valid_acc", format_double(cell.cls_valid_accuracy));
  kv("cls_epochs", std::to_string(cell.cls_epochs));
  kv("n_classes", std::to_string(cell.n_classes));
  kv("target_relation", cell.target_relation);
  kv("chosen_replica", std::to_string(cell.chosen_replica));
  kv("wall_seconds", format_double(cell.wall_seconds));
  for (const auto& [rel, mrr] : cell.lp.per_relation_mrr) {
    out << "rel_mrr," << rel << ',' << format_double(mrr) << "\n";
    out << "rel_queries," << rel << ','
        << std::to_string(cell.lp.per_relation_queries.at(rel)) << "\n";
    auto it = relation_names.find(rel);
    if (it != relation_names.end())
      out << "rel_name," << rel << ',' << csv_escape(it->second) << "\n";
  }
}

bool load_cell(SweepCell& cell, std::string& dataset_label, const fs::path& file,
               std::map<RelationId, std::string>* relation_names) {
  std::ifstream in(file);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  bool have_format = false;
  cell = SweepCell{};
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto fields = split_csv_line(line);
      if (fields.size() != 3) return false;
      const std::string& key = fields[0];
      const std::string& arg = fields[1];
      const std::string& value = fields[2];
      if (key == "format") {
        have_format = value == "typekg-cell 1";
      } else if (key == "dataset") {
        dataset_label = value;
      } else if (key == "gamma") {
        cell.gamma = parse_double(value);
      } else if (key == "k") {
        cell.k = static_cast<std::uint32_t>(std::stoul(value));
      } else if (key == "status") {
        cell.ok = value == "ok";
      } else if (key == "error") {
        cell.error = value;
      } else if (key == "mrr") {
        cell.lp.mrr = parse_double(value);
      } else if (key == "mr") {
        cell.lp.mean_rank = parse_double(value);
      } else if (key == "hits1") {
        cell.lp.hits1 = parse_double(value);
      } else if (key == "hits3") {
        cell.lp.hits3 = parse_double(value);
      } else if (key == "hits10") {
        cell.lp.hits10 = parse_double(value);
      } else if (key == "query_count") {
        cell.lp.query_count = std::stoull(value);
      } else if (key == "mrr_r") {
        cell.mrr_r = parse_double(value);
      } else if (key == "cls_acc") {
        cell.cls_accuracy = parse_double(value);
      } else if (key == "cls_valid_acc") {
        cell.cls_valid_accuracy = parse_double(value);
      } else if (key == "cls_epochs") {
        cell.cls_epochs = static_cast<std::uint32_t>(std::stoul(value));
      } else if (key == "n_classes") {
        cell.n_classes = static_cast<std::uint32_t>(std::stoul(value));
      } else if (key == "target_relation") {
        cell.target_relation = value;
      } else if (key == "chosen_replica") {
        cell.chosen_replica = static_cast<std::uint32_t>(std::stoul(value));
      } else if (key == "wall_seconds") {
        cell.wall_seconds = parse_double(value);
      } else if (key == "rel_mrr") {
        cell.lp.per_relation_mrr[static_cast<RelationId>(std::stoul(arg))] =
            parse_double(value);
      } else if (key == "rel_queries") {
        cell.lp.per_relation_queries[static_cast<RelationId>(std::stoul(arg))] =
            std::stoull(value);
      } else if (key == "rel_name") {
        if (relation_names != nullptr)
          (*relation_names)[static_cast<RelationId>(std::stoul(arg))] = value;
      }
    }
  } catch (const std::exception&) {
    return false;
  }
  return have_format;
}

SweepGrid load_grid(const fs::path& dir) {
  SweepGrid grid;
  std::vector<std::pair<SweepCell, std::string>> loaded;
  std::set<double> margins;
  std::set<std::uint32_t> dims;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("cell_", 0) != 0 || entry.path().extension() != ".csv") continue;
    SweepCell cell;
    std::string label;
    if (!load_cell(cell, label, entry.path(), &grid.relation_names)) continue;
    margins.insert(cell.gamma);
    dims.insert(cell.k);
    loaded.emplace_back(std::move(cell), std::move(label));
  }
  if (loaded.empty()) throw std::runtime_error("no cell files found in " + dir.string());

  grid.dataset_label = loaded.front().second;
  grid.margins.assign(margins.begin(), margins.end());
  grid.dims.assign(dims.begin(), dims.end());
  grid.cells.resize(grid.margins.size() * grid.dims.size());
  for (std::size_t m = 0; m < grid.margins.size(); ++m)
    for (std::size_t d = 0; d < grid.dims.size(); ++d) {
      grid.cell(m, d).gamma = grid.margins[m];
      grid.cell(m, d).k = grid.dims[d];
      grid.cell(m, d).error = "cell file missing";
    }
  for (auto& [cell, label] : loaded) {
    auto m = std::lower_bound(grid.margins.begin(), grid.margins.end(), cell.gamma) -
             grid.margins.begin();
    auto d = std::lower_bound(grid.dims.begin(), grid.dims.end(), cell.k) - grid.dims.begin();
    grid.cell(static_cast<std::size_t>(m), static_cast<std::size_t>(d)) = std::move(cell);
  }
  return grid;
}

void emit_heatmap(const SweepGrid& grid, const std::string& metric, const fs::path& out_base) {
  if (grid.cells.empty()) throw std::invalid_argument("empty sweep grid");
  const std::size_t n_margins = grid.margins.size();
  const std::size_t n_dims = grid.dims.size();

  // CSV matrix: margins as rows, dims as columns.
  {
    std::ofstream out = open_out(fs::path(out_base.string() + ".csv"));
    out << "gamma";
    for (auto k : grid.dims) out << ",k" << k;
    out << "\n";
    for (std::size_t m = 0; m < n_margins; ++m) {
      out << format_double(grid.margins[m]);
      for (std::size_t d = 0; d < n_dims; ++d) {
        const SweepCell& cell = grid.cell(m, d);
        out << ',';
        if (cell.ok) out << format_double(metric_value(cell, metric));
      }
      out << "\n";
    }
  }

  // SVG: per-column grey scale, worst lightest, best darkest, best outlined.
  const int cell_w = 110, cell_h = 40, left = 70, top = 50;
  const int width = left + cell_w * static_cast<int>(n_dims) + 20;
  const int height = top + cell_h * static_cast<int>(n_margins) + 20;

  std::vector<double> best(n_dims, 0.0), worst(n_dims, 0.0);
  std::vector<bool> has_range(n_dims, false);
  for (std::size_t d = 0; d < n_dims; ++d) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t m = 0; m < n_margins; ++m) {
      const SweepCell& cell = grid.cell(m, d);
      if (!cell.ok) continue;
      double v = metric_value(cell, metric);
      if (first) {
        lo = hi = v;
        first = false;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (first) continue;
    has_range[d] = true;
    best[d] = lower_is_better(metric) ? lo : hi;
    worst[d] = lower_is_better(metric) ? hi : lo;
  }

  std::ofstream svg = open_out(fs::path(out_base.string() + ".svg"));
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  svg << "<text x=\"" << left << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"15\">"
      << grid.dataset_label << " &#8212; " << metric << "</text>\n";
  for (std::size_t d = 0; d < n_dims; ++d)
    svg << "<text x=\"" << left + cell_w * static_cast<int>(d) + cell_w / 2 << "\" y=\""
        << top - 8 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">k="
        << grid.dims[d] << "</text>\n";

  char buf[64];
  for (std::size_t m = 0; m < n_margins; ++m) {
    svg << "<text x=\"" << left - 8 << "\" y=\"" << top + cell_h * static_cast<int>(m) + 25
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">&#947;="
        << format_double(grid.margins[m]) << "</text>\n";
    for (std::size_t d = 0; d < n_dims; ++d) {
      const SweepCell& cell = grid.cell(m, d);
      const int x = left + cell_w * static_cast<int>(d);
      const int y = top + cell_h * static_cast<int>(m);
      if (!cell.ok) {
        svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
            << "\" height=\"" << cell_h << "\" fill=\"white\" stroke=\"#999\"/>\n";
        svg << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + 25
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
               "fill=\"#999\">n/a</text>\n";
        continue;
      }
      double v = metric_value(cell, metric);
      // lightness from 0.92 (worst) down to 0.25 (best); flat column = mid
      double t = 0.5;
      if (has_range[d] && best[d] != worst[d]) t = (v - worst[d]) / (best[d] - worst[d]);
      double lightness = 0.92 - t * (0.92 - 0.25);
      int shade = static_cast<int>(std::lround(lightness * 255.0));
      bool is_best = has_range[d] && v == best[d];
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
          << "\" height=\"" << cell_h << "\" fill=\"rgb(" << shade << ',' << shade << ','
          << shade << ")\" stroke=\"" << (is_best ? "#c21807" : "#999") << "\" stroke-width=\""
          << (is_best ? 3 : 1) << "\"/>\n";
      std::snprintf(buf, sizeof(buf), "%.3f", v);
      svg << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + 25
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\""
          << (lightness < 0.55 ? "white" : "black") << "\">" << buf << "</text>\n";
    }
  }
  svg << "</svg>\n";
}

namespace {

void write_cells_csv(const SweepGrid& grid, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "dataset,gamma,k,status,mrr,mr,hits1,hits3,hits10,mrr_r,cls_acc,"
         "target_relation,chosen_replica,wall_seconds,error\n";
  for (const auto& cell : grid.cells) {
    out << csv_escape(grid.dataset_label) << ',' << format_double(cell.gamma) << ','
        << cell.k << ',' << (cell.ok ? "ok" : "failed") << ',';
    if (cell.ok) {
      out << format_double(cell.lp.mrr) << ',' << format_double(cell.lp.mean_rank) << ','
          << format_double(cell.lp.hits1) << ',' << format_double(cell.lp.hits3) << ','
          << format_double(cell.lp.hits10) << ',' << format_double(cell.mrr_r) << ','
          << format_double(cell.cls_accuracy) << ',' << csv_escape(cell.target_relation)
          << ',' << cell.chosen_replica << ',' << format_double(cell.wall_seconds) << ",\n";
    } else {
      out << ",,,,,,,,,," << csv_escape(cell.error) << "\n";
    }
  }
}

void write_classifier_csv(const SweepGrid& grid, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "gamma,k,target_relation,n_classes,val_acc,test_acc,epochs_run\n";
  for (const auto& cell : grid.cells) {
    if (!cell.ok) continue;
    out << format_double(cell.gamma) << ',' << cell.k << ','
        << csv_escape(cell.target_relation) << ',' << cell.n_classes << ','
        << format_double(cell.cls_valid_accuracy) << ',' << format_double(cell.cls_accuracy)
        << ',' << cell.cls_epochs << "\n";
  }
}

void write_eval_csv(const SweepGrid& grid, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "split,gamma,k,mrr,mr,hits1,hits3,hits10,mrr_r,relation\n";
  for (const auto& cell : grid.cells) {
    if (!cell.ok) continue;
    auto prefix = [&] {
      out << "test," << format_double(cell.gamma) << ',' << cell.k << ','
          << format_double(cell.lp.mrr) << ',' << format_double(cell.lp.mean_rank) << ','
          << format_double(cell.lp.hits1) << ',' << format_double(cell.lp.hits3) << ','
          << format_double(cell.lp.hits10) << ',';
    };
    prefix();
    out << format_double(cell.lp.mrr) << ",ALL\n";
    for (const auto& [rel, mrr] : cell.lp.per_relation_mrr) {
      prefix();
      auto it = grid.relation_names.find(rel);
      std::string name = it != grid.relation_names.end() ? it->second : std::to_string(rel);
      out << format_double(mrr) << ',' << csv_escape(name) << "\n";
    }
  }
}

void write_correlations_csv(const std::vector<CorrelationRow>& rows,
                            const std::string& dataset, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "dataset,k,metric,pearson,spearman\n";
  for (const auto& row : rows) {
    out << csv_escape(dataset) << ',' << row.k << ',' << row.metric << ','
        << (row.pearson ? format_double(*row.pearson) : "n/a") << ','
        << (row.spearman ? format_double(*row.spearman) : "n/a") << "\n";
  }
}

void write_summary(const SweepGrid& grid, const std::vector<CorrelationRow>& rows,
                   const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "sweep summary: dataset '" << grid.dataset_label << "', " << grid.margins.size()
      << " margins x " << grid.dims.size() << " dims\n\n";

  std::size_t failed = 0;
  for (const auto& cell : grid.cells)
    if (!cell.ok) ++failed;
  out << "cells: " << grid.cells.size() - failed << " ok, " << failed << " failed\n";
  for (const auto& cell : grid.cells)
    if (!cell.ok)
      out << "  failed gamma=" << format_double(cell.gamma) << " k=" << cell.k << ": "
          << cell.error << "\n";
  out << "\nbest cells per metric:\n";
  for (const auto& metric : heatmap_metrics()) {
    const SweepCell* best = nullptr;
    for (const auto& cell : grid.cells) {
      if (!cell.ok) continue;
      if (best == nullptr) {
        best = &cell;
        continue;
      }
      double v = metric_value(cell, metric), b = metric_value(*best, metric);
      if (lower_is_better(metric) ? v < b : v > b) best = &cell;
    }
    out << "  " << metric << ": ";
    if (best == nullptr) {
      out << "n/a (no completed cells)\n";
    } else {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.4f", metric_value(*best, metric));
      out << buf << " at gamma=" << format_double(best->gamma) << " k=" << best->k << "\n";
    }
  }

  // coefficient blocks laid out like the published table: one block per
  // coefficient kind, k rows, MRR and MRR_r columns
  for (const char* kind : {"pearson", "spearman"}) {
    out << "\n" << kind << " correlation (LP metric vs classifier accuracy):\n";
    out << "  k      MRR        MRR_r\n";
    for (auto k : grid.dims) {
      std::string mrr_v = "n/a", mrr_r_v = "n/a";
      for (const auto& row : rows) {
        if (row.k != k) continue;
        const auto& coeff = std::string(kind) == "pearson" ? row.pearson : row.spearman;
        std::string text = "n/a";
        if (coeff) {
          char num[32];
          std::snprintf(num, sizeof(num), "%.3f", *coeff);
          text = num;
        }
        (row.metric == "mrr" ? mrr_v : mrr_r_v) = text;
      }
      char buf[96];
      std::snprintf(buf, sizeof(buf), "  %-6u %-10s %-10s\n", k, mrr_v.c_str(),
                    mrr_r_v.c_str());
      out << buf;
    }
  }
  bool any_note = false;
  for (const auto& row : rows)
    if (!row.note.empty()) {
      if (!any_note) out << "\nnotes:\n";
      any_note = true;
      out << "  k=" << row.k << " " << row.metric << ": " << row.note << "\n";
    }
}

}  // namespace

void emit_report(const SweepGrid& grid, const fs::path& dir) {
  fs::create_directories(dir);
  write_cells_csv(grid, dir / "cells.csv");
  write_classifier_csv(grid, dir / "classifier.csv");
  write_eval_csv(grid, dir / "eval.csv");
  auto rows = correlate_sweep(grid);
  write_correlations_csv(rows, grid.dataset_label, dir / "correlations.csv");
  write_summary(grid, rows, dir / "summary.txt");
  for (const auto& metric : heatmap_metrics())
    emit_heatmap(grid, metric, dir / ("heatmap_" + metric));
}

SweepGrid run_sweep(const DatasetSplits& ds, const SweepConfig& config) {
  if (config.margins.empty() || config.dims.empty())
    throw std::invalid_argument("sweep needs at least one margin and one dim");
  for (std::size_t i = 1; i < config.margins.size(); ++i)
    if (config.margins[i] <= config.margins[i - 1])
      throw std::invalid_argument("margins must be strictly increasing");
  for (std::size_t i = 1; i < config.dims.size(); ++i)
    if (config.dims[i] <= config.dims[i - 1])
      throw std::invalid_argument("dims must be strictly increasing");

  fs::create_directories(config.out_dir);

  SweepGrid grid;
  grid.dataset_label = ds.label;
  grid.margins = config.margins;
  grid.dims = config.dims;
  grid.cells.resize(grid.margins.size() * grid.dims.size());
  for (RelationId r = 0; r < ds.vocab.relation_count(); ++r)
    grid.relation_names[r] = ds.vocab.relation_name(r);

  const RelationId target = select_target_relation(ds);

  struct Pending {
    std::size_t margin_idx;
    std::size_t dim_idx;
  };
  std::vector<Pending> pending;
  for (std::size_t m = 0; m < grid.margins.size(); ++m) {
    for (std::size_t d = 0; d < grid.dims.size(); ++d) {
      SweepCell& cell = grid.cell(m, d);
      cell.gamma = grid.margins[m];
      cell.k = grid.dims[d];
      fs::path file = config.out_dir / cell_file_name(cell.gamma, cell.k);
      SweepCell loaded;
      std::string label;
      if (fs::exists(file) && load_cell(loaded, label, file) && loaded.ok &&
          label == ds.label && loaded.gamma == cell.gamma && loaded.k == cell.k) {
        cell = std::move(loaded);
      } else {
        pending.push_back({m, d});
      }
    }
  }

  unsigned hw = std::thread::hardware_concurrency();
  unsigned parallel = config.parallelism > 0 ? config.parallelism : std::max(1u, hw);
  unsigned cell_workers =
      std::max<std::size_t>(1, std::min<std::size_t>(parallel, pending.size()));
  unsigned replica_threads = std::max(1u, parallel / cell_workers);

  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < pending.size(); i = next.fetch_add(1)) {
      SweepCell& cell = grid.cell(pending[i].margin_idx, pending[i].dim_idx);
      auto start = std::chrono::steady_clock::now();
      std::vector<ReplicaResult> replicas;
      try {
        SweepCell computed = run_cell(ds, cell.gamma, cell.k, config.train, config.cls,
                                      target, replica_threads, &replicas);
        computed.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        cell = std::move(computed);
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      std::lock_guard<std::mutex> lock(io_mutex);
      save_cell(cell, ds.label, grid.relation_names, config.out_dir);
      if (!replicas.empty()) {
        std::ofstream log = open_out(
            config.out_dir / fs::path("train_g" + format_double(cell.gamma) + "_k" +
                                      std::to_string(cell.k) + ".csv"));
        log << "replica,epoch,mean_loss,valid_mrr\n";
        for (const auto& replica : replicas)
          for (const auto& point : replica.curve)
            log << replica.replica_index << ',' << point.epoch << ','
                << format_double(point.mean_loss) << ',' << format_double(point.valid_mrr)
                << "\n";
      }
    }
  };

  if (cell_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < cell_workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  emit_report(grid, config.out_dir);
  return grid;
}

}  // namespace typekg
