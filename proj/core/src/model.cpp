#include "typekg/model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "typekg/rng.hpp"

namespace typekg {

namespace {

constexpr double kNormGuard = 1e-12;  // subgradient guard at the L2 singularity

void check_ids(const ModelParams& params, const TypedTriple& t) {
  if (t.head.type >= params.entity_tables.size() ||
      t.head.entity >= params.entity_tables[t.head.type].rows)
    throw std::out_of_range("head entity id out of range");
  if (t.tail.type >= params.entity_tables.size() ||
      t.tail.entity >= params.entity_tables[t.tail.type].rows)
    throw std::out_of_range("tail entity id out of range");
  if (t.relation >= params.relation_table.rows)
    throw std::out_of_range("relation id out of range");
}

void normalize_row(std::span<double> row) {
  double sq = 0.0;
  for (double v : row) sq += v * v;
  double norm = std::sqrt(sq);
  if (norm < kNormGuard) return;
  for (double& v : row) v /= norm;
}

double residual_norm(const ModelParams& params, const TypedTriple& t,
                     std::vector<double>& residual) {
  auto h = params.entity_tables[t.head.type].row(t.head.entity);
  auto r = params.relation_table.row(t.relation);
  auto tl = params.entity_tables[t.tail.type].row(t.tail.entity);
  residual.resize(params.dim);
  double acc = 0.0;
  for (std::uint32_t i = 0; i < params.dim; ++i) {
    double v = h[i] + r[i] - tl[i];
    residual[i] = v;
    acc += params.norm == Norm::L2 ? v * v : std::abs(v);
  }
  return params.norm == Norm::L2 ? std::sqrt(acc) : acc;
}

// d|v|/dv: v/|v| for L2 (zero inside the guard), sign(v) for L1.
std::vector<double> norm_gradient(const std::vector<double>& residual, double norm_value,
                                  Norm norm) {
  std::vector<double> g(residual.size(), 0.0);
  if (norm == Norm::L2) {
    if (norm_value < kNormGuard) return g;
    for (std::size_t i = 0; i < residual.size(); ++i) g[i] = residual[i] / norm_value;
  } else {
    for (std::size_t i = 0; i < residual.size(); ++i)
      g[i] = residual[i] > 0.0 ? 1.0 : (residual[i] < 0.0 ? -1.0 : 0.0);
  }
  return g;
}

}  // namespace

std::string_view to_string(Norm n) { return n == Norm::L1 ? "L1" : "L2"; }

Norm norm_from_string(std::string_view s) {
  if (s == "L1" || s == "l1") return Norm::L1;
  if (s == "L2" || s == "l2") return Norm::L2;
  throw std::invalid_argument("norm must be L1 or L2, got '" + std::string(s) + "'");
}

ModelParams init_params(std::uint32_t dim, double margin, const Vocabulary& vocab,
                        std::uint64_t seed, Norm norm) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be >= 1");
  if (!(margin > 0.0)) throw std::invalid_argument("margin must be positive");

  ModelParams params;
  params.dim = dim;
  params.margin = margin;
  params.norm = norm;

  const double bound = 6.0 / std::sqrt(static_cast<double>(dim));
  Rng rng(seed);

  params.entity_tables.reserve(vocab.type_count());
  for (TypeId type = 0; type < vocab.type_count(); ++type) {
    Matrix table(vocab.entity_count(type), dim);
    for (std::size_t r = 0; r < table.rows; ++r) {
      auto row = table.row(r);
      for (double& v : row) v = rng.uniform(-bound, bound);
      normalize_row(row);
    }
    params.entity_tables.push_back(std::move(table));
  }
  params.relation_table = Matrix(vocab.relation_count(), dim);
  for (std::size_t r = 0; r < params.relation_table.rows; ++r)
    for (double& v : params.relation_table.row(r)) v = rng.uniform(-bound, bound);
  return params;
}

double score(const ModelParams& params, const TypedTriple& triple) {
  check_ids(params, triple);
  std::vector<double> residual;
  return residual_norm(params, triple, residual);
}

HingeTerm hinge(const ModelParams& params, const TypedTriple& positive,
                const TypedTriple& negative) {
  if (positive.relation != negative.relation)
    throw std::invalid_argument("hinge pair must share the relation");
  check_ids(params, positive);
  check_ids(params, negative);
  HingeTerm term;
  std::vector<double> residual;
  term.positive_score = residual_norm(params, positive, residual);
  term.negative_score = residual_norm(params, negative, residual);
  term.loss = std::max(0.0, params.margin + term.positive_score - term.negative_score);
  term.active = term.loss > 0.0;
  return term;
}

HingeGradient hinge_gradient(const ModelParams& params, const TypedTriple& positive,
                             const TypedTriple& negative) {
  if (positive.relation != negative.relation)
    throw std::invalid_argument("hinge pair must share the relation");
  check_ids(params, positive);
  check_ids(params, negative);

  HingeGradient grad;
  grad.relation = positive.relation;

  std::vector<double> res_pos, res_neg;
  double d_pos = residual_norm(params, positive, res_pos);
  double d_neg = residual_norm(params, negative, res_neg);
  grad.term.positive_score = d_pos;
  grad.term.negative_score = d_neg;
  grad.term.loss = std::max(0.0, params.margin + d_pos - d_neg);
  grad.term.active = grad.term.loss > 0.0;
  if (!grad.term.active) return grad;

  std::vector<double> g_pos = norm_gradient(res_pos, d_pos, params.norm);
  std::vector<double> g_neg = norm_gradient(res_neg, d_neg, params.norm);

  auto accumulate = [&](const EntityRef& ref, const std::vector<double>& g, double sign) {
    for (auto& [seen, acc] : grad.entity_grads) {
      if (seen == ref) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sign * g[i];
        return;
      }
    }
    std::vector<double> acc(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) acc[i] = sign * g[i];
    grad.entity_grads.emplace_back(ref, std::move(acc));
  };

  // loss = margin + |h + r - t| - |h' + r - t'|
  accumulate(positive.head, g_pos, +1.0);
  accumulate(positive.tail, g_pos, -1.0);
  accumulate(negative.head, g_neg, -1.0);
  accumulate(negative.tail, g_neg, +1.0);

  grad.relation_grad.resize(params.dim);
  for (std::uint32_t i = 0; i < params.dim; ++i)
    grad.relation_grad[i] = g_pos[i] - g_neg[i];
  return grad;
}

HingeTerm sgd_step(ModelParams& params, const TypedTriple& positive,
                   const TypedTriple& negative, double learning_rate) {
  if (learning_rate < 0.0) throw std::invalid_argument("learning rate must be >= 0");
  HingeGradient grad = hinge_gradient(params, positive, negative);
  if (!grad.term.active || learning_rate == 0.0) return grad.term;

  for (const auto& [ref, g] : grad.entity_grads) {
    auto row = params.entity_tables[ref.type].row(ref.entity);
    for (std::size_t i = 0; i < g.size(); ++i) row[i] -= learning_rate * g[i];
    normalize_row(row);
  }
  auto rel_row = params.relation_table.row(grad.relation);
  for (std::size_t i = 0; i < grad.relation_grad.size(); ++i)
    rel_row[i] -= learning_rate * grad.relation_grad[i];
  return grad.term;
}

namespace {

void write_double(std::ostream& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, p - buf);
}

double read_double(std::istream& in, const std::string& path) {
  std::string tok;
  if (!(in >> tok)) throw std::runtime_error(path + ": truncated checkpoint");
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw std::runtime_error(path + ": bad value '" + tok + "' in checkpoint");
  return v;
}

}  // namespace

void checkpoint_save(const ModelParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "typekg-model 1\n";
  out << "dim " << params.dim << "\n";
  out << "margin ";
  write_double(out, params.margin);
  out << "\nnorm " << to_string(params.norm) << "\n";
  out << "types " << params.entity_tables.size() << "\n";
  for (const auto& table : params.entity_tables) out << table.rows << "\n";
  out << "relations " << params.relation_table.rows << "\n";
  auto write_table = [&](const Matrix& m) {
    for (std::size_t r = 0; r < m.rows; ++r) {
      auto row = m.row(r);
      for (std::size_t c = 0; c < m.cols; ++c) {
        if (c) out << ' ';
        write_double(out, row[c]);
      }
      out << '\n';
    }
  };
  for (const auto& table : params.entity_tables) write_table(table);
  write_table(params.relation_table);
  if (!out) throw std::runtime_error("write failed for " + path);
}

ModelParams checkpoint_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);

  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "typekg-model")
    throw std::runtime_error(path + ": not a typekg model checkpoint");
  if (version != 1)
    throw std::runtime_error(path + ": unsupported checkpoint version " +
                             std::to_string(version));

  auto expect_key = [&](const char* key) {
    std::string k;
    if (!(in >> k) || k != key)
      throw std::runtime_error(path + ": expected '" + key + "' in checkpoint header");
  };

  ModelParams params;
  expect_key("dim");
  if (!(in >> params.dim) || params.dim == 0)
    throw std::runtime_error(path + ": bad dimension in checkpoint header");
  expect_key("margin");
  params.margin = read_double(in, path);
  expect_key("norm");
  std::string norm_str;
  in >> norm_str;
  params.norm = norm_from_string(norm_str);

  expect_key("types");
  std::size_t type_count = 0;
  if (!(in >> type_count)) throw std::runtime_error(path + ": bad type count");
  std::vector<std::size_t> entity_counts(type_count);
  for (auto& n : entity_counts)
    if (!(in >> n)) throw std::runtime_error(path + ": truncated entity counts");
  expect_key("relations");
  std::size_t relation_count = 0;
  if (!(in >> relation_count)) throw std::runtime_error(path + ": bad relation count");

  for (std::size_t t = 0; t < type_count; ++t) {
    Matrix table(entity_counts[t], params.dim);
    for (std::size_t r = 0; r < table.rows; ++r)
      for (std::size_t c = 0; c < params.dim; ++c) table(r, c) = read_double(in, path);
    params.entity_tables.push_back(std::move(table));
  }
  params.relation_table = Matrix(relation_count, params.dim);
  for (std::size_t r = 0; r < relation_count; ++r)
    for (std::size_t c = 0; c < params.dim; ++c)
      params.relation_table(r, c) = read_double(in, path);

  std::string extra;
  if (in >> extra)
    throw std::runtime_error(path + ": trailing data after checkpoint payload");
  return params;
}

}  // namespace typekg
