// Copyright 2026 The RGAE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rgae/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "rgae/error.h"

namespace rgae {
namespace fs = std::filesystem;

SparseAdjacency SparseAdjacency::FromCsr(std::size_t n,
                                         std::vector<std::size_t> row_offsets,
                                         std::vector<std::uint32_t> col_indices,
                                         std::vector<double> values) {
  auto malformed = [](const std::string& what) {
    return Error(ErrorCode::kIndexOutOfRange, "malformed CSR: " + what);
  };
  if (row_offsets.size() != n + 1 || row_offsets.front() != 0 ||
      row_offsets.back() != col_indices.size()) {
    throw malformed("row offsets inconsistent with node or entry count");
  }
  if (values.size() != col_indices.size()) {
    throw malformed("values and column indices differ in length");
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (row_offsets[r] > row_offsets[r + 1]) throw malformed("decreasing row offsets");
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      if (col_indices[k] >= n) {
        throw malformed("column " + std::to_string(col_indices[k]) + " >= n");
      }
      if (col_indices[k] == r) throw malformed("stored self-loop at row " + std::to_string(r));
      if (k > row_offsets[r] && col_indices[k] <= col_indices[k - 1]) {
        throw malformed("columns not strictly increasing in row " + std::to_string(r));
      }
    }
  }

  SparseAdjacency adj;
  adj.n_ = n;
  adj.row_offsets_ = std::move(row_offsets);
  adj.col_indices_ = std::move(col_indices);
  adj.values_ = std::move(values);
  adj.is_symmetric_ = true;
  for (std::size_t r = 0; r < n && adj.is_symmetric_; ++r) {
    for (std::size_t k = adj.row_offsets_[r]; k < adj.row_offsets_[r + 1]; ++k) {
      const std::uint32_t c = adj.col_indices_[k];
      auto mirror = adj.neighbors(c);
      auto it = std::lower_bound(mirror.begin(), mirror.end(), static_cast<std::uint32_t>(r));
      if (it == mirror.end() || *it != r ||
          adj.values_[adj.row_offsets_[c] + (it - mirror.begin())] != adj.values_[k]) {
        adj.is_symmetric_ = false;
        break;
      }
    }
  }
  return adj;
}

SparseAdjacency SparseAdjacency::FromUndirectedEdges(std::size_t n,
                                                     std::span<const WeightedEdge> edges) {
  std::vector<WeightedEdge> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.src >= n || e.dst >= n) {
      throw Error(ErrorCode::kIndexOutOfRange, "edge endpoint exceeds node count");
    }
    if (e.src == e.dst) continue;
    directed.push_back(e);
    directed.push_back({e.dst, e.src, e.weight});
  }
  std::sort(directed.begin(), directed.end(), [](const auto& a, const auto& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  cols.reserve(directed.size());
  vals.reserve(directed.size());
  for (std::size_t i = 0; i < directed.size(); ++i) {
    const auto& e = directed[i];
    if (i > 0 && directed[i - 1].src == e.src && directed[i - 1].dst == e.dst) {
      vals.back() = std::max(vals.back(), e.weight);
      continue;
    }
    cols.push_back(e.dst);
    vals.push_back(e.weight);
    ++offsets[e.src + 1];
  }
  for (std::size_t r = 0; r < n; ++r) offsets[r + 1] += offsets[r];
  return FromCsr(n, std::move(offsets), std::move(cols), std::move(vals));
}

bool SparseAdjacency::HasEdge(std::uint32_t u, std::uint32_t v) const {
  if (u >= n_ || v >= n_) return false;
  auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SparseAdjacency::UpperPairs() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(nnz() / 2);
  for (std::uint32_t r = 0; r < n_; ++r) {
    for (std::uint32_t c : neighbors(r)) {
      if (c > r) pairs.emplace_back(r, c);
    }
  }
  return pairs;
}

Tensor NormalizedAdjacency::ToDense() const {
  Tensor dense(n_, n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      dense(r, col_indices_[k]) = values_[k];
    }
  }
  return dense;
}

NormalizedAdjacency Normalize(const SparseAdjacency& adj) {
  if (!adj.is_symmetric()) {
    throw Error(ErrorCode::kNonSymmetric, "adjacency has an edge without an equal mirror");
  }
  const std::size_t n = adj.n();
  const auto offsets = adj.row_offsets();
  const auto cols = adj.col_indices();
  const auto vals = adj.values();

  std::vector<double> inv_sqrt_degree(n);
  for (std::size_t r = 0; r < n; ++r) {
    double degree = 1.0;
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) degree += vals[k];
    inv_sqrt_degree[r] = 1.0 / std::sqrt(degree);
  }

  NormalizedAdjacency out;
  out.n_ = n;
  out.row_offsets_.assign(n + 1, 0);
  out.col_indices_.reserve(adj.nnz() + n);
  out.values_.reserve(adj.nnz() + n);
  for (std::size_t r = 0; r < n; ++r) {
    bool diagonal_done = false;
    auto emit_diagonal = [&] {
      out.col_indices_.push_back(static_cast<std::uint32_t>(r));
      out.values_.push_back(inv_sqrt_degree[r] * inv_sqrt_degree[r]);
      diagonal_done = true;
    };
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      const std::uint32_t c = cols[k];
      if (!diagonal_done && c > r) emit_diagonal();
      out.col_indices_.push_back(c);
      out.values_.push_back(vals[k] * (inv_sqrt_degree[r] * inv_sqrt_degree[c]));
    }
    if (!diagonal_done) emit_diagonal();
    out.row_offsets_[r + 1] = out.col_indices_.size();
  }
  return out;
}

Tensor Spmm(const NormalizedAdjacency& norm, const Tensor& dense) {
  if (norm.n() != dense.rows()) {
    throw Error(ErrorCode::kShapeMismatch,
                "spmm: adjacency has " + std::to_string(norm.n()) +
                    " columns but dense operand has " + std::to_string(dense.rows()) +
                    " rows");
  }
  const auto offsets = norm.row_offsets();
  const auto cols = norm.col_indices();
  const auto vals = norm.values();
  Tensor out(norm.n(), dense.cols());
  for (std::size_t r = 0; r < norm.n(); ++r) {
    auto out_row = out.row(r);
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      const double w = vals[k];
      auto in_row = dense.row(cols[k]);
      for (std::size_t j = 0; j < dense.cols(); ++j) out_row[j] += w * in_row[j];
    }
  }
  return out;
}

void MultiViewNetwork::Validate() const {
  if (views.empty()) throw Error(ErrorCode::kEmptyView, "network has no views");
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (views[i].n() != n) {
      throw Error(ErrorCode::kShapeMismatch,
                  "view " + std::to_string(i) + " has " + std::to_string(views[i].n()) +
                      " nodes, expected " + std::to_string(n));
    }
    if (views[i].nnz() == 0) {
      throw Error(ErrorCode::kEmptyView, "view " + std::to_string(i) + " has no edges");
    }
  }
  if (labels && labels->per_node.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "label list length differs from node count");
  }
}

MultiViewNetwork MultiViewNetwork::WithoutView(std::size_t index) const {
  if (index >= views.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "view index " + std::to_string(index) +
                                                 " out of range");
  }
  MultiViewNetwork out = *this;
  out.views.erase(out.views.begin() + static_cast<std::ptrdiff_t>(index));
  return out;
}

Tensor JaccardConsistency(const MultiViewNetwork& net) {
  const std::size_t v = net.num_views();
  if (v < 2) throw Error(ErrorCode::kSingleView, "Jaccard consistency needs at least two views");
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> pairs;
  pairs.reserve(v);
  for (const auto& view : net.views) pairs.push_back(view.UpperPairs());

  Tensor jaccard(v, v);
  for (std::size_t i = 0; i < v; ++i) {
    jaccard(i, i) = 1.0;
    for (std::size_t j = i + 1; j < v; ++j) {
      std::size_t common = 0;
      auto a = pairs[i].begin();
      auto b = pairs[j].begin();
      while (a != pairs[i].end() && b != pairs[j].end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++common;
          ++a;
          ++b;
        }
      }
      const std::size_t uni = pairs[i].size() + pairs[j].size() - common;
      const double value = uni == 0 ? 1.0 : static_cast<double>(common) / uni;
      jaccard(i, j) = value;
      jaccard(j, i) = value;
    }
  }
  return jaccard;
}

namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool IsSkippable(const std::vector<std::string_view>& fields) {
  return fields.empty() || fields.front().front() == '#';
}

std::ifstream OpenForRead(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileError, "cannot open " + path.string());
  return in;
}

std::string ParseErrorText(const fs::path& path, std::size_t line_no, const std::string& what) {
  return path.string() + ":" + std::to_string(line_no) + ": " + what;
}

class NodeIndex {
 public:
  explicit NodeIndex(std::vector<std::string> seed) {
    for (auto& name : seed) Intern(name);
  }

  std::uint32_t Intern(std::string_view name) {
    auto [it, inserted] = ids_.try_emplace(std::string(name), names_.size());
    if (inserted) names_.emplace_back(name);
    return static_cast<std::uint32_t>(it->second);
  }

  std::vector<std::string> TakeNames() { return std::move(names_); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<std::string> names_;
};

std::string FormatDouble(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

}  // namespace

MultiViewNetwork LoadEdgeLists(std::span<const fs::path> paths,
                               std::vector<std::string> known_nodes) {
  NodeIndex index(std::move(known_nodes));
  std::vector<std::vector<WeightedEdge>> edges(paths.size());
  for (std::size_t f = 0; f < paths.size(); ++f) {
    auto in = OpenForRead(paths[f]);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto fields = SplitFields(line);
      if (IsSkippable(fields)) continue;
      if (fields.size() != 2 && fields.size() != 3) {
        throw Error(ErrorCode::kParseError,
                    ParseErrorText(paths[f], line_no, "expected 'src dst [weight]'"));
      }
      double weight = 1.0;
      if (fields.size() == 3) {
        auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(),
                                         weight);
        if (ec != std::errc() || ptr != fields[2].data() + fields[2].size() ||
            !std::isfinite(weight) || weight <= 0.0) {
          throw Error(ErrorCode::kParseError,
                      ParseErrorText(paths[f], line_no, "invalid weight '" +
                                                            std::string(fields[2]) + "'"));
        }
      }
      const std::uint32_t u = index.Intern(fields[0]);
      const std::uint32_t v = index.Intern(fields[1]);
      edges[f].push_back({u, v, weight});
    }
  }

  MultiViewNetwork net;
  net.n = index.size();
  for (std::size_t f = 0; f < paths.size(); ++f) {
    net.views.push_back(SparseAdjacency::FromUndirectedEdges(net.n, edges[f]));
    if (net.views.back().nnz() == 0) {
      throw Error(ErrorCode::kEmptyView, paths[f].string() + " contains no edges");
    }
  }
  net.node_names = index.TakeNames();
  return net;
}

NodeLabels LoadLabels(const fs::path& path, std::span<const std::string> node_names) {
  std::unordered_map<std::string_view, std::size_t> node_ids;
  for (std::size_t i = 0; i < node_names.size(); ++i) node_ids.emplace(node_names[i], i);

  NodeLabels labels;
  labels.per_node.resize(node_names.size());
  std::unordered_map<std::string, int> class_ids;
  auto in = OpenForRead(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = SplitFields(line);
    if (IsSkippable(fields)) continue;
    if (fields.size() != 2) {
      throw Error(ErrorCode::kParseError, ParseErrorText(path, line_no, "expected 'node label'"));
    }
    auto node = node_ids.find(fields[0]);
    if (node == node_ids.end()) {
      throw Error(ErrorCode::kParseError,
                  ParseErrorText(path, line_no, "unknown node '" + std::string(fields[0]) + "'"));
    }
    auto [cls, inserted] =
        class_ids.try_emplace(std::string(fields[1]), static_cast<int>(labels.class_names.size()));
    if (inserted) labels.class_names.emplace_back(fields[1]);
    auto& set = labels.per_node[node->second];
    if (std::find(set.begin(), set.end(), cls->second) == set.end()) {
      set.push_back(cls->second);
      std::sort(set.begin(), set.end());
    }
  }
  for (const auto& set : labels.per_node) {
    if (set.size() > 1) labels.multi_label = true;
  }
  return labels;
}

void WriteFileAtomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kFileError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kFileError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kFileError, "cannot rename onto " + path.string());
}

void WriteEdgeList(const SparseAdjacency& view, std::span<const std::string> node_names,
                   const fs::path& path) {
  std::ostringstream out;
  const auto offsets = view.row_offsets();
  const auto cols = view.col_indices();
  const auto vals = view.values();
  for (std::size_t r = 0; r < view.n(); ++r) {
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      if (cols[k] < r) continue;
      out << node_names[r] << ' ' << node_names[cols[k]];
      if (vals[k] != 1.0) out << ' ' << FormatDouble(vals[k]);
      out << '\n';
    }
  }
  WriteFileAtomic(path, out.str());
}

void WriteLabels(const NodeLabels& labels, std::span<const std::string> node_names,
                 const fs::path& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < labels.per_node.size(); ++i) {
    for (int cls : labels.per_node[i]) {
      out << node_names[i] << ' ' << labels.class_names[cls] << '\n';
    }
  }
  WriteFileAtomic(path, out.str());
}

std::vector<fs::path> DatasetFiles(const fs::path& dir) {
  std::vector<fs::path> files;
  for (std::size_t i = 0;; ++i) {
    fs::path p = dir / ("view_" + std::to_string(i) + ".edges");
    if (!fs::exists(p)) break;
    files.push_back(std::move(p));
  }
  if (files.empty()) {
    throw Error(ErrorCode::kFileError, "no view_<i>.edges files in " + dir.string());
  }
  return files;
}

MultiViewNetwork LoadDataset(const fs::path& dir) {
  std::vector<std::string> known;
  if (fs::exists(dir / "nodes.txt")) {
    auto in = OpenForRead(dir / "nodes.txt");
    std::string line;
    while (std::getline(in, line)) {
      auto fields = SplitFields(line);
      if (IsSkippable(fields)) continue;
      known.emplace_back(fields.front());
    }
  }
  const auto files = DatasetFiles(dir);
  MultiViewNetwork net = LoadEdgeLists(files, std::move(known));
  if (fs::exists(dir / "labels.txt")) {
    net.labels = LoadLabels(dir / "labels.txt", net.node_names);
  }
  net.Validate();
  return net;
}

void WriteDataset(const MultiViewNetwork& net, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kFileError, "cannot create " + dir.string());
  std::vector<std::string> names = net.node_names;
  if (names.empty()) {
    for (std::size_t i = 0; i < net.n; ++i) names.push_back(std::to_string(i));
  }
  std::string node_list;
  for (const auto& name : names) node_list += name + '\n';
  WriteFileAtomic(dir / "nodes.txt", node_list);
  for (std::size_t i = 0; i < net.views.size(); ++i) {
    WriteEdgeList(net.views[i], names, dir / ("view_" + std::to_string(i) + ".edges"));
  }
  for (std::size_t i = net.views.size();; ++i) {
    const fs::path stale = dir / ("view_" + std::to_string(i) + ".edges");
    if (!fs::remove(stale, ec)) break;
  }
  if (net.labels) {
    WriteLabels(*net.labels, names, dir / "labels.txt");
  } else {
    fs::remove(dir / "labels.txt", ec);
  }
}

}  // namespace rgae
