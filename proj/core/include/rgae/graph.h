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

#ifndef RGAE_GRAPH_H_
#define RGAE_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgae/tensor.h"

namespace rgae {

struct WeightedEdge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  double weight = 1.0;
};

// Adjacency matrix of one view in CSR form. Self-loops are never stored;
// column indices are strictly increasing within each row.
class SparseAdjacency {
 public:
  SparseAdjacency() = default;

  // Validates the CSR arrays. Throws IndexOutOfRange on malformed structure
  // (bad offsets, out-of-range or unsorted columns, stored self-loops).
  static SparseAdjacency FromCsr(std::size_t n, std::vector<std::size_t> row_offsets,
                                 std::vector<std::uint32_t> col_indices,
                                 std::vector<double> values);

  // Inserts every edge in both directions. Duplicates collapse to the
  // maximum weight; self-loops are dropped.
  static SparseAdjacency FromUndirectedEdges(std::size_t n,
                                             std::span<const WeightedEdge> edges);

  std::size_t n() const { return n_; }
  std::size_t nnz() const { return col_indices_.size(); }
  // Number of unordered edges; equals nnz()/2 for symmetric matrices.
  std::size_t num_edges() const { return nnz() / 2; }
  bool is_symmetric() const { return is_symmetric_; }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::uint32_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  std::span<const std::uint32_t> neighbors(std::size_t row) const {
    return std::span<const std::uint32_t>(col_indices_)
        .subspan(row_offsets_[row], row_offsets_[row + 1] - row_offsets_[row]);
  }
  bool HasEdge(std::uint32_t u, std::uint32_t v) const;

  // Unordered pairs (u < v) in row-major order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> UpperPairs() const;

  friend bool operator==(const SparseAdjacency&, const SparseAdjacency&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::uint32_t> col_indices_;
  std::vector<double> values_;
  bool is_symmetric_ = true;
};

// D^{-1/2} (A + I) D^{-1/2} in CSR form, diagonal entries included.
class NormalizedAdjacency {
 public:
  std::size_t n() const { return n_; }
  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::uint32_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  Tensor ToDense() const;

 private:
  friend NormalizedAdjacency Normalize(const SparseAdjacency& adj);

  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::uint32_t> col_indices_;
  std::vector<double> values_;
};

// Throws NonSymmetric when a stored edge has no equal-valued mirror.
NormalizedAdjacency Normalize(const SparseAdjacency& adj);

// norm * dense. Row entries are summed in stored column order, so the result
// is bit-reproducible for a given input.
Tensor Spmm(const NormalizedAdjacency& norm, const Tensor& dense);

struct NodeLabels {
  std::vector<std::string> class_names;
  // Sorted class ids per node; empty for unlabeled nodes.
  std::vector<std::vector<int>> per_node;
  bool multi_label = false;

  std::size_t num_classes() const { return class_names.size(); }
  friend bool operator==(const NodeLabels&, const NodeLabels&) = default;
};

struct MultiViewNetwork {
  std::size_t n = 0;
  std::vector<SparseAdjacency> views;
  std::optional<NodeLabels> labels;
  std::vector<std::string> node_names;

  std::size_t num_views() const { return views.size(); }

  // Throws on an empty view list, mismatched node counts or an edgeless view.
  void Validate() const;

  // Copy with view `index` removed (labels and names kept).
  MultiViewNetwork WithoutView(std::size_t index) const;

  friend bool operator==(const MultiViewNetwork&, const MultiViewNetwork&) = default;
};

// Pairwise |E_i ∩ E_j| / |E_i ∪ E_j| over unordered node pairs.
// Row-major |V| x |V| matrix. Throws SingleView for fewer than two views.
Tensor JaccardConsistency(const MultiViewNetwork& net);

// Reads one view per file ("src dst [weight]" per line, '#' comments).
// Node ids are assigned by first appearance across files in argument order;
// `known_nodes` pre-seeds the mapping so isolated nodes survive round trips.
MultiViewNetwork LoadEdgeLists(std::span<const std::filesystem::path> paths,
                               std::vector<std::string> known_nodes = {});

// "node label" per line; a node on several lines makes the set multi-label.
NodeLabels LoadLabels(const std::filesystem::path& path,
                      std::span<const std::string> node_names);

void WriteEdgeList(const SparseAdjacency& view, std::span<const std::string> node_names,
                   const std::filesystem::path& path);
void WriteLabels(const NodeLabels& labels, std::span<const std::string> node_names,
                 const std::filesystem::path& path);

// Dataset directory: nodes.txt (optional), view_<i>.edges for i = 0, 1, ...,
// labels.txt (optional).
MultiViewNetwork LoadDataset(const std::filesystem::path& dir);
void WriteDataset(const MultiViewNetwork& net, const std::filesystem::path& dir);
std::vector<std::filesystem::path> DatasetFiles(const std::filesystem::path& dir);

// Writes to a sibling temporary file, then renames over `path`.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rgae

#endif  // RGAE_GRAPH_H_
