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

#ifndef RGAE_TOOLS_CLI_EMBEDDINGS_FILE_H_
#define RGAE_TOOLS_CLI_EMBEDDINGS_FILE_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "rgae/tensor.h"

namespace rgae::cli {

// Text embeddings: a header "n d_total num_views d", then one line per node
// with its name and d_total values at 17 significant digits.
struct EmbeddingsFile {
  std::vector<std::string> node_names;
  std::size_t num_views = 0;
  std::size_t block_dim = 0;
  Tensor values;

  std::string Serialize() const;
  static EmbeddingsFile Parse(const std::string& text, const std::string& origin);
  static EmbeddingsFile Read(const std::filesystem::path& path);
  void Write(const std::filesystem::path& path) const;
};

}  // namespace rgae::cli

#endif  // RGAE_TOOLS_CLI_EMBEDDINGS_FILE_H_
