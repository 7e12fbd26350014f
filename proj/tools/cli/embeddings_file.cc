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

#include "cli/embeddings_file.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cli/config.h"
#include "rgae/error.h"
#include "rgae/graph.h"

namespace rgae::cli {

std::string EmbeddingsFile::Serialize() const {
  if (node_names.size() != values.rows()) {
    throw Error(ErrorCode::kLengthMismatch, "one node name per embedding row required");
  }
  std::string out = std::to_string(values.rows()) + ' ' + std::to_string(values.cols()) + ' ' +
                    std::to_string(num_views) + ' ' + std::to_string(block_dim) + '\n';
  for (std::size_t r = 0; r < values.rows(); ++r) {
    out += node_names[r];
    for (double v : values.row(r)) {
      out += ' ';
      out += FormatDouble(v);
    }
    out += '\n';
  }
  return out;
}

EmbeddingsFile EmbeddingsFile::Parse(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  auto fail = [&](std::size_t line, const std::string& what) {
    return Error(ErrorCode::kParseError, origin + ":" + std::to_string(line) + ": " + what);
  };
  std::size_t n = 0, width = 0;
  EmbeddingsFile file;
  std::string header;
  if (!std::getline(in, header)) throw fail(1, "missing header");
  {
    std::istringstream h(header);
    if (!(h >> n >> width >> file.num_views >> file.block_dim)) {
      throw fail(1, "header must be 'n d_total num_views d'");
    }
  }
  file.values = Tensor(n, width);
  std::string line;
  for (std::size_t r = 0; r < n; ++r) {
    if (!std::getline(in, line)) throw fail(r + 2, "missing embedding row");
    std::istringstream row(line);
    std::string name;
    row >> name;
    if (name.empty()) throw fail(r + 2, "missing node name");
    file.node_names.push_back(name);
    for (std::size_t c = 0; c < width; ++c) {
      std::string token;
      if (!(row >> token)) throw fail(r + 2, "expected " + std::to_string(width) + " values");
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw fail(r + 2, "invalid value '" + token + "'");
      }
      file.values(r, c) = v;
    }
    std::string extra;
    if (row >> extra) throw fail(r + 2, "too many values");
  }
  return file;
}

EmbeddingsFile EmbeddingsFile::Read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str(), path.string());
}

void EmbeddingsFile::Write(const std::filesystem::path& path) const {
  WriteFileAtomic(path, Serialize());
}

}  // namespace rgae::cli
