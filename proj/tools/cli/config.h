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

#ifndef RGAE_TOOLS_CLI_CONFIG_H_
#define RGAE_TOOLS_CLI_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rgae/synthgen.h"
#include "rgae/trainer.h"

namespace rgae::cli {

// Flat "key=value" configuration. '#' starts a comment line; later Set()
// calls (command-line flags) override values loaded from files.
class KeyValueConfig {
 public:
  static KeyValueConfig Load(const std::filesystem::path& path);
  static KeyValueConfig Parse(const std::string& text, const std::string& origin = "<string>");

  void Set(const std::string& key, const std::string& value) { values_[key] = value; }
  void Merge(const KeyValueConfig& overrides);
  bool Has(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> Get(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  // Sorted "key=value" lines.
  std::string Serialize() const;

 private:
  std::map<std::string, std::string> values_;
};

double ParseDouble(const std::string& key, const std::string& text);
std::size_t ParseSize(const std::string& key, const std::string& text);
std::vector<std::size_t> ParseSizeList(const std::string& key, const std::string& text);
std::vector<double> ParseDoubleList(const std::string& key, const std::string& text);
std::string FormatDouble(double v);

// Resolved training settings. Unknown keys are a ConfigError except keys
// containing '.', which belong to run manifests.
struct TrainSettings {
  TrainConfig train;
  // View excluded from training (link-prediction protocol).
  std::optional<std::size_t> target_view;
  bool verbose = false;

  static TrainSettings FromConfig(const KeyValueConfig& config);
  // Every setting materialized, suitable for re-loading.
  KeyValueConfig ToConfig() const;
};

SynthConfig SynthConfigFromConfig(const KeyValueConfig& config);
KeyValueConfig SynthConfigToConfig(const SynthConfig& config);

}  // namespace rgae::cli

#endif  // RGAE_TOOLS_CLI_CONFIG_H_
