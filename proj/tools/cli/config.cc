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

#include "cli/config.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "rgae/error.h"

namespace rgae::cli {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

Error Bad(const std::string& key, const std::string& text, const std::string& what) {
  return Error(ErrorCode::kConfigError, "key '" + key + "': " + what + " (got '" + text + "')");
}

std::vector<std::string> SplitComma(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    part = Trim(part);
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw Bad(key, text, "expected a boolean");
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(const std::string& text, const std::string& origin) {
  KeyValueConfig config;
  std::stringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError,
                  origin + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = Trim(trimmed.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kParseError, origin + ":" + std::to_string(line_no) + ": empty key");
    }
    config.values_[key] = Trim(trimmed.substr(eq + 1));
  }
  return config;
}

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileError, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str(), path.string());
}

void KeyValueConfig::Merge(const KeyValueConfig& overrides) {
  for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

std::optional<std::string> KeyValueConfig::Get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::Serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + '=' + v + '\n';
  return out;
}

double ParseDouble(const std::string& key, const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw Bad(key, text, "expected a number");
  return v;
}

std::size_t ParseSize(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Bad(key, text, "expected a non-negative integer");
  }
  return v;
}

std::vector<std::size_t> ParseSizeList(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& part : SplitComma(text)) out.push_back(ParseSize(key, part));
  return out;
}

std::vector<double> ParseDoubleList(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : SplitComma(text)) out.push_back(ParseDouble(key, part));
  return out;
}

std::string FormatDouble(double v) {
  char buf[32];
  // Shortest form that round-trips exactly.
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

namespace {

std::string JoinSizes(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

void RejectUnknown(const KeyValueConfig& config, const std::set<std::string>& known,
                   const char* what) {
  for (const auto& [key, value] : config.values()) {
    if (key.find('.') != std::string::npos) continue;
    if (!known.contains(key)) {
      throw Error(ErrorCode::kConfigError, std::string("unknown ") + what + " key '" + key + "'");
    }
  }
}

}  // namespace

TrainSettings TrainSettings::FromConfig(const KeyValueConfig& config) {
  static const std::set<std::string> kKnown = {
      "dim", "layers", "alpha", "beta", "gamma", "lr", "epochs", "patience", "tol", "seed",
      "ablate", "lambda_update_every", "consensus", "target_view", "verbose"};
  RejectUnknown(config, kKnown, "train");

  TrainSettings s;
  TrainConfig& t = s.train;
  // Desk-scale default hidden widths; wider stacks such as 800,400 via layers=.
  t.hidden_sizes = {32, 16};
  for (const auto& [key, value] : config.values()) {
    if (key == "dim") t.total_dim = ParseSize(key, value);
    else if (key == "layers") t.hidden_sizes = ParseSizeList(key, value);
    else if (key == "alpha") t.alpha = ParseDouble(key, value);
    else if (key == "beta") t.beta = ParseDouble(key, value);
    else if (key == "gamma") t.gamma = ParseDouble(key, value);
    else if (key == "lr") t.lr = ParseDouble(key, value);
    else if (key == "epochs") t.max_epochs = ParseSize(key, value);
    else if (key == "patience") {
      t.patience = value == "inf" ? TrainConfig::kNoPatienceLimit : ParseSize(key, value);
    } else if (key == "tol") t.tol = ParseDouble(key, value);
    else if (key == "seed") t.seed = ParseSize(key, value);
    else if (key == "lambda_update_every") t.lambda_update_every = ParseSize(key, value);
    else if (key == "ablate") {
      if (value == "none") {
        t.use_similarity = t.use_difference = true;
      } else if (value == "sim") {
        t.use_similarity = false;
        t.use_difference = true;
      } else if (value == "dif") {
        t.use_similarity = true;
        t.use_difference = false;
      } else if (value == "both") {
        t.use_similarity = t.use_difference = false;
      } else {
        throw Bad(key, value, "expected none|sim|dif|both");
      }
    } else if (key == "consensus") {
      if (value == "lambda") t.consensus = ConsensusRule::kLambda;
      else if (value == "lambda_gamma") t.consensus = ConsensusRule::kLambdaPowGamma;
      else throw Bad(key, value, "expected lambda|lambda_gamma");
    } else if (key == "target_view") {
      if (value != "none") s.target_view = ParseSize(key, value);
    } else if (key == "verbose") {
      s.verbose = ParseBool(key, value);
    }
  }
  return s;
}

KeyValueConfig TrainSettings::ToConfig() const {
  KeyValueConfig c;
  const TrainConfig& t = train;
  c.Set("dim", std::to_string(t.total_dim));
  c.Set("layers", JoinSizes(t.hidden_sizes));
  c.Set("alpha", FormatDouble(t.alpha));
  c.Set("beta", FormatDouble(t.beta));
  c.Set("gamma", FormatDouble(t.gamma));
  c.Set("lr", FormatDouble(t.lr));
  c.Set("epochs", std::to_string(t.max_epochs));
  c.Set("patience", t.patience == TrainConfig::kNoPatienceLimit ? "inf"
                                                                  : std::to_string(t.patience));
  c.Set("tol", FormatDouble(t.tol));
  c.Set("seed", std::to_string(t.seed));
  c.Set("lambda_update_every", std::to_string(t.lambda_update_every));
  const char* ablate = t.use_similarity ? (t.use_difference ? "none" : "dif")
                                        : (t.use_difference ? "sim" : "both");
  c.Set("ablate", ablate);
  c.Set("consensus", t.consensus == ConsensusRule::kLambda ? "lambda" : "lambda_gamma");
  c.Set("target_view", target_view ? std::to_string(*target_view) : "none");
  c.Set("verbose", verbose ? "true" : "false");
  return c;
}

SynthConfig SynthConfigFromConfig(const KeyValueConfig& config) {
  static const std::set<std::string> kKnown = {"n", "communities", "blocks", "views", "p_in",
                                               "p_out", "unique_frac", "overlap", "seed"};
  RejectUnknown(config, kKnown, "generate");
  SynthConfig s;
  std::optional<std::size_t> communities;
  bool explicit_blocks = false;
  for (const auto& [key, value] : config.values()) {
    if (key == "n") s.n = ParseSize(key, value);
    else if (key == "communities") communities = ParseSize(key, value);
    else if (key == "blocks") {
      s.block_sizes = ParseSizeList(key, value);
      explicit_blocks = true;
    } else if (key == "views") s.views = ParseSize(key, value);
    else if (key == "p_in") s.p_in = ParseDouble(key, value);
    else if (key == "p_out") s.p_out = ParseDouble(key, value);
    else if (key == "unique_frac") s.unique_frac = ParseDouble(key, value);
    else if (key == "overlap") {
      if (value != "none") s.overlap = ParseDouble(key, value);
    } else if (key == "seed") s.seed = ParseSize(key, value);
  }
  if (!explicit_blocks) {
    // Near-equal blocks; earlier blocks take the remainder.
    const std::size_t k = communities.value_or(s.block_sizes.size());
    if (k == 0) throw Error(ErrorCode::kConfigError, "communities must be >= 1");
    s.block_sizes.assign(k, s.n / k);
    for (std::size_t i = 0; i < s.n % k; ++i) ++s.block_sizes[i];
  }
  s.Validate();
  return s;
}

KeyValueConfig SynthConfigToConfig(const SynthConfig& s) {
  KeyValueConfig c;
  c.Set("n", std::to_string(s.n));
  c.Set("blocks", JoinSizes(s.block_sizes));
  c.Set("views", std::to_string(s.views));
  c.Set("p_in", FormatDouble(s.p_in));
  c.Set("p_out", FormatDouble(s.p_out));
  c.Set("unique_frac", FormatDouble(s.unique_frac));
  c.Set("overlap", s.overlap ? FormatDouble(*s.overlap) : "none");
  c.Set("seed", std::to_string(s.seed));
  return c;
}

}  // namespace rgae::cli
