// Copyright 2026 The PixelVeil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIXELVEIL_VECTOR_JSON_HPP
#define PIXELVEIL_VECTOR_JSON_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pixelveil/vector_mechanism.hpp"

namespace pixelveil {

/// Raised when a vector file violates the expected schema; the message
/// names the offending field.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A set of vectors sharing one range specification, as serialized in the
/// JSON vector format: {"ranges": [[min,max],...], "vectors": [[...],...]}
/// with an optional "ids" list naming each vector.
struct VectorSet {
  std::vector<ValueRange> ranges;
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> ids;  // empty means positional ids "0", "1", ...

  std::vector<std::string> effective_ids() const {
    if (!ids.empty()) return ids;
    std::vector<std::string> out;
    out.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) out.push_back(std::to_string(i));
    return out;
  }

  std::vector<BoundedVector> bounded() const {
    std::vector<BoundedVector> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) out.emplace_back(v, ranges);
    return out;
  }
};

inline VectorSet parse_vector_set(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("vector file: top-level value must be an object");
  if (!doc.contains("ranges") || !doc["ranges"].is_array() || doc["ranges"].empty())
    throw SchemaError("vector file: field 'ranges' must be a non-empty array");
  if (!doc.contains("vectors") || !doc["vectors"].is_array() || doc["vectors"].empty())
    throw SchemaError("vector file: field 'vectors' must be a non-empty array");

  VectorSet set;
  for (const auto& r : doc["ranges"]) {
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
      throw SchemaError("vector file: field 'ranges' entries must be [min, max] pairs");
    ValueRange range{r[0].get<double>(), r[1].get<double>()};
    if (!(range.min < range.max))
      throw SchemaError("vector file: field 'ranges' requires min < max");
    set.ranges.push_back(range);
  }
  for (const auto& v : doc["vectors"]) {
    if (!v.is_array() || v.size() != set.ranges.size())
      throw SchemaError("vector file: field 'vectors' entries must match the 'ranges' length");
    std::vector<double> values;
    for (const auto& x : v) {
      if (!x.is_number())
        throw SchemaError("vector file: field 'vectors' entries must be numeric");
      values.push_back(x.get<double>());
    }
    set.vectors.push_back(std::move(values));
  }
  if (doc.contains("ids")) {
    if (!doc["ids"].is_array() || doc["ids"].size() != set.vectors.size())
      throw SchemaError("vector file: field 'ids' must name every vector");
    for (const auto& id : doc["ids"]) {
      if (!id.is_string()) throw SchemaError("vector file: field 'ids' entries must be strings");
      set.ids.push_back(id.get<std::string>());
    }
  }
  return set;
}

inline VectorSet read_vector_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("vector file: invalid JSON in " + path + ": " + e.what());
  }
  return parse_vector_set(doc);
}

inline nlohmann::json to_json(const VectorSet& set) {
  nlohmann::json doc;
  doc["ranges"] = nlohmann::json::array();
  for (const ValueRange& r : set.ranges) doc["ranges"].push_back({r.min, r.max});
  doc["vectors"] = set.vectors;
  if (!set.ids.empty()) doc["ids"] = set.ids;
  return doc;
}

inline void write_vector_set(const VectorSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vector file: " + path);
  out << to_json(set).dump(2) << "\n";
  if (!out) throw std::runtime_error("failed to write vector file: " + path);
}

}  // namespace pixelveil

#endif  // PIXELVEIL_VECTOR_JSON_HPP
