#pragma once

// Minimal ordered JSON document value with deterministic float
// formatting (17 significant digits), plus distribution import/export.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "analysis.hpp"
#include "coupling.hpp"

namespace thorp {

// Insertion-ordered JSON value. Keys print in the order they were set;
// doubles print with %.17g so documents are byte-stable.
class JsonValue {
 public:
  JsonValue() : data_(nullptr) {}
  JsonValue(std::nullptr_t) : data_(nullptr) {}
  JsonValue(bool b) : data_(b) {}
  JsonValue(int v) : data_(static_cast<int64_t>(v)) {}
  JsonValue(uint32_t v) : data_(static_cast<int64_t>(v)) {}
  JsonValue(int64_t v) : data_(v) {}
  JsonValue(uint64_t v) : data_(static_cast<int64_t>(v)) {}
  JsonValue(double v) : data_(v) {}
  JsonValue(const char* s) : data_(std::string(s)) {}
  JsonValue(std::string s) : data_(std::move(s)) {}

  static JsonValue array();
  static JsonValue object();

  JsonValue& operator[](const std::string& key);  // object access, creates
  void push_back(JsonValue v);                    // array append

  bool is_null() const { return std::holds_alternative<std::nullptr_t>(data_); }
  std::string dump(int indent = -1) const;

 private:
  using Object = std::vector<std::pair<std::string, JsonValue>>;
  using Array = std::vector<JsonValue>;
  std::variant<std::nullptr_t, bool, int64_t, double, std::string, Array, Object>
      data_;

  void dump_to(std::string& out, int indent, int depth) const;
};

std::string format_double(double v);  // %.17g

// Distribution files: a JSON object with d, length, convention tags,
// and the n! probabilities.
std::string dist_to_json(const PermDistribution& mu);
PermDistribution dist_from_json(const std::string& text);

// Flat binary twin: 8-byte magic "THORPDST", u32 d, u64 length, then
// length little-endian doubles.
std::vector<uint8_t> dist_to_binary(const PermDistribution& mu);
PermDistribution dist_from_binary(const std::vector<uint8_t>& bytes);

// CouplingTrace as JSON: oracle bit matrices, trajectories as position
// arrays, the flip set as (l, t) pairs.
JsonValue trace_to_json(const CouplingTrace& trace);

}  // namespace thorp
