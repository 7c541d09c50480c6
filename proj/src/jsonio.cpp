#include "jsonio.hpp"

#include <cstdio>
#include <cstring>

#include "json.hpp"

namespace thorp {

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.data_ = Array{};
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.data_ = Object{};
  return v;
}

JsonValue& JsonValue::operator[](const std::string& key) {
  if (is_null()) data_ = Object{};
  auto& obj = std::get<Object>(data_);
  for (auto& [k, v] : obj)
    if (k == key) return v;
  obj.emplace_back(key, JsonValue());
  return obj.back().second;
}

void JsonValue::push_back(JsonValue v) {
  if (is_null()) data_ = Array{};
  std::get<Array>(data_).push_back(std::move(v));
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
  if (indent < 0) return;
  out += '\n';
  out.append(static_cast<size_t>(indent) * depth, ' ');
}

}  // namespace

void JsonValue::dump_to(std::string& out, int indent, int depth) const {
  if (std::holds_alternative<std::nullptr_t>(data_)) {
    out += "null";
  } else if (auto* b = std::get_if<bool>(&data_)) {
    out += *b ? "true" : "false";
  } else if (auto* i = std::get_if<int64_t>(&data_)) {
    out += std::to_string(*i);
  } else if (auto* f = std::get_if<double>(&data_)) {
    out += format_double(*f);
  } else if (auto* s = std::get_if<std::string>(&data_)) {
    append_escaped(out, *s);
  } else if (auto* a = std::get_if<Array>(&data_)) {
    out += '[';
    for (size_t i = 0; i < a->size(); ++i) {
      if (i) out += indent < 0 ? "," : ",";
      newline_indent(out, indent, depth + 1);
      (*a)[i].dump_to(out, indent, depth + 1);
    }
    if (!a->empty()) newline_indent(out, indent, depth);
    out += ']';
  } else {
    const auto& obj = std::get<Object>(data_);
    out += '{';
    for (size_t i = 0; i < obj.size(); ++i) {
      if (i) out += ",";
      newline_indent(out, indent, depth + 1);
      append_escaped(out, obj[i].first);
      out += indent < 0 ? ":" : ": ";
      obj[i].second.dump_to(out, indent, depth + 1);
    }
    if (!obj.empty()) newline_indent(out, indent, depth);
    out += '}';
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  return out;
}

std::string dist_to_json(const PermDistribution& mu) {
  JsonValue doc = JsonValue::object();
  doc["d"] = mu.d;
  doc["length"] = static_cast<int64_t>(mu.probs.size());
  doc["l1_convention"] = "L1-unhalved";
  doc["log_convention"] = "log-natural";
  JsonValue arr = JsonValue::array();
  for (double p : mu.probs) arr.push_back(p);
  doc["probs"] = std::move(arr);
  return doc.dump(2) + "\n";
}

PermDistribution dist_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PermDistribution mu;
  mu.d = j.at("d").get<int>();
  mu.probs = j.at("probs").get<std::vector<double>>();
  if (mu.probs.size() != j.at("length").get<uint64_t>() ||
      mu.probs.size() != factorial(mu.n()))
    throw std::invalid_argument("dist_from_json: length mismatch");
  return mu;
}

std::vector<uint8_t> dist_to_binary(const PermDistribution& mu) {
  std::vector<uint8_t> out;
  out.reserve(20 + mu.probs.size() * 8);
  const char magic[8] = {'T', 'H', 'O', 'R', 'P', 'D', 'S', 'T'};
  out.insert(out.end(), magic, magic + 8);
  auto put = [&](const void* p, size_t len) {
    const auto* b = static_cast<const uint8_t*>(p);
    out.insert(out.end(), b, b + len);
  };
  const uint32_t d32 = static_cast<uint32_t>(mu.d);
  const uint64_t len = mu.probs.size();
  put(&d32, 4);
  put(&len, 8);
  put(mu.probs.data(), mu.probs.size() * 8);
  return out;
}

PermDistribution dist_from_binary(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 20 || std::memcmp(bytes.data(), "THORPDST", 8) != 0)
    throw std::invalid_argument("dist_from_binary: bad header");
  uint32_t d32 = 0;
  uint64_t len = 0;
  std::memcpy(&d32, bytes.data() + 8, 4);
  std::memcpy(&len, bytes.data() + 12, 8);
  PermDistribution mu;
  mu.d = static_cast<int>(d32);
  if (bytes.size() != 20 + len * 8 || len != factorial(mu.n()))
    throw std::invalid_argument("dist_from_binary: length mismatch");
  mu.probs.resize(len);
  std::memcpy(mu.probs.data(), bytes.data() + 20, len * 8);
  return mu;
}

namespace {

JsonValue oracle_to_json(const TabularOracle& z) {
  JsonValue rows = JsonValue::array();
  for (uint32_t t = 0; t < z.rounds(); ++t) {
    JsonValue row = JsonValue::array();
    for (uint32_t l = 0; l < z.rows(); ++l) row.push_back(z.bit(l, t));
    rows.push_back(std::move(row));
  }
  return rows;
}

JsonValue trajectory_to_json(const Trajectory& traj) {
  JsonValue states = JsonValue::array();
  for (const auto& st : traj.states) {
    JsonValue locs = JsonValue::array();
    for (uint32_t p : st.locs) locs.push_back(p);
    states.push_back(std::move(locs));
  }
  return states;
}

}  // namespace

JsonValue trace_to_json(const CouplingTrace& trace) {
  JsonValue doc = JsonValue::object();
  doc["d"] = trace.params.d;
  doc["T"] = trace.schedule.t_param;
  doc["geometric"] = trace.schedule.geometric;
  JsonValue times = JsonValue::array();
  for (int t : trace.schedule.times) times.push_back(static_cast<int64_t>(t));
  doc["schedule"] = std::move(times);
  doc["z"] = oracle_to_json(trace.z);
  doc["z_tilde"] = oracle_to_json(trace.z_tilde);
  doc["x"] = trajectory_to_json(trace.x);
  doc["x_tilde"] = trajectory_to_json(trace.x_tilde);
  JsonValue flips = JsonValue::array();
  for (const auto& [l, t] : trace.flips) {
    JsonValue pair = JsonValue::array();
    pair.push_back(l);
    pair.push_back(t);
    flips.push_back(std::move(pair));
  }
  doc["flips"] = std::move(flips);
  JsonValue partners = JsonValue::array();
  for (const auto& m : trace.partners)
    partners.push_back(m ? JsonValue(*m) : JsonValue(nullptr));
  doc["partners"] = std::move(partners);
  JsonValue beyond = JsonValue::array();
  for (uint32_t j : trace.beyond_horizon) beyond.push_back(j);
  doc["beyond_horizon"] = std::move(beyond);
  return doc;
}

}  // namespace thorp
