#include "bellvol/quantum.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bellvol {

namespace {

using nlohmann::json;

Vec3<double> read_vec3(const json& obj, const char* field) {
  if (!obj.contains(field)) {
    throw std::invalid_argument(std::string("state file: missing field '") + field + "'");
  }
  const json& v = obj.at(field);
  if (!v.is_array() || v.size() != 3) {
    throw std::invalid_argument(std::string("state file: field '") + field +
                                "' must be an array of 3 numbers");
  }
  Vec3<double> out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) {
      throw std::invalid_argument(std::string("state file: field '") + field + "[" +
                                  std::to_string(i) + "]' is not a number");
    }
    out(i) = v[i].get<double>();
  }
  return out;
}

Mat3<double> read_mat3(const json& obj, const char* field) {
  if (!obj.contains(field)) {
    throw std::invalid_argument(std::string("state file: missing field '") + field + "'");
  }
  const json& m = obj.at(field);
  if (!m.is_array() || m.size() != 3) {
    throw std::invalid_argument(std::string("state file: field '") + field +
                                "' must be a 3x3 nested array");
  }
  Mat3<double> out;
  for (int i = 0; i < 3; ++i) {
    if (!m[i].is_array() || m[i].size() != 3) {
      throw std::invalid_argument(std::string("state file: field '") + field + "[" +
                                  std::to_string(i) + "]' must be an array of 3 numbers");
    }
    for (int j = 0; j < 3; ++j) {
      if (!m[i][j].is_number()) {
        throw std::invalid_argument(std::string("state file: field '") + field + "[" +
                                    std::to_string(i) + "][" + std::to_string(j) +
                                    "]' is not a number");
      }
      out(i, j) = m[i][j].get<double>();
    }
  }
  return out;
}

}  // namespace

TwoQubitState state_from_json_text(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("state file: malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) {
    throw std::invalid_argument("state file: top level must be a JSON object");
  }
  const auto r = read_vec3(obj, "r");
  const auto s = read_vec3(obj, "s");
  const auto t = read_mat3(obj, "T");
  std::string label = "file";
  if (obj.contains("label")) {
    if (!obj["label"].is_string()) {
      throw std::invalid_argument("state file: field 'label' must be a string");
    }
    label = obj["label"].get<std::string>();
  }
  return TwoQubitState::make(r, s, t, std::move(label));
}

TwoQubitState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return state_from_json_text(buf.str());
}

std::string state_to_json_text(const TwoQubitState& state) {
  json obj;
  obj["r"] = {state.r()(0), state.r()(1), state.r()(2)};
  obj["s"] = {state.s()(0), state.s()(1), state.s()(2)};
  json t = json::array();
  for (int i = 0; i < 3; ++i) t.push_back({state.T()(i, 0), state.T()(i, 1), state.T()(i, 2)});
  obj["T"] = t;
  obj["label"] = state.label();
  return obj.dump();
}

}  // namespace bellvol
