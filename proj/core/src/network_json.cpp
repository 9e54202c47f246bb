#include "sltk/network_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sltk/error.hpp"
#include "sltk/io_util.hpp"

namespace sltk {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ValidationError("unknown key '" + key + "' in " + where);
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing key '") + key + "' in " + where);
  return *it;
}

std::size_t require_positive_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ValidationError(std::string("'") + key + "' in " + where + " must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

TargetNetwork parse_network_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("network JSON does not parse: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("network JSON must be an object");
  reject_unknown_keys(doc, {"w_max", "layers"}, "network");

  const json& wmax = require(doc, "w_max", "network");
  if (!wmax.is_number() || !(wmax.get<double>() > 0.0)) {
    throw ValidationError("'w_max' must be a positive number");
  }
  const json& layers = require(doc, "layers", "network");
  if (!layers.is_array() || layers.empty()) {
    throw ValidationError("'layers' must be a non-empty array");
  }

  std::vector<std::size_t> widths;
  std::vector<ActivationKind> activations;
  std::vector<Matrix> weights;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string where = "layer " + std::to_string(i + 1);
    const json& layer = layers[i];
    if (!layer.is_object()) throw ValidationError(where + " must be an object");
    reject_unknown_keys(layer, {"rows", "cols", "activation", "weights"}, where);
    const std::size_t rows = require_positive_int(layer, "rows", where);
    const std::size_t cols = require_positive_int(layer, "cols", where);
    const json& act = require(layer, "activation", where);
    if (!act.is_string()) throw ValidationError("'activation' in " + where + " must be a string");
    const json& w = require(layer, "weights", where);
    if (!w.is_array() || w.size() != rows * cols) {
      throw ValidationError("'weights' in " + where + " must be an array of " +
                            std::to_string(rows * cols) + " numbers");
    }
    std::vector<double> data;
    data.reserve(w.size());
    for (const auto& v : w) {
      if (!v.is_number()) throw ValidationError("non-numeric weight in " + where);
      data.push_back(v.get<double>());
    }
    if (i == 0) {
      widths.push_back(cols);
    } else if (cols != widths.back()) {
      throw ValidationError(where + " has " + std::to_string(cols) +
                            " columns but the previous layer has " +
                            std::to_string(widths.back()) + " rows");
    }
    widths.push_back(rows);
    activations.push_back(parse_activation(act.get<std::string>()));
    weights.emplace_back(rows, cols, std::move(data));
  }

  try {
    return TargetNetwork(Architecture(std::move(widths), std::move(activations)),
                         std::move(weights), wmax.get<double>());
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

TargetNetwork read_network_json(const std::filesystem::path& path) {
  return parse_network_json(read_text_file(path));
}

std::string to_network_json(const TargetNetwork& net) {
  json doc;
  doc["w_max"] = net.w_max();
  json layers = json::array();
  for (std::size_t i = 1; i <= net.arch().depth(); ++i) {
    const Matrix& w = net.layer(i);
    json layer;
    layer["rows"] = w.rows();
    layer["cols"] = w.cols();
    layer["activation"] = std::string(to_string(net.arch().activation(i)));
    layer["weights"] = std::vector<double>(w.data().begin(), w.data().end());
    layers.push_back(std::move(layer));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

void write_network_json(const TargetNetwork& net, const std::filesystem::path& path) {
  write_text_file(path, to_network_json(net));
}

}  // namespace sltk
