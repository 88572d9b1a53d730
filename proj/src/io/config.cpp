#include "depthforge/io/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>

#include "depthforge/error.hpp"
#include "depthforge/io/csv.hpp"

namespace depthforge::io {

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    const bool missing = !std::filesystem::exists(path);
    fail(missing ? ErrorKind::io : ErrorKind::malformed_data, e.what());
  }
  KeyValueConfig cfg;
  cfg.source_ = path.string();
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      cfg.values_[name] = node.data();
      continue;
    }
    for (const auto& [key, leaf] : node) cfg.values_[name + "." + key] = leaf.data();
  }
  return cfg;
}

std::optional<std::string> KeyValueConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueConfig::number(const std::string& key) const {
  const auto raw = text(key);
  if (!raw) return std::nullopt;
  double value = 0.0;
  require(parse_double(*raw, value) && std::isfinite(value), ErrorKind::invalid_argument,
          source_ + ": '" + key + "' is not a number");
  return value;
}

std::optional<std::uint64_t> KeyValueConfig::integer(const std::string& key) const {
  const auto value = number(key);
  if (!value) return std::nullopt;
  require(*value >= 0 && std::floor(*value) == *value, ErrorKind::invalid_argument,
          source_ + ": '" + key + "' is not a non-negative integer");
  return static_cast<std::uint64_t>(*value);
}

std::optional<std::vector<double>> KeyValueConfig::numbers(const std::string& key) const {
  const auto raw = text(key);
  if (!raw) return std::nullopt;
  std::vector<double> out;
  for (const auto& field : split_fields(*raw)) {
    double value = 0.0;
    require(parse_double(field, value) && std::isfinite(value), ErrorKind::invalid_argument,
            source_ + ": '" + key + "' has a non-numeric entry '" + field + "'");
    out.push_back(value);
  }
  return out;
}

std::optional<std::vector<std::size_t>> KeyValueConfig::integers(const std::string& key) const {
  const auto values = numbers(key);
  if (!values) return std::nullopt;
  std::vector<std::size_t> out;
  for (double v : *values) {
    require(v >= 0 && std::floor(v) == v, ErrorKind::invalid_argument,
            source_ + ": '" + key + "' must hold non-negative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace depthforge::io
