#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace depthforge::io {

/// Key-value settings from an INI file. Keys are "section.key"; keys before
/// the first section have no prefix.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig load(const std::filesystem::path& path);

  [[nodiscard]] bool contains(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] std::optional<std::string> text(const std::string& key) const;
  [[nodiscard]] std::optional<double> number(const std::string& key) const;
  [[nodiscard]] std::optional<std::uint64_t> integer(const std::string& key) const;
  /// Comma-separated list of numbers.
  [[nodiscard]] std::optional<std::vector<double>> numbers(const std::string& key) const;
  [[nodiscard]] std::optional<std::vector<std::size_t>> integers(const std::string& key) const;

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
};

}  // namespace depthforge::io
