#pragma once

#include <set>
#include <type_traits>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctxrl/util/errors.hpp"

namespace ctxrl {

/// Typed, defaulting view of one JSON object. Every failure is a ConfigError
/// naming the dotted field path. `finish` rejects keys that were never read.
class ConfigReader {
 public:
  ConfigReader(const nlohmann::json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(path_.empty() ? "config" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return object_.contains(key); }

  template <typename T>
  T get(const std::string& key, const T& fallback) {
    used_.insert(key);
    if (!object_.contains(key)) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    used_.insert(key);
    if (!object_.contains(key)) throw ConfigError(field(key), "missing required field");
    return convert<T>(key);
  }

  /// Nested object, empty when absent.
  ConfigReader child(const std::string& key) {
    used_.insert(key);
    static const nlohmann::json empty = nlohmann::json::object();
    if (!object_.contains(key)) return ConfigReader(empty, field(key));
    return ConfigReader(object_.at(key), field(key));
  }

  const nlohmann::json& raw(const std::string& key) {
    used_.insert(key);
    return object_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!used_.contains(key)) throw ConfigError(field(key), "unknown field");
    }
  }

 private:
  template <typename T>
  T convert(const std::string& key) const {
    const auto& v = object_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(field(key), "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    }
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(field(key), e.what());
    }
  }

  const nlohmann::json& object_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace ctxrl
