// Plain-text configuration: `key = value` lines grouped under one
// [section] per subcommand.  Everything configurable is a scalar, so there
// is no nesting; unknown keys are ignored so configs can serve several
// subcommands at once.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "serval/scalar.hpp"

namespace serval::cli {

class ConfigFile {
 public:
  ConfigFile() = default;

  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::string& path);  // throws on unreadable

  const std::string* find(const std::string& section,
                          const std::string& key) const;

  std::string text_or(const std::string& section, const std::string& key,
                      std::string fallback) const;
  std::int64_t int_or(const std::string& section, const std::string& key,
                      std::int64_t fallback) const;
  GroupScalar scalar_or(const std::string& section, const std::string& key,
                        const GroupScalar& fallback) const;
  ValueGroup group_or(const std::string& section, const std::string& key,
                      ValueGroup fallback) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace serval::cli
