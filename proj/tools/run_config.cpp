#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace serval::cli {

namespace {

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  std::int64_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trimmed(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = std::string(trimmed(line.substr(1, line.size() - 2)));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string key(trimmed(line.substr(0, eq)));
    std::string value(trimmed(line.substr(eq + 1)));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::string* ConfigFile::find(const std::string& section,
                                    const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::string ConfigFile::text_or(const std::string& section,
                                const std::string& key,
                                std::string fallback) const {
  const std::string* v = find(section, key);
  return v ? *v : std::move(fallback);
}

std::int64_t ConfigFile::int_or(const std::string& section,
                                const std::string& key,
                                std::int64_t fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size())
    throw std::invalid_argument("config key " + section + "." + key +
                                ": not an integer: " + *v);
  return out;
}

GroupScalar ConfigFile::scalar_or(const std::string& section,
                                  const std::string& key,
                                  const GroupScalar& fallback) const {
  const std::string* v = find(section, key);
  return v ? GroupScalar::parse(*v) : fallback;
}

ValueGroup ConfigFile::group_or(const std::string& section,
                                const std::string& key,
                                ValueGroup fallback) const {
  const std::string* v = find(section, key);
  return v ? parse_group(*v) : fallback;
}

}  // namespace serval::cli
