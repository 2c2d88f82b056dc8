#include "jpdsr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jpdsr/error.hpp"

namespace jpdsr {
namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

bool is_unit(std::string_view token) {
  return std::find(std::begin(kKnownUnits), std::end(kKnownUnits), token) != std::end(kKnownUnits);
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Config Config::parse(std::string_view text, std::string source) {
  Config cfg;
  cfg.text_ = std::string(text);
  cfg.source_ = std::move(source);
  std::istringstream in(cfg.text_);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(std::string_view(raw).substr(0, hash));
    if (content.empty()) continue;
    const std::string at = cfg.source_ + ":" + std::to_string(line) + ": ";
    if (content.front() == '[') {
      require(content.back() == ']' && content.size() > 2, ErrorKind::Config, at + "malformed section header");
      section = trim(std::string_view(content).substr(1, content.size() - 2));
      require(std::find(cfg.sections_.begin(), cfg.sections_.end(), section) == cfg.sections_.end(),
              ErrorKind::Config, at + "duplicate section [" + section + "]");
      cfg.sections_.push_back(section);
      continue;
    }
    const auto eq = content.find('=');
    require(eq != std::string::npos, ErrorKind::Config, at + "expected 'key = value'");
    require(!section.empty(), ErrorKind::Config, at + "key outside of any section");
    Entry e;
    e.section = section;
    e.key = trim(std::string_view(content).substr(0, eq));
    std::string value = trim(std::string_view(content).substr(eq + 1));
    require(!e.key.empty() && !value.empty(), ErrorKind::Config, at + "empty key or value");
    const auto space = value.find_last_of(" \t");
    if (space != std::string::npos && is_unit(trim(std::string_view(value).substr(space + 1)))) {
      e.unit = trim(std::string_view(value).substr(space + 1));
      value = trim(std::string_view(value).substr(0, space));
    } else if (is_unit(value)) {
      fail(ErrorKind::Config, at + "value missing before unit");
    }
    e.value = value;
    e.line = line;
    require(cfg.find(e.section, e.key) == nullptr, ErrorKind::Config,
            at + "duplicate key '" + e.key + "' in [" + e.section + "]");
    cfg.entries_.push_back(std::move(e));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

const Config::Entry* Config::find(std::string_view section, std::string_view key) const {
  for (const Entry& e : entries_)
    if (e.section == section && e.key == key) return &e;
  return nullptr;
}

const Config::Entry& Config::need(std::string_view section, std::string_view key) const {
  const Entry* e = find(section, key);
  require(e != nullptr, ErrorKind::Config,
          source_ + ": missing required key '" + std::string(key) + "' in [" + std::string(section) + "]");
  e->used = true;
  return *e;
}

std::string Config::where(const Entry& e) const {
  return source_ + ":" + std::to_string(e.line) + ": [" + e.section + "] " + e.key + ": ";
}

void Config::fail_at(std::string_view section, std::string_view key, const std::string& message) const {
  if (const Entry* e = find(section, key)) fail(ErrorKind::Config, where(*e) + message);
  fail(ErrorKind::Config, source_ + ": [" + std::string(section) + "] " + std::string(key) + ": " + message);
}

bool Config::has(std::string_view section, std::string_view key) const { return find(section, key) != nullptr; }

bool Config::has_section(std::string_view section) const {
  return std::find(sections_.begin(), sections_.end(), section) != sections_.end();
}

std::string Config::string(std::string_view section, std::string_view key, std::optional<std::string> fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const Entry& e = need(section, key);
  require(e.unit.empty(), ErrorKind::Config, where(e) + "unexpected unit '" + e.unit + "'");
  return e.value;
}

double Config::number(std::string_view section, std::string_view key, std::string_view unit,
                      std::optional<double> fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const Entry& e = need(section, key);
  if (unit.empty())
    require(e.unit.empty(), ErrorKind::Config, where(e) + "dimensionless value must not carry unit '" + e.unit + "'");
  else
    require(e.unit == unit, ErrorKind::Config,
            where(e) + (e.unit.empty() ? "missing unit, expected '" + std::string(unit) + "'"
                                       : "unit '" + e.unit + "' where '" + std::string(unit) + "' is expected"));
  const auto v = to_double(e.value);
  require(v.has_value(), ErrorKind::Config, where(e) + "'" + e.value + "' is not a number");
  return *v;
}

std::int64_t Config::integer(std::string_view section, std::string_view key, std::string_view unit,
                             std::optional<std::int64_t> fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const double v = number(section, key, unit);
  const Entry& e = *find(section, key);
  require(v == std::floor(v) && std::abs(v) < 9.0e15, ErrorKind::Config, where(e) + "expected an integer");
  return static_cast<std::int64_t>(v);
}

std::vector<double> Config::numbers(std::string_view section, std::string_view key, std::string_view unit) const {
  const Entry& e = need(section, key);
  require(e.unit == unit, ErrorKind::Config,
          where(e) + (e.unit.empty() ? "missing unit, expected '" + std::string(unit) + "'"
                                     : "unit '" + e.unit + "' where '" + std::string(unit) + "' is expected"));
  std::vector<double> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto v = to_double(trim(item));
    require(v.has_value(), ErrorKind::Config, where(e) + "'" + trim(item) + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

bool Config::boolean(std::string_view section, std::string_view key, std::optional<bool> fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const Entry& e = need(section, key);
  if (e.value == "true" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "no") return false;
  fail(ErrorKind::Config, where(e) + "expected true or false");
}

void Config::reject_unused() const {
  for (const Entry& e : entries_)
    if (!e.used) fail(ErrorKind::Config, where(e) + "unknown key");
}

}  // namespace jpdsr
