#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jpdsr {

/// Sectioned `key = value [unit]` text configuration.
///
///     # comment
///     [sensor]
///     width = 32 px
///
/// Dimensioned quantities must carry their unit; dimensionless ones must not.
/// Every accessor marks its key as used so that leftovers can be reported.
class Config {
public:
  static Config parse(std::string_view text, std::string source = "<config>");
  static Config load(const std::filesystem::path& path);

  const std::string& text() const { return text_; }
  const std::string& source() const { return source_; }

  bool has(std::string_view section, std::string_view key) const;
  bool has_section(std::string_view section) const;

  std::string string(std::string_view section, std::string_view key,
                     std::optional<std::string> fallback = std::nullopt) const;
  double number(std::string_view section, std::string_view key, std::string_view unit,
                std::optional<double> fallback = std::nullopt) const;
  std::int64_t integer(std::string_view section, std::string_view key, std::string_view unit,
                       std::optional<std::int64_t> fallback = std::nullopt) const;
  std::vector<double> numbers(std::string_view section, std::string_view key, std::string_view unit) const;
  bool boolean(std::string_view section, std::string_view key, std::optional<bool> fallback = std::nullopt) const;

  /// Throws a config error naming the first key no accessor has read.
  void reject_unused() const;

  /// Config error message prefixed with source and line of the given key.
  [[noreturn]] void fail_at(std::string_view section, std::string_view key, const std::string& message) const;

private:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    std::string unit;
    int line = 0;
    mutable bool used = false;
  };

  const Entry* find(std::string_view section, std::string_view key) const;
  const Entry& need(std::string_view section, std::string_view key) const;
  std::string where(const Entry& e) const;

  std::string text_;
  std::string source_;
  std::vector<Entry> entries_;
  std::vector<std::string> sections_;
};

/// Units a value may be written in.
inline constexpr std::string_view kKnownUnits[] = {"px", "rad", "counts", "pairs", "photons", "um", "cycles/px"};

}  // namespace jpdsr
