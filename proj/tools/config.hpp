// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_TOOLS_CONFIG_HPP_
#define VRVI_TOOLS_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vrvi_cli {

// Carries a message and the process exit code it maps to.
struct CliError {
  int exit_code;
  std::string message;
};

// Flat `key = value` configuration with `[section]` headers. Keys are
// addressed as "section.key". Lines starting with '#' or ';' are comments.
// Every key must be consumed by the command's schema; finish() rejects
// leftovers so typos never pass silently.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  std::string require_string(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t def) const;
  double get_double(const std::string& key, double def) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t def) const;
  // Comma-separated unsigned integers, e.g. "1,2,3".
  std::vector<std::uint64_t> get_uint_list(const std::string& key,
                                           const std::vector<std::uint64_t>& def) const;

  // Throws CliError naming every key no getter asked for.
  void finish() const;

  // Canonical text form; parse_text(serialize()) reproduces the same entries.
  std::string serialize() const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };

  std::string raw(const std::string& key) const;

  std::string origin_;
  std::map<std::string, Entry> entries_;
};

}  // namespace vrvi_cli

#endif  // VRVI_TOOLS_CONFIG_HPP_
