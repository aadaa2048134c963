// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vrvi_cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
          c == '_'))
      return false;
  return true;
}

[[noreturn]] void bad(const std::string& origin, int line, const std::string& what) {
  throw CliError{2, origin + ":" + std::to_string(line) + ": " + what};
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{2, "cannot open config file " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') bad(origin, lineno, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_name(section)) bad(origin, lineno, "invalid section name '" + section + "'");
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) bad(origin, lineno, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (!valid_name(key)) bad(origin, lineno, "invalid key '" + key + "'");
    if (value.empty()) bad(origin, lineno, "missing value for '" + key + "'");
    if (section.empty()) bad(origin, lineno, "key '" + key + "' outside any [section]");
    std::string qualified = section + "." + key;
    if (cfg.entries_.count(qualified)) bad(origin, lineno, "duplicate key '" + qualified + "'");
    cfg.entries_[qualified] = Entry{value, lineno, false};
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::raw(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw CliError{2, origin_ + ": missing required key '" + key + "'"};
  it->second.used = true;
  return it->second.value;
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
  return has(key) ? raw(key) : def;
}

std::string Config::require_string(const std::string& key) const { return raw(key); }

std::int64_t Config::get_int(const std::string& key, std::int64_t def) const {
  if (!has(key)) return def;
  std::string v = raw(key);
  errno = 0;
  char* end = nullptr;
  long long r = std::strtoll(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    throw CliError{2, origin_ + ": key '" + key + "': invalid integer '" + v + "'"};
  return r;
}

double Config::get_double(const std::string& key, double def) const {
  if (!has(key)) return def;
  std::string v = raw(key);
  errno = 0;
  char* end = nullptr;
  double r = std::strtod(v.c_str(), &end);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    throw CliError{2, origin_ + ": key '" + key + "': invalid number '" + v + "'"};
  return r;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t def) const {
  if (!has(key)) return def;
  std::string v = raw(key);
  errno = 0;
  char* end = nullptr;
  unsigned long long r = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0' || v[0] == '-')
    throw CliError{2, origin_ + ": key '" + key + "': invalid unsigned integer '" + v + "'"};
  return r;
}

std::vector<std::uint64_t> Config::get_uint_list(const std::string& key,
                                                 const std::vector<std::uint64_t>& def) const {
  if (!has(key)) return def;
  std::string v = raw(key);
  std::vector<std::uint64_t> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    errno = 0;
    char* end = nullptr;
    unsigned long long r = std::strtoull(item.c_str(), &end, 10);
    if (item.empty() || errno != 0 || end == item.c_str() || *end != '\0' || item[0] == '-')
      throw CliError{2, origin_ + ": key '" + key + "': invalid list entry '" + item + "'"};
    out.push_back(r);
  }
  if (out.empty()) throw CliError{2, origin_ + ": key '" + key + "': empty list"};
  return out;
}

void Config::finish() const {
  std::string unknown;
  for (const auto& [key, entry] : entries_) {
    if (entry.used) continue;
    if (!unknown.empty()) unknown += ", ";
    unknown += key;
  }
  if (!unknown.empty()) throw CliError{2, origin_ + ": unknown key(s): " + unknown};
}

std::string Config::serialize() const {
  std::string out;
  std::string section;
  for (const auto& [key, entry] : entries_) {
    std::size_t dot = key.find('.');
    std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + entry.value + "\n";
  }
  return out;
}

}  // namespace vrvi_cli
