// Copyright 2026 The meshkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "meshkit/config.h"

#include "meshkit/common.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace meshkit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && p == text.data() + text.size();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) items.push_back(trim(item));
  if (items.size() == 1 && items[0].empty()) items.clear();
  return items;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", number);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", number);
    cfg.entries_[key] = {trim(line.substr(eq + 1)), number};
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'", 0);
  return parse(in);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = {value, 0};
}

const KeyValueConfig::Entry* KeyValueConfig::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  int v = 0;
  if (!parse_number(e->value, v)) throw ParseError("'" + key + "' must be an integer", e->line);
  return v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  double v = 0.0;
  if (!parse_number(e->value, v)) throw ParseError("'" + key + "' must be a number", e->line);
  return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  throw ParseError("'" + key + "' must be true or false", e->line);
}

std::vector<int> KeyValueConfig::get_ints(const std::string& key,
                                          const std::vector<int>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<int> out;
  for (const std::string& item : split_list(e->value)) {
    int v = 0;
    if (!parse_number(item, v)) throw ParseError("'" + key + "' must list integers", e->line);
    out.push_back(v);
  }
  return out;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key,
                                                const std::vector<double>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const std::string& item : split_list(e->value)) {
    double v = 0.0;
    if (!parse_number(item, v)) throw ParseError("'" + key + "' must list numbers", e->line);
    out.push_back(v);
  }
  return out;
}

void KeyValueConfig::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, entry] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError("unknown key '" + key + "'", entry.line);
    }
  }
}

std::vector<std::string> KeyValueConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

}  // namespace meshkit
