#pragma once

// Line-oriented action interchange format:
//
//   # comment
//   <patch_index> <p0x> <p0y> <p1x> <p1y> <p2x> <p2y> <r0> <r2> <g>
//
// Fields are space separated; anything after '#' is ignored.  Values are
// written in shortest round-trip form so load(save(x)) == x exactly.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mangavec/raster.hpp"

namespace mangavec {

struct IndexedAction {
  int patch_index = 0;
  Action action;
  bool operator==(const IndexedAction&) const = default;
};

using ActionSequence = std::vector<IndexedAction>;

class action_file_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace detail

inline ActionSequence parse_actions(std::istream& in, std::vector<std::string>& warnings) {
  static constexpr const char* kFieldNames[] = {"p0x", "p0y", "p1x", "p1y", "p2x",
                                                "p2y", "r0",  "r2",  "g"};
  ActionSequence seq;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    const auto tokens = detail::split_ws(body);
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (tokens.size() != 1 + Action::kSize)
      throw action_file_error(where + ": expected 10 fields, got " + std::to_string(tokens.size()));

    IndexedAction rec;
    {
      const auto t = tokens[0];
      const auto res = std::from_chars(t.data(), t.data() + t.size(), rec.patch_index);
      if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || rec.patch_index < 0)
        throw action_file_error(where + ": bad patch index '" + std::string(t) + "'");
    }
    std::array<double, Action::kSize> v{};
    for (std::size_t i = 0; i < Action::kSize; ++i) {
      const auto t = tokens[i + 1];
      const auto res = std::from_chars(t.data(), t.data() + t.size(), v[i]);
      if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(v[i]))
        throw action_file_error(where + ": bad value for " + kFieldNames[i] + " '" +
                                std::string(t) + "'");
      if (v[i] < 0.0 || v[i] > 1.0) {
        warnings.push_back(where + ": " + kFieldNames[i] + " = " + std::string(t) +
                           " out of [0,1], clamped");
        v[i] = std::clamp(v[i], 0.0, 1.0);
      }
    }
    rec.action = Action::from_array(v);
    seq.push_back(rec);
  }
  return seq;
}

inline ActionSequence load_actions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw action_file_error("cannot open action file '" + path + "'");
  std::vector<std::string> warnings;
  ActionSequence seq;
  try {
    seq = parse_actions(in, warnings);
  } catch (const action_file_error& e) {
    throw action_file_error(path + ": " + e.what());
  }
  for (const auto& w : warnings) std::cerr << "warning: " << path << ": " << w << '\n';
  return seq;
}

inline std::string format_actions(const ActionSequence& seq) {
  std::string out = "# patch_index p0x p0y p1x p1y p2x p2y r0 r2 g\n";
  for (const IndexedAction& rec : seq) {
    out += std::to_string(rec.patch_index);
    for (double v : rec.action.to_array()) {
      out += ' ';
      detail::append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

inline void save_actions(const std::string& path, const ActionSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw action_file_error("cannot write action file '" + path + "'");
  out << format_actions(seq);
  if (!out) throw action_file_error("write failed for '" + path + "'");
}

}  // namespace mangavec
