#pragma once

#include <string>
#include <string_view>

namespace hog::tcl {

/// Quotes `s` as a single Tcl word using backslash escapes, so the word
/// survives both command parsing and list splitting unchanged.
inline std::string word(std::string_view s) {
  if (s.empty()) return "{}";
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case ' ': case '\t': case ';': case '"': case '$': case '[': case ']':
      case '{': case '}': case '\\':
        out += '\\';
        out += c;
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace hog::tcl
