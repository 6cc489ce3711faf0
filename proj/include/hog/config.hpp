#pragma once

// Project configuration (hog.conf) and list files (.src/.sim/.con).
//
// hog.conf grammar:
//   - `[section]` headers, `key=value` lines, full-line `#` comments,
//     blank lines; LF or CRLF; UTF-8 (a leading BOM is skipped).
//   - `[main]` is mandatory and must define `vendor` and `top`; `name` is
//     optional. Other `[main]` keys are kept as properties of section "main".
//   - `[generics]` holds typed user generics: `NAME=int:8`, `NAME=bv32:0x1F`,
//     `NAME=str:text`, `NAME=bool:true`.
//   - `[hooks]` accepts `post-creation=<path relative to the project dir>`.
//   - Any other section passes through as vendor properties.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hog/error.hpp"
#include "hog/ordered_map.hpp"
#include "hog/text.hpp"

namespace hog {

enum class Vendor { vivado, quartus, libero };

constexpr std::string_view to_string(Vendor v) {
  switch (v) {
    case Vendor::vivado: return "vivado";
    case Vendor::quartus: return "quartus";
    case Vendor::libero: return "libero";
  }
  return "unknown";
}

inline Vendor parse_vendor(std::string_view s) {
  if (text::iequals(s, "vivado")) return Vendor::vivado;
  if (text::iequals(s, "quartus")) return Vendor::quartus;
  if (text::iequals(s, "libero")) return Vendor::libero;
  throw Error(ErrorCode::UnsupportedVendor, "unknown vendor '" + std::string(s) + "'");
}

/// Names the build injects on its own; users may not declare them.
inline constexpr std::array<std::string_view, 4> kBuiltinGenericNames = {
    "GLOBAL_SHA", "GLOBAL_VER", "GLOBAL_DATE", "GLOBAL_TIME"};

inline bool is_builtin_generic_name(std::string_view name) {
  for (auto b : kBuiltinGenericNames) {
    if (text::iequals(b, name)) return true;
  }
  return false;
}

/// A generic value with an explicit kind.
class TypedValue {
 public:
  enum class Kind { integer, bitvector32, string, boolean };

  static TypedValue integer(std::int64_t v) { return TypedValue(Payload(std::in_place_index<0>, v)); }
  static TypedValue bitvector32(std::uint32_t v) { return TypedValue(Payload(std::in_place_index<1>, v)); }
  static TypedValue string(std::string v) { return TypedValue(Payload(std::in_place_index<2>, std::move(v))); }
  static TypedValue boolean(bool v) { return TypedValue(Payload(std::in_place_index<3>, v)); }

  Kind kind() const { return static_cast<Kind>(payload_.index()); }

  std::int64_t as_integer() const { return std::get<0>(payload_); }
  std::uint32_t as_bitvector32() const { return std::get<1>(payload_); }
  const std::string& as_string() const { return std::get<2>(payload_); }
  bool as_boolean() const { return std::get<3>(payload_); }

  friend bool operator==(const TypedValue&, const TypedValue&) = default;

 private:
  using Payload = std::variant<std::int64_t, std::uint32_t, std::string, bool>;
  explicit TypedValue(Payload p) : payload_(std::move(p)) {}
  Payload payload_;
};

constexpr std::string_view to_string(TypedValue::Kind k) {
  switch (k) {
    case TypedValue::Kind::integer: return "int";
    case TypedValue::Kind::bitvector32: return "bv32";
    case TypedValue::Kind::string: return "str";
    case TypedValue::Kind::boolean: return "bool";
  }
  return "?";
}

/// Renders `kind:value` in canonical form (bv32 as 0x + 8 uppercase digits).
inline std::string render_typed_value(const TypedValue& v) {
  switch (v.kind()) {
    case TypedValue::Kind::integer: return "int:" + std::to_string(v.as_integer());
    case TypedValue::Kind::bitvector32: return "bv32:0x" + text::hex(v.as_bitvector32(), 8);
    case TypedValue::Kind::string: return "str:" + v.as_string();
    case TypedValue::Kind::boolean: return v.as_boolean() ? "bool:true" : "bool:false";
  }
  return {};
}

/// Parses `kind:value`; `line` is only used for error reporting.
inline TypedValue parse_typed_value(std::string_view s, std::size_t line = 0) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw SyntaxError(line, "untyped generic value '" + std::string(s) +
                                "' (expected int:, bv32:, str: or bool:)");
  }
  auto kind = s.substr(0, colon);
  auto body = s.substr(colon + 1);
  if (kind == "int") {
    auto v = text::parse_int64(body);
    if (!v) throw SyntaxError(line, "invalid int value '" + std::string(body) + "'");
    return TypedValue::integer(*v);
  }
  if (kind == "bv32") {
    if (!(text::starts_with(body, "0x") || text::starts_with(body, "0X")) ||
        body.size() < 3 || body.size() > 10) {
      throw SyntaxError(line, "bv32 value must be 0x followed by 1-8 hex digits");
    }
    std::uint32_t v = 0;
    for (char c : body.substr(2)) {
      if (!text::is_hex_digit(c)) throw SyntaxError(line, "invalid hex digit in bv32 value");
      v = (v << 4) | static_cast<std::uint32_t>(
                         c <= '9' ? c - '0' : (text::ascii_lower(c) - 'a' + 10));
    }
    return TypedValue::bitvector32(v);
  }
  if (kind == "str") return TypedValue::string(std::string(body));
  if (kind == "bool") {
    if (body == "true") return TypedValue::boolean(true);
    if (body == "false") return TypedValue::boolean(false);
    throw SyntaxError(line, "bool value must be true or false");
  }
  throw SyntaxError(line, "unknown generic kind '" + std::string(kind) + "'");
}

using PropertySection = OrderedMap<std::string>;

struct ProjectConfig {
  std::string project_name;
  Vendor vendor = Vendor::vivado;
  std::string top_module;
  /// Section name → keys in declaration order. Section "main" holds extra
  /// `[main]` keys. Sections are kept sorted by name.
  std::map<std::string, PropertySection> properties;
  OrderedMap<TypedValue> user_generics;
  std::optional<std::string> post_creation_hook;

  friend bool operator==(const ProjectConfig&, const ProjectConfig&) = default;
};

inline bool is_project_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

/// HDL identifier: a letter followed by letters, digits or underscores.
inline bool is_hdl_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  if (!alpha(s.front())) return false;
  for (char c : s) {
    if (!(alpha(c) || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

namespace detail {

inline bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) { ++i; continue; }
    if ((c & 0xE0) == 0xC0) { extra = 1; cp = c & 0x1F; }
    else if ((c & 0xF0) == 0xE0) { extra = 2; cp = c & 0x0F; }
    else if ((c & 0xF8) == 0xF0) { extra = 3; cp = c & 0x07; }
    else return false;
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

inline std::string_view strip_bom(std::string_view s) {
  if (text::starts_with(s, "\xEF\xBB\xBF")) s.remove_prefix(3);
  return s;
}

inline bool is_property_key(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (text::is_space(c) || c == '=' || c == '[' || c == ']' || c == '#') return false;
  }
  return true;
}

inline bool is_section_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (text::is_space(c) || c == '[' || c == ']') return false;
  }
  return true;
}

}  // namespace detail

/// Parses hog.conf text. `name_hint` supplies the project name when `[main]`
/// has no `name` key; failing that the top module name is used.
inline ProjectConfig parse_project_config(std::string_view input,
                                          std::string_view name_hint = {}) {
  if (!detail::is_valid_utf8(input)) throw SyntaxError(0, "input is not valid UTF-8");
  ProjectConfig cfg;
  std::optional<std::string> name, vendor, top;
  bool seen_main = false;
  std::vector<std::string> seen_sections;
  std::map<std::string, std::string> generic_folded;  // lower(name) → name
  std::string section;

  auto lines = text::split_lines(detail::strip_bom(input));
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const std::size_t lineno = idx + 1;
    auto line = text::trim(lines[idx]);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw SyntaxError(lineno, "unterminated section header");
      auto sec = text::trim(line.substr(1, line.size() - 2));
      if (!detail::is_section_name(sec)) throw SyntaxError(lineno, "invalid section name");
      section = std::string(sec);
      if (std::find(seen_sections.begin(), seen_sections.end(), section) != seen_sections.end()) {
        throw Error(ErrorCode::DuplicateKeyError,
                    "line " + std::to_string(lineno) + ": section [" + section + "] declared twice");
      }
      seen_sections.push_back(section);
      if (section == "main") {
        seen_main = true;
      } else if (section != "generics" && section != "hooks") {
        cfg.properties.try_emplace(section);
      }
      continue;
    }

    if (section.empty()) throw SyntaxError(lineno, "key outside of any section");
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw SyntaxError(lineno, "expected key=value");
    auto key = text::trim(line.substr(0, eq));
    auto value = text::trim(line.substr(eq + 1));
    if (!detail::is_property_key(key)) throw SyntaxError(lineno, "invalid key '" + std::string(key) + "'");
    auto dup = [&](std::string_view what) {
      return Error(ErrorCode::DuplicateKeyError, "line " + std::to_string(lineno) +
                                                     ": duplicate " + std::string(what) + " '" +
                                                     std::string(key) + "'");
    };

    if (section == "generics") {
      if (!is_hdl_identifier(key)) throw SyntaxError(lineno, "invalid generic name '" + std::string(key) + "'");
      if (is_builtin_generic_name(key)) {
        throw Error(ErrorCode::ReservedNameError,
                    "line " + std::to_string(lineno) + ": generic '" + std::string(key) +
                        "' collides with a builtin generic");
      }
      if (!generic_folded.emplace(text::to_lower(key), std::string(key)).second) throw dup("generic");
      cfg.user_generics.insert(std::string(key), parse_typed_value(value, lineno));
    } else if (section == "hooks") {
      if (key != "post-creation") throw SyntaxError(lineno, "unknown hook '" + std::string(key) + "'");
      if (cfg.post_creation_hook) throw dup("hook");
      if (value.empty()) throw SyntaxError(lineno, "empty hook path");
      cfg.post_creation_hook = std::string(value);
    } else if (section == "main" && (key == "name" || key == "vendor" || key == "top")) {
      auto& slot = key == "name" ? name : key == "vendor" ? vendor : top;
      if (slot) throw dup("key");
      slot = std::string(value);
    } else {
      auto& props = cfg.properties[section];
      if (!props.insert(std::string(key), std::string(value))) throw dup("key");
    }
  }

  if (!seen_main) throw SyntaxError(0, "missing [main] section");
  if (!vendor) throw SyntaxError(0, "[main] is missing 'vendor'");
  if (!top || top->empty()) throw SyntaxError(0, "[main] is missing 'top'");
  cfg.vendor = parse_vendor(*vendor);
  cfg.top_module = *top;
  if (name) {
    cfg.project_name = *name;
  } else if (!name_hint.empty()) {
    cfg.project_name = std::string(name_hint);
  } else {
    cfg.project_name = *top;
  }
  if (!is_project_name(cfg.project_name)) {
    throw SyntaxError(0, "invalid project name '" + cfg.project_name + "'");
  }
  return cfg;
}

/// Canonical text: [main], [generics], [hooks], remaining sections
/// alphabetically; keys in insertion order; LF line endings.
inline std::string serialize_project_config(const ProjectConfig& cfg) {
  std::string out;
  auto kv = [&](std::string_view k, std::string_view v) {
    out.append(k).append("=").append(v).append("\n");
  };
  out += "[main]\n";
  kv("name", cfg.project_name);
  kv("vendor", to_string(cfg.vendor));
  kv("top", cfg.top_module);
  if (auto it = cfg.properties.find("main"); it != cfg.properties.end()) {
    for (const auto& [k, v] : it->second) kv(k, v);
  }
  if (!cfg.user_generics.empty()) {
    out += "\n[generics]\n";
    for (const auto& [k, v] : cfg.user_generics) kv(k, render_typed_value(v));
  }
  if (cfg.post_creation_hook) {
    out += "\n[hooks]\n";
    kv("post-creation", *cfg.post_creation_hook);
  }
  for (const auto& [section, props] : cfg.properties) {
    if (section == "main") continue;
    out += "\n[" + section + "]\n";
    for (const auto& [k, v] : props) kv(k, v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// List files

enum class ListKind { src, sim, con };

constexpr std::string_view to_string(ListKind k) {
  switch (k) {
    case ListKind::src: return "src";
    case ListKind::sim: return "sim";
    case ListKind::con: return "con";
  }
  return "?";
}

/// Maps a list file name to its kind by extension.
inline std::optional<ListKind> list_kind_from_filename(std::string_view filename) {
  if (text::ends_with(filename, ".src")) return ListKind::src;
  if (text::ends_with(filename, ".sim")) return ListKind::sim;
  if (text::ends_with(filename, ".con")) return ListKind::con;
  return std::nullopt;
}

struct ListEntry {
  std::string path;
  std::string library;
  OrderedMap<std::string> properties;

  friend bool operator==(const ListEntry&, const ListEntry&) = default;
};

struct SourceList {
  ListKind kind = ListKind::src;
  std::string name;  // list file stem, informational
  std::vector<ListEntry> entries;

  friend bool operator==(const SourceList&, const SourceList&) = default;
};

/// Normalizes a repo-relative path: backslashes become '/', "." segments
/// vanish, inner ".." segments collapse. Throws PathEscapeError for absolute
/// paths or ".." that climbs above the root.
inline std::string normalize_repo_path(std::string_view raw) {
  std::string p(raw);
  std::replace(p.begin(), p.end(), '\\', '/');
  if (p.empty()) throw Error(ErrorCode::PathEscapeError, "empty path");
  if (p.front() == '/' || (p.size() >= 2 && p[1] == ':')) {
    throw Error(ErrorCode::PathEscapeError, "absolute path '" + std::string(raw) + "'");
  }
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i <= p.size()) {
    auto j = p.find('/', i);
    if (j == std::string::npos) j = p.size();
    std::string seg = p.substr(i, j - i);
    if (seg == "..") {
      if (parts.empty()) {
        throw Error(ErrorCode::PathEscapeError, "path '" + std::string(raw) + "' escapes the repository");
      }
      parts.pop_back();
    } else if (!seg.empty() && seg != ".") {
      parts.push_back(std::move(seg));
    }
    i = j + 1;
  }
  if (parts.empty()) throw Error(ErrorCode::PathEscapeError, "path '" + std::string(raw) + "' names the repository root");
  return text::join(parts, "/");
}

/// Parses one list file. Each non-comment line is
/// `path [lib=<name>] [key=value ...]`; entries without `lib=` take
/// `default_library`.
inline SourceList parse_list_file(std::string_view input, ListKind kind,
                                  std::string_view default_library = "work") {
  if (!detail::is_valid_utf8(input)) throw SyntaxError(0, "input is not valid UTF-8");
  SourceList list;
  list.kind = kind;
  auto lines = text::split_lines(detail::strip_bom(input));
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const std::size_t lineno = idx + 1;
    auto line = text::trim(lines[idx]);
    if (line.empty() || line.front() == '#') continue;
    auto tokens = text::split_ws(line);
    ListEntry entry;
    entry.path = normalize_repo_path(tokens.front());
    entry.library = std::string(default_library);
    bool lib_set = false;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      auto tok = tokens[t];
      auto eq = tok.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 == tok.size()) {
        throw SyntaxError(lineno, "expected key=value, got '" + std::string(tok) + "'");
      }
      auto key = tok.substr(0, eq);
      auto value = tok.substr(eq + 1);
      if (key == "lib") {
        if (lib_set) throw SyntaxError(lineno, "lib given twice");
        lib_set = true;
        entry.library = std::string(value);
      } else if (!entry.properties.insert(std::string(key), std::string(value))) {
        throw SyntaxError(lineno, "property '" + std::string(key) + "' given twice");
      }
    }
    for (const auto& e : list.entries) {
      if (e.path == entry.path) {
        throw Error(ErrorCode::DuplicatePathError,
                    "line " + std::to_string(lineno) + ": '" + entry.path + "' listed twice");
      }
    }
    list.entries.push_back(std::move(entry));
  }
  return list;
}

/// Joint validation. Returns human-readable diagnostics; empty means valid.
inline std::vector<std::string> validate_config(const ProjectConfig& cfg,
                                                const std::vector<SourceList>& lists) {
  std::vector<std::string> diags;
  if (!is_project_name(cfg.project_name)) diags.push_back("invalid project name '" + cfg.project_name + "'");
  switch (cfg.vendor) {
    case Vendor::vivado:
    case Vendor::quartus:
    case Vendor::libero: break;
    default: diags.push_back("unsupported vendor");
  }
  if (!is_hdl_identifier(cfg.top_module)) diags.push_back("invalid top module '" + cfg.top_module + "'");

  std::size_t src_entries = 0;
  for (const auto& l : lists) {
    if (l.kind == ListKind::src) src_entries += l.entries.size();
  }
  if (src_entries == 0) diags.push_back("no source files");

  if (cfg.post_creation_hook) {
    const auto& hook = *cfg.post_creation_hook;
    if (!hook.empty() && (hook.front() == '/' || hook.front() == '\\' ||
                          (hook.size() >= 2 && hook[1] == ':'))) {
      diags.push_back("hook path must be relative");
    } else {
      try {
        normalize_repo_path(hook);
      } catch (const Error&) {
        diags.push_back("hook path escapes the project directory");
      }
    }
  }

  std::map<std::string, std::string> folded;
  for (const auto& [name, value] : cfg.user_generics) {
    if (is_builtin_generic_name(name)) diags.push_back("generic '" + name + "' is reserved");
    if (!folded.emplace(text::to_lower(name), name).second) {
      diags.push_back("generic '" + name + "' duplicates '" + folded[text::to_lower(name)] + "'");
    }
  }
  return diags;
}

}  // namespace hog
