#pragma once

// Generic bindings handed to the HDL top module, their vendor Tcl rendering,
// and the mock artifact that stands in for a bitstream.
//
// Artifact byte layout:
//   bytes 0-3   "HOGB"
//   byte  4     record count N (u8)
//   N records   [u8 name length L][L bytes ASCII name][u32 big-endian value]

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hog/config.hpp"
#include "hog/error.hpp"
#include "hog/tcl.hpp"
#include "hog/text.hpp"
#include "hog/versioner.hpp"

namespace hog {

struct GenericBinding {
  enum class Origin { builtin, user };

  std::string name;
  TypedValue value;
  Origin origin = Origin::user;

  friend bool operator==(const GenericBinding&, const GenericBinding&) = default;
};

inline std::uint32_t pack_version(const VersionTriple& v) {
  if (v.major > kMaxMajor || v.minor > kMaxMinor || v.patch > kMaxPatch) {
    throw Error(ErrorCode::Overflow, "version " + to_string(v) + " does not fit M:8 m:8 p:16");
  }
  return static_cast<std::uint32_t>((v.major << 24) | (v.minor << 16) | v.patch);
}

namespace detail {

/// Packs decimal digits into nibbles, most significant first.
inline std::uint32_t bcd(std::uint32_t value, int digits) {
  std::uint32_t out = 0;
  for (int i = 0; i < digits; ++i) {
    out |= (value % 10) << (4 * i);
    value /= 10;
  }
  return out;
}

}  // namespace detail

inline std::uint32_t bcd_date(std::chrono::sys_seconds t) {
  using namespace std::chrono;
  year_month_day ymd{floor<days>(t)};
  int y = static_cast<int>(ymd.year());
  if (y < 0 || y > 9999) throw Error(ErrorCode::Overflow, "year out of BCD range");
  return (detail::bcd(static_cast<std::uint32_t>(y), 4) << 16) |
         (detail::bcd(static_cast<unsigned>(ymd.month()), 2) << 8) |
         detail::bcd(static_cast<unsigned>(ymd.day()), 2);
}

inline std::uint32_t bcd_time(std::chrono::sys_seconds t) {
  using namespace std::chrono;
  hh_mm_ss hms{t - floor<days>(t)};
  return (detail::bcd(static_cast<std::uint32_t>(hms.hours().count()), 2) << 16) |
         (detail::bcd(static_cast<std::uint32_t>(hms.minutes().count()), 2) << 8) |
         detail::bcd(static_cast<std::uint32_t>(hms.seconds().count()), 2);
}

/// The four builtin bindings, in the order GLOBAL_SHA, GLOBAL_VER,
/// GLOBAL_DATE, GLOBAL_TIME. Date and time come from the commit timestamp.
inline std::vector<GenericBinding> builtin_generics(const VersionTriple& version, const CommitRef& commit,
                                                    std::chrono::sys_seconds commit_time) {
  using Origin = GenericBinding::Origin;
  return {
      {"GLOBAL_SHA", TypedValue::bitvector32(commit.sha32()), Origin::builtin},
      {"GLOBAL_VER", TypedValue::bitvector32(pack_version(version)), Origin::builtin},
      {"GLOBAL_DATE", TypedValue::bitvector32(bcd_date(commit_time)), Origin::builtin},
      {"GLOBAL_TIME", TypedValue::bitvector32(bcd_time(commit_time)), Origin::builtin},
  };
}

inline std::vector<GenericBinding> user_bindings(const ProjectConfig& cfg) {
  std::vector<GenericBinding> out;
  for (const auto& [name, value] : cfg.user_generics) {
    out.push_back({name, value, GenericBinding::Origin::user});
  }
  return out;
}

inline std::vector<GenericBinding> merge_generics(const std::vector<GenericBinding>& builtin,
                                                  const std::vector<GenericBinding>& user) {
  std::vector<GenericBinding> out = builtin;
  for (const auto& b : user) {
    if (is_builtin_generic_name(b.name)) {
      throw Error(ErrorCode::ReservedNameError, "user generic '" + b.name + "' uses a builtin name");
    }
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vendor rendering
//
//   vivado   set_property generic [list NAME=VALUE ...] [current_fileset]
//   quartus  set_parameter -name NAME VALUE            (one line per binding)
//   libero   set_option -generic {NAME=VALUE}          (one line per binding)
//
// Values: bv32 as 32'hXXXXXXXX, int as signed decimal, bool as 1'b1/1'b0,
// strings as "text" (vivado, quartus only).

namespace detail {

inline std::string render_value(const TypedValue& v, Vendor vendor, std::string_view name) {
  switch (v.kind()) {
    case TypedValue::Kind::bitvector32: return "32'h" + text::hex(v.as_bitvector32(), 8);
    case TypedValue::Kind::integer: return std::to_string(v.as_integer());
    case TypedValue::Kind::boolean: return v.as_boolean() ? "1'b1" : "1'b0";
    case TypedValue::Kind::string:
      if (vendor == Vendor::libero) {
        throw Error(ErrorCode::UnsupportedType,
                    "string generic '" + std::string(name) + "' has no libero rendering");
      }
      return "\"" + v.as_string() + "\"";
  }
  throw Error(ErrorCode::UnsupportedType, "unknown value kind");
}

}  // namespace detail

inline std::string render_assignments(const std::vector<GenericBinding>& bindings, Vendor vendor) {
  if (bindings.empty()) return {};
  std::string out;
  switch (vendor) {
    case Vendor::vivado: {
      out = "set_property generic [list";
      for (const auto& b : bindings) {
        out += " " + tcl::word(b.name + "=" + detail::render_value(b.value, vendor, b.name));
      }
      out += "] [current_fileset]\n";
      break;
    }
    case Vendor::quartus:
      for (const auto& b : bindings) {
        out += "set_parameter -name " + tcl::word(b.name) + " " +
               tcl::word(detail::render_value(b.value, vendor, b.name)) + "\n";
      }
      break;
    case Vendor::libero:
      for (const auto& b : bindings) {
        out += "set_option -generic {" + b.name + "=" + detail::render_value(b.value, vendor, b.name) + "}\n";
      }
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mock artifact

inline constexpr std::string_view kArtifactMagic = "HOGB";

struct ArtifactRecord {
  std::string name;
  std::uint32_t value = 0;

  friend bool operator==(const ArtifactRecord&, const ArtifactRecord&) = default;
};

struct ArtifactBlob {
  std::vector<std::uint8_t> bytes;
};

inline std::uint32_t register_value(const GenericBinding& b) {
  const auto& v = b.value;
  switch (v.kind()) {
    case TypedValue::Kind::bitvector32: return v.as_bitvector32();
    case TypedValue::Kind::boolean: return v.as_boolean() ? 1u : 0u;
    case TypedValue::Kind::integer: {
      auto i = v.as_integer();
      if (i < INT32_MIN || i > static_cast<std::int64_t>(UINT32_MAX)) {
        throw Error(ErrorCode::Overflow, "generic '" + b.name + "' does not fit 32 bits");
      }
      return static_cast<std::uint32_t>(i);
    }
    case TypedValue::Kind::string: break;
  }
  throw Error(ErrorCode::UnsupportedType, "string generic '" + b.name + "' cannot be stored in a register");
}

inline ArtifactBlob embed_into_artifact(const std::vector<GenericBinding>& bindings) {
  if (bindings.size() > 255) throw Error(ErrorCode::Overflow, "more than 255 records");
  ArtifactBlob blob;
  auto& out = blob.bytes;
  out.insert(out.end(), kArtifactMagic.begin(), kArtifactMagic.end());
  out.push_back(static_cast<std::uint8_t>(bindings.size()));
  for (const auto& b : bindings) {
    auto value = register_value(b);
    if (b.name.empty() || b.name.size() > 255) throw Error(ErrorCode::Overflow, "record name length out of range");
    out.push_back(static_cast<std::uint8_t>(b.name.size()));
    out.insert(out.end(), b.name.begin(), b.name.end());
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
  return blob;
}

inline std::vector<ArtifactRecord> decode_artifact(std::span<const std::uint8_t> bytes) {
  auto bad = [](const std::string& why) { return Error(ErrorCode::MalformedArtifact, why); };
  if (bytes.size() < 5 || !std::equal(kArtifactMagic.begin(), kArtifactMagic.end(), bytes.begin())) {
    throw bad("missing HOGB magic");
  }
  std::size_t count = bytes[4];
  std::size_t pos = 5;
  std::vector<ArtifactRecord> records;
  for (std::size_t r = 0; r < count; ++r) {
    if (pos >= bytes.size()) throw bad("truncated record header");
    std::size_t len = bytes[pos++];
    if (pos + len + 4 > bytes.size()) throw bad("truncated record");
    ArtifactRecord rec;
    rec.name.assign(reinterpret_cast<const char*>(bytes.data() + pos), len);
    pos += len;
    for (int i = 0; i < 4; ++i) rec.value = (rec.value << 8) | bytes[pos++];
    records.push_back(std::move(rec));
  }
  if (pos != bytes.size()) throw bad("trailing bytes after last record");
  return records;
}

/// Recovers the commit an artifact was built from via its GLOBAL_SHA record.
inline CommitRef verify_traceability(const ArtifactBlob& blob, const CommitGraph& graph) {
  std::optional<std::uint32_t> sha32;
  for (const auto& rec : decode_artifact(blob.bytes)) {
    if (rec.name != "GLOBAL_SHA") continue;
    if (sha32) throw Error(ErrorCode::MalformedArtifact, "more than one GLOBAL_SHA record");
    sha32 = rec.value;
  }
  if (!sha32) throw Error(ErrorCode::NoShaRecord, "artifact carries no GLOBAL_SHA record");

  const CommitGraph::Node* match = nullptr;
  for (const auto& n : graph.nodes()) {
    if (n.ref.sha32() != *sha32) continue;
    if (match) {
      throw Error(ErrorCode::AmbiguousCommit,
                  "sha32 " + text::hex(*sha32, 8, false) + " matches " + match->ref.sha() + " and " + n.ref.sha());
    }
    match = &n;
  }
  if (!match) throw Error(ErrorCode::UnknownCommit, "no commit with sha32 " + text::hex(*sha32, 8, false));
  return match->ref;
}

}  // namespace hog
