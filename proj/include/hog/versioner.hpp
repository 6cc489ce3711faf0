#pragma once

// Version arithmetic, commit identifiers and tag planning over a commit graph.

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hog/error.hpp"
#include "hog/text.hpp"

namespace hog {

struct VersionTriple {
  std::uint64_t major = 0;
  std::uint64_t minor = 0;
  std::uint64_t patch = 0;

  friend auto operator<=>(const VersionTriple&, const VersionTriple&) = default;
};

/// Largest components that still fit the M:8 | m:8 | p:16 register layout.
inline constexpr std::uint64_t kMaxMajor = 255;
inline constexpr std::uint64_t kMaxMinor = 255;
inline constexpr std::uint64_t kMaxPatch = 65535;

inline std::string to_string(const VersionTriple& v) {
  return std::to_string(v.major) + "." + std::to_string(v.minor) + "." + std::to_string(v.patch);
}

/// A version tag, always rendered as `v<M>.<m>.<p>`.
struct TagName {
  VersionTriple version;

  std::string str() const { return "v" + to_string(version); }
  friend auto operator<=>(const TagName&, const TagName&) = default;
};

inline VersionTriple parse_tag(std::string_view tag) {
  auto fail = [&] {
    return Error(ErrorCode::NotAVersionTag, "'" + std::string(tag) + "' is not of the form vM.m.p");
  };
  if (tag.size() < 6 || tag.front() != 'v') throw fail();
  auto body = tag.substr(1);
  std::uint64_t parts[3];
  for (int i = 0; i < 3; ++i) {
    auto dot = body.find('.');
    if ((i < 2) != (dot != std::string_view::npos)) throw fail();
    auto piece = body.substr(0, dot);
    auto v = text::parse_canonical_uint(piece);
    if (!v) throw fail();
    parts[i] = *v;
    if (dot != std::string_view::npos) body.remove_prefix(dot + 1);
  }
  return {parts[0], parts[1], parts[2]};
}

inline std::optional<VersionTriple> try_parse_tag(std::string_view tag) {
  try {
    return parse_tag(tag);
  } catch (const Error&) {
    return std::nullopt;
  }
}

enum class Bump { patch, minor, major };

constexpr std::string_view to_string(Bump b) {
  switch (b) {
    case Bump::patch: return "patch";
    case Bump::minor: return "minor";
    case Bump::major: return "major";
  }
  return "?";
}

inline Bump parse_bump(std::string_view s) {
  if (s == "patch") return Bump::patch;
  if (s == "minor") return Bump::minor;
  if (s == "major") return Bump::major;
  throw Error(ErrorCode::SyntaxError, "unknown bump '" + std::string(s) + "'");
}

inline VersionTriple next_version(const VersionTriple& current, Bump bump) {
  VersionTriple next = current;
  switch (bump) {
    case Bump::patch: next.patch += 1; break;
    case Bump::minor: next = {current.major, current.minor + 1, 0}; break;
    case Bump::major: next = {current.major + 1, 0, 0}; break;
  }
  if (next.major > kMaxMajor || next.minor > kMaxMinor || next.patch > kMaxPatch) {
    throw Error(ErrorCode::Overflow, "version " + to_string(next) + " does not fit M:8 m:8 p:16");
  }
  return next;
}

// ---------------------------------------------------------------------------
// Commit identifiers

inline std::uint32_t sha32_of(std::string_view sha) {
  if (sha.size() != 40) {
    throw Error(ErrorCode::MalformedSha, "expected 40 hex characters, got " + std::to_string(sha.size()));
  }
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < sha.size(); ++i) {
    char c = sha[i];
    if (!text::is_hex_digit(c)) throw Error(ErrorCode::MalformedSha, "non-hex character in sha");
    if (i < 8) {
      v = (v << 4) |
          static_cast<std::uint32_t>(c <= '9' ? c - '0' : text::ascii_lower(c) - 'a' + 10);
    }
  }
  return v;
}

class CommitRef {
 public:
  /// Validates and lowercases a full 40-hex sha.
  explicit CommitRef(std::string_view sha) : sha32_(sha32_of(sha)), sha_(text::to_lower(sha)) {}

  const std::string& sha() const { return sha_; }
  std::uint32_t sha32() const { return sha32_; }
  /// The 8-character prefix, lowercase, as shown by `version`.
  std::string short_sha() const { return sha_.substr(0, 8); }

  friend bool operator==(const CommitRef& a, const CommitRef& b) { return a.sha_ == b.sha_; }

 private:
  std::uint32_t sha32_;
  std::string sha_;
};

// ---------------------------------------------------------------------------
// Branch classification

struct BranchClass {
  enum class Kind { main, develop, release, other };
  Kind kind = Kind::other;
  /// Version line (M, m); meaningful only for release branches.
  std::uint64_t line_major = 0;
  std::uint64_t line_minor = 0;

  static BranchClass main() { return {Kind::main}; }
  static BranchClass develop() { return {Kind::develop}; }
  static BranchClass release(std::uint64_t major, std::uint64_t minor) { return {Kind::release, major, minor}; }
  static BranchClass other() { return {Kind::other}; }

  friend bool operator==(const BranchClass&, const BranchClass&) = default;
};

struct ReleaseNaming {
  std::vector<std::string> main_names{"main", "master"};
  std::vector<std::string> develop_names{"develop"};
  /// Must contain `{M}` followed later by `{m}`, separated by a non-digit.
  std::string release_pattern = "release/{M}.{m}";
};

namespace detail {

/// Consumes a canonical decimal number from the front of `s`.
inline std::optional<std::uint64_t> take_number(std::string_view& s) {
  std::size_t n = 0;
  while (n < s.size() && s[n] >= '0' && s[n] <= '9') ++n;
  auto v = text::parse_canonical_uint(s.substr(0, n));
  if (v) s.remove_prefix(n);
  return v;
}

inline std::optional<std::pair<std::uint64_t, std::uint64_t>> match_release_pattern(
    std::string_view pattern, std::string_view name) {
  auto pm = pattern.find("{M}");
  auto pn = pattern.find("{m}");
  if (pm == std::string_view::npos || pn == std::string_view::npos || pn < pm + 3) return std::nullopt;
  auto prefix = pattern.substr(0, pm);
  auto sep = pattern.substr(pm + 3, pn - pm - 3);
  auto suffix = pattern.substr(pn + 3);
  if (sep.empty() || (sep.front() >= '0' && sep.front() <= '9')) return std::nullopt;

  if (!text::starts_with(name, prefix)) return std::nullopt;
  name.remove_prefix(prefix.size());
  auto major = take_number(name);
  if (!major || !text::starts_with(name, sep)) return std::nullopt;
  name.remove_prefix(sep.size());
  auto minor = take_number(name);
  if (!minor || name != suffix) return std::nullopt;
  return std::make_pair(*major, *minor);
}

}  // namespace detail

inline BranchClass classify_branch(std::string_view name, const ReleaseNaming& naming = {}) {
  for (const auto& n : naming.main_names) {
    if (n == name) return BranchClass::main();
  }
  for (const auto& n : naming.develop_names) {
    if (n == name) return BranchClass::develop();
  }
  if (auto line = detail::match_release_pattern(naming.release_pattern, name)) {
    return BranchClass::release(line->first, line->second);
  }
  return BranchClass::other();
}

// ---------------------------------------------------------------------------
// Commit graph

/// Immutable-after-construction snapshot of repository history. Commits must
/// be added parents-first, which keeps the graph acyclic by construction.
class CommitGraph {
 public:
  struct Node {
    CommitRef ref;
    std::vector<std::size_t> parents;
    std::int64_t commit_time = 0;  // seconds since the epoch, UTC
    std::vector<VersionTriple> tags;
  };

  /// Throws GraphError on a duplicate sha or an unknown parent.
  std::size_t add_commit(const CommitRef& ref, const std::vector<std::string>& parents = {},
                         std::int64_t commit_time = 0) {
    if (index_.count(ref.sha())) throw Error(ErrorCode::GraphError, "duplicate commit " + ref.sha());
    Node node{ref, {}, commit_time, {}};
    for (const auto& p : parents) {
      auto it = index_.find(text::to_lower(p));
      if (it == index_.end()) throw Error(ErrorCode::GraphError, "unknown parent " + p + " of " + ref.sha());
      node.parents.push_back(it->second);
    }
    nodes_.push_back(std::move(node));
    index_.emplace(ref.sha(), nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  /// Attaches a version tag. Returns false for names that are not version
  /// tags (they are ignored). Throws GraphError for unknown commits and
  /// TagCollision if the tag already exists.
  bool add_tag(std::string_view tag, std::string_view sha) {
    auto version = try_parse_tag(tag);
    if (!version) return false;
    auto idx = index_of(sha);
    if (tags_.count(*version)) throw Error(ErrorCode::TagCollision, "tag " + std::string(tag) + " already exists");
    tags_.emplace(*version, idx);
    nodes_[idx].tags.push_back(*version);
    return true;
  }

  void set_branch(std::string name, std::string_view sha) { branches_[std::move(name)] = index_of(sha); }

  bool contains(std::string_view sha) const { return index_.count(text::to_lower(sha)) != 0; }

  std::size_t index_of(std::string_view sha) const {
    auto it = index_.find(text::to_lower(sha));
    if (it == index_.end()) throw Error(ErrorCode::GraphError, "unknown commit " + std::string(sha));
    return it->second;
  }

  const Node& node(std::size_t idx) const { return nodes_.at(idx); }
  const Node& node(std::string_view sha) const { return nodes_[index_of(sha)]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  bool has_tag(const VersionTriple& v) const { return tags_.count(v) != 0; }
  const std::map<VersionTriple, std::size_t>& tags() const { return tags_; }

  std::optional<std::size_t> branch_head(std::string_view name) const {
    auto it = branches_.find(std::string(name));
    if (it == branches_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<std::string, std::size_t>& branches() const { return branches_; }

 private:
  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<VersionTriple, std::size_t> tags_;
  std::map<std::string, std::size_t> branches_;
};

struct RepoVersion {
  VersionTriple version;
  bool exact = false;
  CommitRef commit;
};

/// Highest version tag reachable from `head` (inclusive). Untagged history
/// yields 0.0.0 with exact=false.
inline RepoVersion compute_repo_version(const CommitGraph& graph, std::string_view head) {
  const std::size_t start = graph.index_of(head);
  std::vector<bool> seen(graph.size(), false);
  std::deque<std::size_t> queue{start};
  seen[start] = true;
  std::optional<VersionTriple> best;
  while (!queue.empty()) {
    auto idx = queue.front();
    queue.pop_front();
    const auto& n = graph.node(idx);
    for (const auto& v : n.tags) {
      if (!best || v > *best) best = v;
    }
    for (auto p : n.parents) {
      if (!seen[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    }
  }
  const auto& head_node = graph.node(start);
  RepoVersion out{best.value_or(VersionTriple{}), false, head_node.ref};
  if (best) {
    for (const auto& v : head_node.tags) {
      if (v == *best) out.exact = true;
    }
  }
  return out;
}

/// Plans the next tag for a branch whose head is `head`. Release branches
/// only take patch bumps and must already be on their version line.
inline TagName plan_tag(const CommitGraph& graph, std::string_view head, const BranchClass& branch,
                        Bump bump) {
  if (branch.kind == BranchClass::Kind::other) {
    throw Error(ErrorCode::NotAReleaseBranch, "branch is not a main, develop or release branch");
  }
  if (branch.kind == BranchClass::Kind::release && bump != Bump::patch) {
    throw Error(ErrorCode::BumpNotAllowed,
                std::string(to_string(bump)) + " bump on a release branch (only patch is allowed)");
  }
  auto base = compute_repo_version(graph, head).version;
  if (branch.kind == BranchClass::Kind::release &&
      (base.major != branch.line_major || base.minor != branch.line_minor)) {
    throw Error(ErrorCode::LineMismatch, "release line " + std::to_string(branch.line_major) + "." +
                                             std::to_string(branch.line_minor) + " but head is at " +
                                             to_string(base));
  }
  TagName planned{next_version(base, bump)};
  if (graph.has_tag(planned.version)) throw Error(ErrorCode::TagCollision, planned.str() + " already exists");
  return planned;
}

/// Looks the branch head up by name and classifies it with `naming`.
inline TagName plan_tag(const CommitGraph& graph, std::string_view branch_name,
                        const ReleaseNaming& naming, Bump bump) {
  auto head = graph.branch_head(branch_name);
  if (!head) throw Error(ErrorCode::GraphError, "unknown branch " + std::string(branch_name));
  return plan_tag(graph, graph.node(*head).ref.sha(), classify_branch(branch_name, naming), bump);
}

}  // namespace hog
