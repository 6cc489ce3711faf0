#pragma once

// Forge operations (tags, releases). FakeForge is the in-process backend used
// by tests; forge_http.hpp maps the same contract onto GitHub/GitLab REST.

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hog/error.hpp"
#include "hog/versioner.hpp"

namespace hog::forge {

struct Release {
  TagName tag;
  std::string title;
  std::string notes;
  bool draft = false;
};

struct Acknowledgment {
  std::string detail;
};

class Forge {
 public:
  virtual ~Forge() = default;

  /// Version tags only; other tag names are filtered out. Order unspecified.
  virtual std::vector<TagName> list_tags() = 0;
  /// Not idempotent: throws TagCollision if the tag exists.
  virtual Acknowledgment create_tag(const TagName& tag, const CommitRef& commit) = 0;
  /// Throws MissingTag if the tag is absent, DuplicateRelease on repeat.
  virtual Acknowledgment create_release(const Release& release) = 0;
};

/// What a handle points at. The token is referenced by environment variable
/// name and only resolved when connecting.
struct ForgeHandle {
  enum class Kind { github, gitlab, fake };
  Kind kind = Kind::fake;
  std::string base_url;   // e.g. https://api.github.com, https://gitlab.com/api/v4
  std::string project;    // "owner/repo" (github) or project path/id (gitlab)
  std::string token_env = "HOG_FORGE_TOKEN";
  std::chrono::seconds timeout{30};
};

inline std::string describe(const ForgeHandle& h) {
  std::string kind = h.kind == ForgeHandle::Kind::github ? "github"
                     : h.kind == ForgeHandle::Kind::gitlab ? "gitlab" : "fake";
  return kind + (h.base_url.empty() ? "" : " " + h.base_url) + (h.project.empty() ? "" : " " + h.project) +
         " (token from $" + h.token_env + ")";
}

class FakeForge final : public Forge {
 public:
  FakeForge() = default;
  /// Seeds raw tag names (version or not) pointing at `sha`.
  explicit FakeForge(const std::vector<std::string>& tags, const std::string& sha = std::string(40, '0')) {
    for (const auto& t : tags) raw_tags_[t] = sha;
  }

  void set_reachable(bool reachable) { reachable_ = reachable; }
  void set_authorized(bool authorized) { authorized_ = authorized; }

  std::vector<TagName> list_tags() override {
    check();
    std::vector<TagName> out;
    for (const auto& [name, sha] : raw_tags_) {
      if (auto v = try_parse_tag(name)) out.push_back({*v});
    }
    return out;
  }

  Acknowledgment create_tag(const TagName& tag, const CommitRef& commit) override {
    check();
    auto name = tag.str();
    if (raw_tags_.count(name)) throw Error(ErrorCode::TagCollision, name + " already exists on the forge");
    raw_tags_[name] = commit.sha();
    ++mutations_;
    return {"created tag " + name + " at " + commit.sha()};
  }

  Acknowledgment create_release(const Release& release) override {
    check();
    auto name = release.tag.str();
    if (!raw_tags_.count(name)) throw Error(ErrorCode::MissingTag, "no tag " + name + " on the forge");
    if (!releases_.emplace(name, release).second) {
      throw Error(ErrorCode::DuplicateRelease, "release for " + name + " already exists");
    }
    ++mutations_;
    return {"created release " + name};
  }

  std::optional<std::string> tag_target(const std::string& tag) const {
    auto it = raw_tags_.find(tag);
    if (it == raw_tags_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<std::string, Release>& releases() const { return releases_; }
  /// Number of successful create operations so far.
  std::size_t mutations() const { return mutations_; }

 private:
  void check() const {
    if (!reachable_) throw Error(ErrorCode::ForgeUnreachable, "fake forge is offline");
    if (!authorized_) throw Error(ErrorCode::AuthFailed, "fake forge rejected the credentials");
  }

  std::map<std::string, std::string> raw_tags_;
  std::map<std::string, Release> releases_;
  bool reachable_ = true;
  bool authorized_ = true;
  std::size_t mutations_ = 0;
};

}  // namespace hog::forge
