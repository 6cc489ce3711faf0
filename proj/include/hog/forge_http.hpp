#pragma once

// REST mapping of the forge contract.
//
//   GitHub (base https://api.github.com, project owner/repo)
//     list tags       GET  /repos/{project}/tags?per_page=100&page=N
//     create tag      POST /repos/{project}/git/refs      {"ref":"refs/tags/vX.Y.Z","sha":...}
//     find release    GET  /repos/{project}/releases/tags/{tag}
//     create release  POST /repos/{project}/releases      {"tag_name","name","body","draft"}
//     auth            Authorization: Bearer <token>
//
//   GitLab (base https://gitlab.com/api/v4, project path or numeric id)
//     list tags       GET  /projects/{id}/repository/tags?per_page=100&page=N
//     create tag      POST /projects/{id}/repository/tags {"tag_name","ref"}
//     find release    GET  /projects/{id}/releases/{tag}
//     create release  POST /projects/{id}/releases        {"tag_name","name","description"}
//     auth            PRIVATE-TOKEN: <token>
//
// Transport failures map to ForgeUnreachable, 401/403 to AuthFailed. The
// token is sent only in request headers and never appears in messages.

#include <map>
#include <memory>
#include <string>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "hog/error.hpp"
#include "hog/forge.hpp"

namespace hog::forge {

namespace detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing '/'
};

inline SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::ForgeUnreachable, "invalid forge URL '" + url + "'");
  auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.prefix = url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

inline std::string url_encode(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += text::hex(c, 2);
    }
  }
  return out;
}

}  // namespace detail

class HttpForge final : public Forge {
 public:
  HttpForge(ForgeHandle handle, std::string token) : handle_(std::move(handle)), token_(std::move(token)) {
    if (handle_.kind == ForgeHandle::Kind::fake) throw Error(ErrorCode::ForgeUnreachable, "HttpForge needs a real forge kind");
    if (handle_.base_url.empty()) {
      handle_.base_url = handle_.kind == ForgeHandle::Kind::github ? "https://api.github.com" : "https://gitlab.com/api/v4";
    }
    auto split = detail::split_url(handle_.base_url);
    origin_ = split.origin;
    prefix_ = split.prefix;
  }

  std::vector<TagName> list_tags() override {
    std::vector<TagName> out;
    for (int page = 1;; ++page) {
      auto res = request("GET", repo_path() + (github() ? "/tags" : "/repository/tags") +
                                    "?per_page=100&page=" + std::to_string(page));
      expect_ok(res, "list tags");
      auto body = nlohmann::json::parse(res->body, nullptr, false);
      if (!body.is_array()) throw Error(ErrorCode::ForgeUnreachable, "list tags: unexpected response body");
      for (const auto& t : body) {
        if (!t.contains("name") || !t["name"].is_string()) continue;
        if (auto v = try_parse_tag(t["name"].get<std::string>())) out.push_back({*v});
      }
      if (body.size() < 100) break;
    }
    return out;
  }

  Acknowledgment create_tag(const TagName& tag, const CommitRef& commit) override {
    for (const auto& t : list_tags()) {
      if (t == tag) throw Error(ErrorCode::TagCollision, tag.str() + " already exists on the forge");
    }
    nlohmann::json body;
    std::string path;
    if (github()) {
      path = repo_path() + "/git/refs";
      body = {{"ref", "refs/tags/" + tag.str()}, {"sha", commit.sha()}};
    } else {
      path = repo_path() + "/repository/tags";
      body = {{"tag_name", tag.str()}, {"ref", commit.sha()}};
    }
    auto res = request("POST", path, body.dump());
    if (res && (res->status == 422 || (res->status == 400 && res->body.find("already exists") != std::string::npos))) {
      throw Error(ErrorCode::TagCollision, tag.str() + " already exists on the forge");
    }
    expect_ok(res, "create tag");
    return {"created tag " + tag.str() + " at " + commit.sha()};
  }

  Acknowledgment create_release(const Release& release) override {
    const auto name = release.tag.str();
    auto tags = list_tags();
    if (std::find(tags.begin(), tags.end(), release.tag) == tags.end()) {
      throw Error(ErrorCode::MissingTag, "no tag " + name + " on the forge");
    }
    auto existing = request("GET", repo_path() + (github() ? "/releases/tags/" : "/releases/") + name);
    if (existing && existing->status == 200) throw Error(ErrorCode::DuplicateRelease, "release for " + name + " already exists");
    if (existing && existing->status != 404) expect_ok(existing, "look up release");

    nlohmann::json body = {{"tag_name", name}, {"name", release.title}};
    if (github()) {
      body["body"] = release.notes;
      body["draft"] = release.draft;
    } else {
      body["description"] = release.notes;
    }
    auto res = request("POST", repo_path() + "/releases", body.dump());
    if (res && (res->status == 409 || res->status == 422)) {
      throw Error(ErrorCode::DuplicateRelease, "release for " + name + " already exists");
    }
    expect_ok(res, "create release");
    return {"created release " + name};
  }

  const ForgeHandle& handle() const { return handle_; }

 private:
  bool github() const { return handle_.kind == ForgeHandle::Kind::github; }

  std::string repo_path() const {
    return prefix_ + (github() ? "/repos/" + handle_.project : "/projects/" + detail::url_encode(handle_.project));
  }

  httplib::Result request(const std::string& method, const std::string& path, const std::string& body = {}) {
    httplib::Client client(origin_);
    const auto secs = static_cast<time_t>(handle_.timeout.count());
    client.set_connection_timeout(secs, 0);
    client.set_read_timeout(secs, 0);
    client.set_write_timeout(secs, 0);
    httplib::Headers headers{{"User-Agent", "hog-cpp"}};
    if (github()) {
      headers.emplace("Accept", "application/vnd.github+json");
      if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    } else if (!token_.empty()) {
      headers.emplace("PRIVATE-TOKEN", token_);
    }
    if (method == "GET") return client.Get(path, headers);
    return client.Post(path, headers, body, "application/json");
  }

  void expect_ok(const httplib::Result& res, const std::string& what) const {
    if (!res) {
      throw Error(ErrorCode::ForgeUnreachable, what + ": " + httplib::to_string(res.error()) + " (" + origin_ + ")");
    }
    if (res->status == 401 || res->status == 403) {
      throw Error(ErrorCode::AuthFailed, what + ": HTTP " + std::to_string(res->status));
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::ForgeUnreachable, what + ": HTTP " + std::to_string(res->status));
    }
  }

  ForgeHandle handle_;
  std::string token_;
  std::string origin_;
  std::string prefix_;
};

/// Opens a real forge; the token comes from env[handle.token_env].
inline std::unique_ptr<Forge> connect(const ForgeHandle& handle, const std::map<std::string, std::string>& env) {
  if (handle.kind == ForgeHandle::Kind::fake) return std::make_unique<FakeForge>();
  auto it = env.find(handle.token_env);
  std::string token = it == env.end() ? std::string() : it->second;
  return std::make_unique<HttpForge>(handle, std::move(token));
}

}  // namespace hog::forge
