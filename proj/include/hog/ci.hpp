#pragma once

// CI workflow emission (GitLab CI, GitHub Actions), container wrapping and a
// model of the two-stage pipeline: merge/pull requests toward a target branch
// build and simulate; merges into a target branch tag and optionally release.
//
// Variables written into every workflow:
//   HOG_USE_DOXYGEN              "1" when the doc job is enabled
//   HOG_CREATE_OFFICIAL_RELEASE  "1" when the release job is enabled
//   HOG_BUMP                     bump kind for the tag job (default patch)
// CiConfig::variables are passed through after these.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "hog/config.hpp"
#include "hog/error.hpp"
#include "hog/ordered_map.hpp"
#include "hog/text.hpp"

namespace hog::ci {

enum class Provider { gitlab, github };

constexpr std::string_view to_string(Provider p) {
  return p == Provider::gitlab ? "gitlab" : "github";
}

inline Provider parse_provider(std::string_view s) {
  if (s == "gitlab") return Provider::gitlab;
  if (s == "github") return Provider::github;
  throw Error(ErrorCode::UnsupportedProvider, "unknown CI provider '" + std::string(s) + "'");
}

struct Container {
  enum class Kind { none, docker, apptainer };
  Kind kind = Kind::none;
  std::string image;  // docker image reference

  static Container none() { return {}; }
  static Container docker(std::string image) { return {Kind::docker, std::move(image)}; }
  static Container apptainer() { return {Kind::apptainer, {}}; }
};

inline constexpr std::string_view kApptainerImageVar = "HOG_APPTAINER_IMAGE";

struct CiConfig {
  Provider provider = Provider::github;
  std::vector<std::string> projects;
  /// Branch names or globs (`*` within a path segment, `**` across).
  std::vector<std::string> target_branches{"main"};
  bool enable_doxygen = false;
  bool enable_release = false;
  Container container;
  std::vector<std::string> runner_tags;
  OrderedMap<std::string> variables;
};

inline std::vector<std::string> validate_ci_config(const CiConfig& cfg) {
  std::vector<std::string> diags;
  if (cfg.projects.empty()) diags.push_back("no projects configured");
  std::vector<std::string> seen;
  for (const auto& p : cfg.projects) {
    if (!is_project_name(p)) diags.push_back("invalid project name '" + p + "'");
    if (std::find(seen.begin(), seen.end(), p) != seen.end()) diags.push_back("project '" + p + "' listed twice");
    seen.push_back(p);
  }
  if (cfg.target_branches.empty()) diags.push_back("no target branches configured");
  for (const auto& b : cfg.target_branches) {
    if (b.empty() || std::any_of(b.begin(), b.end(), text::is_space)) {
      diags.push_back("invalid target branch '" + b + "'");
    }
  }
  if (cfg.container.kind == Container::Kind::docker && cfg.container.image.empty()) {
    diags.push_back("docker container selected without an image");
  }
  for (const auto& t : cfg.runner_tags) {
    if (t.empty() || std::any_of(t.begin(), t.end(), text::is_space)) diags.push_back("invalid runner tag '" + t + "'");
  }
  for (const auto& [k, v] : cfg.variables) {
    if (!is_hdl_identifier(k)) diags.push_back("invalid variable name '" + k + "'");
  }
  return diags;
}

// ---------------------------------------------------------------------------
// Branch globs

/// `*` matches within one path segment, `**` matches anything, `?` one
/// non-'/' character; everything else is literal.
inline bool branch_matches(std::string_view pattern, std::string_view name) {
  if (pattern.empty()) return name.empty();
  if (text::starts_with(pattern, "**")) {
    auto rest = pattern.substr(2);
    for (std::size_t i = 0; i <= name.size(); ++i) {
      if (branch_matches(rest, name.substr(i))) return true;
    }
    return false;
  }
  if (pattern.front() == '*') {
    auto rest = pattern.substr(1);
    for (std::size_t i = 0; i <= name.size(); ++i) {
      if (branch_matches(rest, name.substr(i))) return true;
      if (i < name.size() && name[i] == '/') break;
    }
    return false;
  }
  if (name.empty()) return false;
  if (pattern.front() == '?') return name.front() != '/' && branch_matches(pattern.substr(1), name.substr(1));
  return pattern.front() == name.front() && branch_matches(pattern.substr(1), name.substr(1));
}

inline bool is_glob(std::string_view pattern) {
  return pattern.find_first_of("*?") != std::string_view::npos;
}

/// GitLab rule regex for a glob, anchored, with '/' escaped.
inline std::string glob_to_gitlab_regex(std::string_view pattern) {
  std::string re = "/^";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    char c = pattern[i];
    if (c == '*' && i + 1 < pattern.size() && pattern[i + 1] == '*') {
      re += ".*";
      ++i;
    } else if (c == '*') {
      re += "[^\\/]*";
    } else if (c == '?') {
      re += "[^\\/]";
    } else if (c == '/') {
      re += "\\/";
    } else if (std::string_view(".+()[]{}|^$\\").find(c) != std::string_view::npos) {
      re += '\\';
      re += c;
    } else {
      re += c;
    }
  }
  return re + "$/";
}

// ---------------------------------------------------------------------------
// Pipeline model

enum class Stage { generate, build, simulate, doc, tag, release };

constexpr std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::generate: return "generate";
    case Stage::build: return "build";
    case Stage::simulate: return "simulate";
    case Stage::doc: return "doc";
    case Stage::tag: return "tag";
    case Stage::release: return "release";
  }
  return "?";
}

inline constexpr Stage kStages[] = {Stage::generate, Stage::build, Stage::simulate,
                                    Stage::doc,      Stage::tag,   Stage::release};

struct Job {
  std::string name;     // e.g. "build:proj"
  Stage stage;
  std::string project;  // empty for repository-wide jobs

  friend bool operator==(const Job&, const Job&) = default;
};

struct PipelinePlan {
  std::vector<Job> jobs;

  bool empty() const { return jobs.empty(); }
  bool has_stage(Stage s) const {
    return std::any_of(jobs.begin(), jobs.end(), [&](const Job& j) { return j.stage == s; });
  }
  friend bool operator==(const PipelinePlan&, const PipelinePlan&) = default;
};

struct ForgeEvent {
  enum class Kind { pr_opened, pr_merged, push };
  Kind kind;
  std::string source;  // pr_opened only
  std::string target;  // target branch, or the pushed branch

  static ForgeEvent pr_opened(std::string source, std::string target) {
    return {Kind::pr_opened, std::move(source), std::move(target)};
  }
  static ForgeEvent pr_merged(std::string target) { return {Kind::pr_merged, {}, std::move(target)}; }
  static ForgeEvent push(std::string branch) { return {Kind::push, {}, std::move(branch)}; }
};

inline bool is_target_branch(const CiConfig& cfg, std::string_view branch) {
  return std::any_of(cfg.target_branches.begin(), cfg.target_branches.end(),
                     [&](const std::string& p) { return branch_matches(p, branch); });
}

/// Jobs of the merge-request pipeline, in stage order.
inline PipelinePlan pr_pipeline(const CiConfig& cfg) {
  PipelinePlan plan;
  plan.jobs.push_back({"generate", Stage::generate, {}});
  for (const auto& p : cfg.projects) plan.jobs.push_back({"build:" + p, Stage::build, p});
  for (const auto& p : cfg.projects) plan.jobs.push_back({"simulate:" + p, Stage::simulate, p});
  if (cfg.enable_doxygen) plan.jobs.push_back({"doc", Stage::doc, {}});
  return plan;
}

/// Jobs of the post-merge pipeline.
inline PipelinePlan merge_pipeline(const CiConfig& cfg) {
  PipelinePlan plan;
  plan.jobs.push_back({"tag", Stage::tag, {}});
  if (cfg.enable_release) plan.jobs.push_back({"release", Stage::release, {}});
  return plan;
}

inline PipelinePlan simulate_pipeline(const CiConfig& cfg, const ForgeEvent& event) {
  if (!is_target_branch(cfg, event.target)) return {};
  return event.kind == ForgeEvent::Kind::pr_opened ? pr_pipeline(cfg) : merge_pipeline(cfg);
}

// ---------------------------------------------------------------------------
// Container wrapping

inline std::vector<std::string> wrap_with_container(const std::vector<std::string>& command, const CiConfig& cfg,
                                                    const std::map<std::string, std::string>& env) {
  if (cfg.container.kind != Container::Kind::apptainer) return command;
  auto it = env.find(std::string(kApptainerImageVar));
  if (it == env.end() || it->second.empty()) {
    throw Error(ErrorCode::MissingEnv, std::string(kApptainerImageVar) + " is not set");
  }
  std::vector<std::string> out{"apptainer", "exec", it->second};
  out.insert(out.end(), command.begin(), command.end());
  return out;
}

// ---------------------------------------------------------------------------
// Emission

namespace detail {

inline std::string github_job_id(const Job& job) {
  std::string id = job.name;
  for (char& c : id) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return id;
}

/// Shell command lines a job runs, before container wrapping.
inline std::vector<std::string> job_commands(const Job& job) {
  switch (job.stage) {
    case Stage::generate: return {"hog check"};
    case Stage::build:
      return {"hog create " + job.project, "hog embed " + job.project + " --output bin/" + job.project + ".hogb"};
    case Stage::simulate: return {"hog verify bin/" + job.project + ".hogb"};
    case Stage::doc: return {"doxygen"};
    case Stage::tag: return {"hog tag --apply --bump ${HOG_BUMP}"};
    case Stage::release: return {"hog release"};
  }
  return {};
}

inline std::string wrap_line(const CiConfig& cfg, const std::string& line) {
  if (cfg.container.kind == Container::Kind::apptainer) {
    return "apptainer exec \"$" + std::string(kApptainerImageVar) + "\" " + line;
  }
  return line;
}

/// Names of the jobs `job` waits for.
inline std::vector<std::string> job_needs(const Job& job, const PipelinePlan& plan) {
  std::vector<std::string> needs;
  switch (job.stage) {
    case Stage::generate:
    case Stage::tag: break;
    case Stage::build: needs.push_back("generate"); break;
    case Stage::simulate: needs.push_back("build:" + job.project); break;
    case Stage::doc:
      for (const auto& j : plan.jobs) {
        if (j.stage == Stage::simulate) needs.push_back(j.name);
      }
      break;
    case Stage::release: needs.push_back("tag"); break;
  }
  return needs;
}

inline YAML::Node variables_node(const CiConfig& cfg) {
  YAML::Node vars(YAML::NodeType::Map);
  vars["HOG_USE_DOXYGEN"] = cfg.enable_doxygen ? "1" : "0";
  vars["HOG_CREATE_OFFICIAL_RELEASE"] = cfg.enable_release ? "1" : "0";
  vars["HOG_BUMP"] = "patch";
  for (const auto& [k, v] : cfg.variables) vars[k] = v;
  return vars;
}

inline std::string gitlab_rule(const CiConfig& cfg, bool merge_request) {
  const std::string var = merge_request ? "$CI_MERGE_REQUEST_TARGET_BRANCH_NAME" : "$CI_COMMIT_BRANCH";
  std::vector<std::string> alts;
  for (const auto& b : cfg.target_branches) {
    alts.push_back(is_glob(b) ? var + " =~ " + glob_to_gitlab_regex(b) : var + " == \"" + b + "\"");
  }
  std::string source = merge_request ? "$CI_PIPELINE_SOURCE == \"merge_request_event\""
                                     : "$CI_PIPELINE_SOURCE == \"push\"";
  return source + " && (" + text::join(alts, " || ") + ")";
}

/// Scalars a YAML reader would take as a number, bool or null.
inline bool needs_quotes(std::string_view s) {
  if (s.empty()) return true;
  static const char* const kWords[] = {"true", "false", "yes", "no", "on", "off", "y", "n", "null", "~"};
  for (auto w : kWords) {
    if (text::iequals(s, w)) return true;
  }
  std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  bool digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != '_' && c != 'e' && c != 'E' && c != '-' && c != '+' && c != 'x' && c != 'o') {
      return false;
    }
  }
  return digit;
}

inline void emit_node(YAML::Emitter& out, const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Map:
      out << YAML::BeginMap;
      for (const auto& kv : n) {
        out << YAML::Key << kv.first.Scalar() << YAML::Value;
        emit_node(out, kv.second);
      }
      out << YAML::EndMap;
      break;
    case YAML::NodeType::Sequence:
      out << YAML::BeginSeq;
      for (const auto& item : n) emit_node(out, item);
      out << YAML::EndSeq;
      break;
    case YAML::NodeType::Scalar:
      if (needs_quotes(n.Scalar())) out << YAML::DoubleQuoted;
      out << n.Scalar();
      break;
    default:
      out << YAML::Null;
  }
}

/// Block-style YAML; every scalar is either a plain string or quoted.
inline std::string emit(const YAML::Node& root) {
  YAML::Emitter out;
  emit_node(out, root);
  std::string text = out.c_str();
  text += "\n";
  return text;
}

inline std::string emit_gitlab(const CiConfig& cfg) {
  YAML::Node root(YAML::NodeType::Map);
  for (auto s : kStages) root["stages"].push_back(std::string(to_string(s)));
  root["variables"] = variables_node(cfg);

  auto add_jobs = [&](const PipelinePlan& plan, bool merge_request) {
    for (const auto& job : plan.jobs) {
      YAML::Node j(YAML::NodeType::Map);
      j["stage"] = std::string(to_string(job.stage));
      if (cfg.container.kind == Container::Kind::docker) j["image"] = cfg.container.image;
      for (const auto& t : cfg.runner_tags) j["tags"].push_back(t);
      auto needs = job_needs(job, plan);
      if (!needs.empty() || job.stage != Stage::generate) {
        j["needs"] = YAML::Node(YAML::NodeType::Sequence);
        for (const auto& n : needs) j["needs"].push_back(n);
      }
      for (const auto& line : job_commands(job)) j["script"].push_back(wrap_line(cfg, line));
      if (job.stage == Stage::build) j["artifacts"]["paths"].push_back("bin/" + job.project + ".hogb");
      YAML::Node rule(YAML::NodeType::Map);
      rule["if"] = gitlab_rule(cfg, merge_request);
      j["rules"].push_back(rule);
      root[job.name] = j;
    }
  };
  add_jobs(pr_pipeline(cfg), true);
  add_jobs(merge_pipeline(cfg), false);
  return emit(root);
}

inline std::string emit_github(const CiConfig& cfg) {
  YAML::Node root(YAML::NodeType::Map);
  root["name"] = "Hog-CI";
  for (const auto& b : cfg.target_branches) root["on"]["pull_request"]["branches"].push_back(b);
  for (const auto& b : cfg.target_branches) root["on"]["push"]["branches"].push_back(b);
  root["permissions"]["contents"] = "write";
  YAML::Node env = variables_node(cfg);
  env["HOG_FORGE_TOKEN"] = "${{ secrets.HOG_FORGE_TOKEN }}";
  if (cfg.container.kind == Container::Kind::apptainer) {
    env[std::string(kApptainerImageVar)] = "${{ vars.HOG_APPTAINER_IMAGE }}";
  }
  root["env"] = env;

  auto add_jobs = [&](const PipelinePlan& plan, std::string_view event) {
    for (const auto& job : plan.jobs) {
      YAML::Node j(YAML::NodeType::Map);
      j["if"] = "github.event_name == '" + std::string(event) + "'";
      if (cfg.runner_tags.empty()) {
        j["runs-on"] = "ubuntu-latest";
      } else {
        for (const auto& t : cfg.runner_tags) j["runs-on"].push_back(t);
      }
      if (cfg.container.kind == Container::Kind::docker) j["container"]["image"] = cfg.container.image;
      for (const auto& n : job_needs(job, plan)) j["needs"].push_back(github_job_id({n, Stage::generate, {}}));

      YAML::Node checkout(YAML::NodeType::Map);
      checkout["uses"] = "actions/checkout@v4";
      checkout["with"]["fetch-depth"] = "0";
      j["steps"].push_back(checkout);
      if (job.stage == Stage::simulate) {
        YAML::Node dl(YAML::NodeType::Map);
        dl["uses"] = "actions/download-artifact@v4";
        dl["with"]["name"] = job.project;
        dl["with"]["path"] = "bin";
        j["steps"].push_back(dl);
      }
      for (const auto& line : job_commands(job)) {
        YAML::Node step(YAML::NodeType::Map);
        step["run"] = wrap_line(cfg, line);
        j["steps"].push_back(step);
      }
      if (job.stage == Stage::build) {
        YAML::Node up(YAML::NodeType::Map);
        up["uses"] = "actions/upload-artifact@v4";
        up["with"]["name"] = job.project;
        up["with"]["path"] = "bin/" + job.project + ".hogb";
        j["steps"].push_back(up);
      }
      root["jobs"][github_job_id(job)] = j;
    }
  };
  add_jobs(pr_pipeline(cfg), "pull_request");
  add_jobs(merge_pipeline(cfg), "push");
  return emit(root);
}

}  // namespace detail

/// Re-emits parsed YAML with the same rules emit_workflow uses.
inline std::string emit_yaml(const YAML::Node& root) { return detail::emit(root); }

/// Workflow output path relative to the repository root.
inline std::string workflow_path(Provider p) {
  return p == Provider::gitlab ? ".gitlab-ci.yml" : ".github/workflows/hog.yml";
}

inline std::string emit_workflow(const CiConfig& cfg) {
  if (auto diags = validate_ci_config(cfg); !diags.empty()) {
    throw Error(ErrorCode::InvalidConfig, text::join(diags, "; "));
  }
  switch (cfg.provider) {
    case Provider::gitlab: return detail::emit_gitlab(cfg);
    case Provider::github: return detail::emit_github(cfg);
  }
  throw Error(ErrorCode::UnsupportedProvider, "unknown CI provider");
}

/// Job id a plan job carries in the emitted workflow of `provider`.
inline std::string workflow_job_id(const Job& job, Provider provider) {
  return provider == Provider::github ? detail::github_job_id(job) : job.name;
}

}  // namespace hog::ci
