#pragma once

// Command-line front end. Repository layout:
//
//   Top/<project>/hog.conf
//   Top/<project>/list/*.src|*.sim|*.con     (library defaults to file stem)
//   Projects/<project>.create.tcl             (written by `create`)

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hog/ci.hpp"
#include "hog/config.hpp"
#include "hog/error.hpp"
#include "hog/forge.hpp"
#include "hog/forge_http.hpp"
#include "hog/generics.hpp"
#include "hog/git.hpp"
#include "hog/projgen.hpp"
#include "hog/versioner.hpp"

namespace hog::cli {

namespace fs = std::filesystem;
using Env = std::map<std::string, std::string>;

struct CommandOutcome {
  int exit_code = 0;  // 0 success, 1 operation failure, 2 usage error
  std::string out;
  std::string err;
};

inline constexpr int kJsonSchema = 1;

namespace detail {

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& p, std::string_view data) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
}

inline std::vector<std::string> discover_projects(const fs::path& root) {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root / "Top", ec)) {
    if (entry.is_directory() && fs::exists(entry.path() / "hog.conf")) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

struct LoadedProject {
  ProjectConfig config;
  std::vector<SourceList> lists;
  std::string project_dir;  // repo-relative
};

inline LoadedProject load_project(const fs::path& root, const std::string& name) {
  const fs::path dir = root / "Top" / name;
  if (!fs::exists(dir / "hog.conf")) throw Error(ErrorCode::IoError, "no project '" + name + "' (missing Top/" + name + "/hog.conf)");
  LoadedProject p;
  p.config = parse_project_config(read_file(dir / "hog.conf"), name);
  p.project_dir = "Top/" + name;
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir / "list", ec)) {
    if (entry.is_regular_file() && list_kind_from_filename(entry.path().filename().string())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto kind = *list_kind_from_filename(f.filename().string());
    auto list = parse_list_file(read_file(f), kind, f.stem().string());
    list.name = f.stem().string();
    p.lists.push_back(std::move(list));
  }
  return p;
}

inline std::chrono::sys_seconds commit_time(const git::RepoSnapshot& snap) {
  return std::chrono::sys_seconds{std::chrono::seconds{snap.graph.node(*snap.head).commit_time}};
}

inline const std::string& require_head(const git::RepoSnapshot& snap) {
  if (!snap.head) throw Error(ErrorCode::GitError, "repository has no commits");
  return *snap.head;
}

inline std::vector<GenericBinding> project_bindings(const git::RepoSnapshot& snap, const ProjectConfig& cfg) {
  auto v = compute_repo_version(snap.graph, require_head(snap));
  return merge_generics(builtin_generics(v.version, v.commit, commit_time(snap)), user_bindings(cfg));
}

inline std::string version_text(const RepoVersion& v) {
  return to_string(v.version) + (v.exact ? "" : "+" + v.commit.short_sha());
}

/// Output sink that yields either human text or one JSON document.
struct Reply {
  bool json = false;
  nlohmann::json doc = nlohmann::json::object();
  std::string text;
  std::string err_note;

  void line(const std::string& s) { text += s + "\n"; }
};

}  // namespace detail

/// Runs one command. `cwd` is where the repository is looked up; `forge`,
/// when given, replaces any forge the flags would connect to.
inline CommandOutcome run(const std::vector<std::string>& argv, const Env& env, const std::string& cwd,
                          forge::Forge* forge = nullptr) {
  CLI::App app{"Git-based HDL repository manager", "hog"};
  app.require_subcommand(1);
  bool json = false;
  std::string repo_dir = cwd;
  std::string branch_override;
  app.add_flag("--json", json, "Emit one JSON document on standard output");
  app.add_option("-C,--repo", repo_dir, "Repository working tree (default: current directory)");
  app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");

  // create
  auto* create = app.add_subcommand("create", "Write the vendor project-creation script");
  std::string create_project, create_dir = "Projects";
  create->add_option("project", create_project, "Project under Top/")->required();
  create->add_option("--output-dir", create_dir, "Directory for <project>.create.tcl, relative to the repository root");

  // version
  auto* version = app.add_subcommand("version", "Print the repository version at HEAD");

  // tag
  auto* tag = app.add_subcommand("tag", "Plan or apply the next version tag");
  bool tag_plan = false, tag_apply = false;
  std::string bump_text = "patch";
  std::vector<std::string> main_names, develop_names;
  std::string release_pattern;
  auto* plan_flag = tag->add_flag("--plan", tag_plan, "Print the planned tag; changes nothing");
  auto* apply_flag = tag->add_flag("--apply", tag_apply, "Create the planned tag on the forge");
  plan_flag->excludes(apply_flag);
  tag->add_option("--bump", bump_text, "patch, minor or major")->check(CLI::IsMember({"patch", "minor", "major"}));
  tag->add_option("--branch", branch_override, "Branch name used for classification (default: current branch)");
  tag->add_option("--main-branch", main_names, "Main branch names (default main, master)");
  tag->add_option("--develop-branch", develop_names, "Develop branch names (default develop)");
  tag->add_option("--release-pattern", release_pattern, "Release branch template (default release/{M}.{m})");

  // release
  auto* release = app.add_subcommand("release", "Create a forge release for the tag at HEAD");
  std::string release_title, release_notes;
  bool release_draft = false;
  release->add_option("--title", release_title, "Release title (default: the tag)");
  release->add_option("--notes", release_notes, "Release notes text");
  release->add_flag("--draft", release_draft, "Create a draft release");

  std::string forge_kind, forge_url, forge_project;
  for (auto* sub : {tag, release}) {
    sub->add_option("--forge", forge_kind, "github or gitlab")->check(CLI::IsMember({"github", "gitlab"}));
    sub->add_option("--forge-url", forge_url, "REST API base URL");
    sub->add_option("--forge-project", forge_project, "owner/repo (github) or project path/id (gitlab)");
  }

  // ci generate
  auto* ci_cmd = app.add_subcommand("ci", "CI workflow commands");
  ci_cmd->require_subcommand(1);
  auto* ci_gen = ci_cmd->add_subcommand("generate", "Write the CI workflow file");
  std::string provider_text;
  std::vector<std::string> ci_targets, ci_runner_tags, ci_vars, ci_projects;
  bool ci_doxygen = false, ci_release = false, ci_apptainer = false;
  std::string ci_docker, ci_output;
  ci_gen->add_option("--provider", provider_text, "github or gitlab")->required();
  ci_gen->add_option("--target-branch", ci_targets, "Target branch or glob (repeatable; default main)");
  ci_gen->add_option("--project", ci_projects, "Project to build (repeatable; default all under Top/)");
  ci_gen->add_flag("--doxygen", ci_doxygen, "Add the documentation job");
  ci_gen->add_flag("--release", ci_release, "Add the release job to the post-merge pipeline");
  auto* docker_opt = ci_gen->add_option("--docker", ci_docker, "Run jobs in this Docker image");
  auto* apptainer_flag = ci_gen->add_flag("--apptainer", ci_apptainer, "Run commands through apptainer exec $HOG_APPTAINER_IMAGE");
  docker_opt->excludes(apptainer_flag);
  ci_gen->add_option("--runner-tag", ci_runner_tags, "Runner tag (repeatable)");
  ci_gen->add_option("--var", ci_vars, "Extra KEY=VALUE workflow variable (repeatable)");
  ci_gen->add_option("--output", ci_output, "Output path (default .gitlab-ci.yml or .github/workflows/hog.yml)");

  // verify / embed / check
  auto* verify = app.add_subcommand("verify", "Find the commit an artifact was built from");
  std::string artifact_path;
  verify->add_option("artifact", artifact_path, "Artifact file")->required();

  auto* embed = app.add_subcommand("embed", "Write a mock artifact carrying the project's register values");
  std::string embed_project, embed_output;
  embed->add_option("project", embed_project, "Project under Top/")->required();
  embed->add_option("--output", embed_output, "Artifact path")->required();

  auto* check = app.add_subcommand("check", "Validate project configurations and the environment");
  std::vector<std::string> check_projects;
  check->add_option("projects", check_projects, "Projects to check (default: all)");

  CommandOutcome outcome;
  detail::Reply reply;

  std::vector<const char*> cargv{"hog"};
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    outcome.out = app.help();
    return outcome;
  } catch (const CLI::CallForAllHelp& e) {
    outcome.out = app.help("", CLI::AppFormatMode::All);
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = 2;
    outcome.err = std::string("usage error: ") + e.what() + "\n";
    if (json) {
      outcome.out = nlohmann::json{{"schema", kJsonSchema}, {"ok", false}, {"error", "UsageError"}, {"message", e.what()}}.dump(2) + "\n";
    }
    return outcome;
  }
  reply.json = json;

  auto fail = [&](int code, std::string_view name, const std::string& message) {
    outcome.exit_code = code;
    outcome.err += message + "\n";
    if (json) {
      outcome.out = nlohmann::json{{"schema", kJsonSchema}, {"ok", false}, {"error", name}, {"message", message}}.dump(2) + "\n";
    } else {
      outcome.out = reply.text;
    }
    return outcome;
  };

  try {
    fs::path repo = fs::path(repo_dir).is_absolute() ? fs::path(repo_dir) : fs::path(cwd) / repo_dir;
    auto snapshot = [&] { return git::load_repository(repo.string()); };
    auto& doc = reply.doc;

    auto resolve_forge = [&](std::unique_ptr<forge::Forge>& owned) -> forge::Forge& {
      if (forge) return *forge;
      if (forge_kind.empty()) throw CLI::RequiredError("--forge");
      forge::ForgeHandle h;
      h.kind = forge_kind == "github" ? forge::ForgeHandle::Kind::github : forge::ForgeHandle::Kind::gitlab;
      h.base_url = forge_url;
      h.project = forge_project;
      owned = forge::connect(h, env);
      return *owned;
    };

    if (*create) {
      auto snap = snapshot();
      auto project = detail::load_project(snap.root, create_project);
      if (auto missing = check_environment(project.config.vendor, env); !missing.empty()) {
        throw Error(ErrorCode::MissingEnv, missing.front().variable + " must be set: " + missing.front().purpose);
      }
      GenerationInput input{project.config, project.lists, detail::project_bindings(snap, project.config), project.project_dir};
      auto script = generate_creation_script(input);
      auto rel = (fs::path(create_dir) / script_filename(project.config)).generic_string();
      detail::write_file(fs::path(snap.root) / rel, script);
      doc["script"] = rel;
      reply.line(rel);
    } else if (*version) {
      auto snap = snapshot();
      auto v = compute_repo_version(snap.graph, detail::require_head(snap));
      doc["version"] = to_string(v.version);
      doc["exact"] = v.exact;
      doc["sha"] = v.commit.sha();
      doc["sha32"] = v.commit.short_sha();
      reply.line(detail::version_text(v));
    } else if (*tag) {
      if (!tag_plan && !tag_apply) throw CLI::RequiredError("--plan or --apply");
      auto snap = snapshot();
      const auto& head = detail::require_head(snap);
      ReleaseNaming naming;
      if (!main_names.empty()) naming.main_names = main_names;
      if (!develop_names.empty()) naming.develop_names = develop_names;
      if (!release_pattern.empty()) naming.release_pattern = release_pattern;
      std::string branch = branch_override.empty() ? snap.branch : branch_override;
      // Detached checkouts in CI: fall back to the runner's branch variables.
      for (const char* var : {"CI_COMMIT_BRANCH", "GITHUB_REF_NAME"}) {
        if (!branch.empty()) break;
        if (auto it = env.find(var); it != env.end()) branch = it->second;
      }
      auto planned = plan_tag(snap.graph, head, classify_branch(branch, naming), parse_bump(bump_text));
      doc["tag"] = planned.str();
      doc["branch"] = branch;
      doc["commit"] = head;
      doc["applied"] = false;
      if (tag_apply) {
        std::unique_ptr<forge::Forge> owned;
        auto ack = resolve_forge(owned).create_tag(planned, CommitRef(head));
        doc["applied"] = true;
        reply.err_note = ack.detail;
      }
      reply.line(planned.str());
    } else if (*release) {
      auto snap = snapshot();
      auto v = compute_repo_version(snap.graph, detail::require_head(snap));
      if (!v.exact) throw Error(ErrorCode::MissingTag, "HEAD carries no version tag");
      forge::Release rel{TagName{v.version}, release_title.empty() ? TagName{v.version}.str() : release_title,
                         release_notes, release_draft};
      std::unique_ptr<forge::Forge> owned;
      auto ack = resolve_forge(owned).create_release(rel);
      doc["release"] = rel.tag.str();
      reply.line(ack.detail);
    } else if (*ci_gen) {
      ci::CiConfig cfg;
      cfg.provider = ci::parse_provider(provider_text);
      cfg.projects = ci_projects.empty() ? detail::discover_projects(repo) : ci_projects;
      if (!ci_targets.empty()) cfg.target_branches = ci_targets;
      cfg.enable_doxygen = ci_doxygen;
      cfg.enable_release = ci_release;
      if (!ci_docker.empty()) cfg.container = ci::Container::docker(ci_docker);
      if (ci_apptainer) cfg.container = ci::Container::apptainer();
      cfg.runner_tags = ci_runner_tags;
      for (const auto& kv : ci_vars) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--var", "expected KEY=VALUE, got '" + kv + "'");
        cfg.variables.insert_or_assign(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (auto diags = ci::validate_ci_config(cfg); !diags.empty()) {
        throw Error(ErrorCode::InvalidConfig, text::join(diags, "; "));
      }
      auto yaml = ci::emit_workflow(cfg);
      auto rel = ci_output.empty() ? ci::workflow_path(cfg.provider) : ci_output;
      fs::path out = fs::path(rel).is_absolute() ? fs::path(rel) : repo / rel;
      detail::write_file(out, yaml);
      doc["workflow"] = rel;
      doc["provider"] = std::string(ci::to_string(cfg.provider));
      reply.line(rel);
    } else if (*verify) {
      auto snap = snapshot();
      fs::path p = fs::path(artifact_path).is_absolute() ? fs::path(artifact_path) : fs::path(cwd) / artifact_path;
      auto bytes = detail::read_file(p);
      ArtifactBlob blob{std::vector<std::uint8_t>(bytes.begin(), bytes.end())};
      auto commit = verify_traceability(blob, snap.graph);
      doc["commit"] = commit.sha();
      doc["sha32"] = commit.short_sha();
      reply.line(commit.sha());
    } else if (*embed) {
      auto snap = snapshot();
      auto project = detail::load_project(snap.root, embed_project);
      std::vector<GenericBinding> registers;
      for (auto& b : detail::project_bindings(snap, project.config)) {
        if (b.value.kind() != TypedValue::Kind::string) registers.push_back(std::move(b));
      }
      auto blob = embed_into_artifact(registers);
      fs::path p = fs::path(embed_output).is_absolute() ? fs::path(embed_output) : fs::path(cwd) / embed_output;
      detail::write_file(p, std::string_view(reinterpret_cast<const char*>(blob.bytes.data()), blob.bytes.size()));
      doc["artifact"] = p.generic_string();
      doc["records"] = registers.size();
      reply.line(embed_output);
    } else if (*check) {
      auto snap = snapshot();
      auto names = check_projects.empty() ? detail::discover_projects(snap.root) : check_projects;
      if (names.empty()) throw Error(ErrorCode::InvalidConfig, "no projects found under Top/");
      bool ok = true;
      auto& results = doc["projects"] = nlohmann::json::array();
      for (const auto& name : names) {
        nlohmann::json entry{{"project", name}};
        std::vector<std::string> problems;
        try {
          auto project = detail::load_project(snap.root, name);
          problems = validate_config(project.config, project.lists);
          for (const auto& req : check_environment(project.config.vendor, env)) {
            problems.push_back("environment variable " + req.variable + " is not set (" + req.purpose + ")");
          }
        } catch (const Error& e) {
          problems.push_back(e.what());
        }
        entry["diagnostics"] = problems;
        results.push_back(entry);
        if (problems.empty()) {
          reply.line(name + ": ok");
        } else {
          ok = false;
          for (const auto& p : problems) reply.line(name + ": " + p);
        }
      }
      if (!ok) {
        outcome.exit_code = 1;
        if (json) {
          doc["schema"] = kJsonSchema;
          doc["ok"] = false;
          doc["command"] = "check";
          outcome.out = doc.dump(2) + "\n";
        } else {
          outcome.out = reply.text;
        }
        outcome.err = "check failed\n";
        return outcome;
      }
    }

    if (json) {
      doc["schema"] = kJsonSchema;
      doc["ok"] = true;
      doc["command"] = app.get_subcommands().front()->get_name();
      outcome.out = doc.dump(2) + "\n";
    } else {
      outcome.out = reply.text;
    }
    if (!reply.err_note.empty()) outcome.err += reply.err_note + "\n";
    return outcome;
  } catch (const CLI::Error& e) {
    return fail(2, "UsageError", std::string("usage error: ") + e.what());
  } catch (const Error& e) {
    return fail(1, e.name(), e.what());
  } catch (const std::exception& e) {
    return fail(1, "Error", e.what());
  }
}

/// Current process environment as a map.
inline Env process_environment() {
  Env env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view kv(*e);
    auto eq = kv.find('=');
    if (eq != std::string_view::npos) env.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  return env;
}

}  // namespace hog::cli
