// Acceptance suite: one PASS/FAIL line per criterion, each under its time
// limit. Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hog/ci.hpp"
#include "hog/generics.hpp"
#include "hog/projgen.hpp"
#include "support/fixtures.hpp"

#ifndef HOG_CLI_PATH
#error "HOG_CLI_PATH must name the hog executable"
#endif

using namespace hog;
namespace t = hog::fixture;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure {
  std::string why;
};

void require(bool cond, const std::string& why) {
  if (!cond) throw Failure{why};
}

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<std::string()> body;  // returns a short summary
};

bool run_criterion(const Criterion& c) {
  auto start = Clock::now();
  std::string summary, failure;
  try {
    summary = c.body();
  } catch (const Failure& f) {
    failure = f.why;
  } catch (const std::exception& e) {
    failure = std::string("unexpected exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (failure.empty() && secs >= c.limit_s) failure = "exceeded time limit";
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3f s (limit %.0f s)", secs, c.limit_s);
  std::cout << (failure.empty() ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": "
            << (failure.empty() ? summary : failure) << ", " << timing << std::endl;
  return failure.empty();
}

// ---------------------------------------------------------------------------

GenerationInput random_generation_input(t::Rng& rng) {
  GenerationInput in;
  in.config = t::random_project_config(rng);
  std::set<std::string> used;
  in.lists.push_back(t::random_source_list(rng, ListKind::src, used));
  if (t::coin(rng)) in.lists.push_back(t::random_source_list(rng, ListKind::sim, used));
  if (t::coin(rng)) in.lists.push_back(t::random_source_list(rng, ListKind::con, used));
  in.project_dir = "Top/" + in.config.project_name;
  std::vector<GenericBinding> user;
  for (auto& b : user_bindings(in.config)) {
    if (in.config.vendor != Vendor::libero || b.value.kind() != TypedValue::Kind::string) user.push_back(b);
  }
  VersionTriple v{t::pick(rng, 0, 255), t::pick(rng, 0, 255), t::pick(rng, 0, 65535)};
  std::chrono::sys_seconds when{std::chrono::seconds{static_cast<std::int64_t>(t::pick(rng, 0, 4102444799))}};
  in.bindings = merge_generics(builtin_generics(v, CommitRef(t::random_sha(rng)), when), user);
  return in;
}

std::string criterion_reproducibility() {
  t::Rng rng(1001);
  for (int i = 0; i < 100; ++i) {
    auto in = random_generation_input(rng);
    auto a = generate_creation_script(in);
    auto copy = in;
    auto b = generate_creation_script(copy);
    require(a == b, "fixture " + std::to_string(i) + " produced different scripts");
  }
  return "100 fixtures byte-identical";
}

std::string criterion_round_trip() {
  t::Rng rng(1002);
  for (int i = 0; i < 200; ++i) {
    auto c = t::random_project_config(rng);
    auto text = serialize_project_config(c);
    auto back = parse_project_config(text);
    require(back == c, "config " + std::to_string(i) + " changed through parse(serialize(c))");
    require(serialize_project_config(back) == text, "config " + std::to_string(i) + " serialize not idempotent");
  }
  return "200 configs";
}

// The oracle corpus shared by criteria 3 and 4.
std::vector<t::GraphSpec> oracle_corpus() {
  t::Rng rng(1003);
  std::vector<t::GraphSpec> corpus;
  for (int i = 0; i < 500; ++i) corpus.push_back(t::random_graph_spec(rng, 20, 5));
  return corpus;
}

std::string criterion_version_oracle() {
  std::size_t heads = 0;
  for (const auto& spec : oracle_corpus()) {
    require(spec.shas.size() <= 20 && spec.tags.size() <= 5, "corpus graph exceeds size bounds");
    auto g = t::build_graph(spec);
    for (std::size_t h = 0; h < spec.shas.size(); ++h, ++heads) {
      auto [v, exact] = t::oracle_repo_version(spec, h);
      auto got = compute_repo_version(g, spec.shas[h]);
      require(got.version == v && got.exact == exact && got.commit.sha() == spec.shas[h],
              "mismatch at head " + spec.shas[h] + ": got " + to_string(got.version) + " want " + to_string(v));
    }
  }
  return "500 graphs, " + std::to_string(heads) + " heads match the oracle";
}

std::string criterion_patch_rule() {
  std::size_t planned = 0, collisions = 0;
  for (const auto& spec : oracle_corpus()) {
    auto g = t::build_graph(spec);
    for (std::size_t h = 0; h < spec.shas.size(); ++h) {
      auto base = t::oracle_repo_version(spec, h).first;
      VersionTriple want{base.major, base.minor, base.patch + 1};
      bool exists = std::any_of(spec.tags.begin(), spec.tags.end(), [&](const auto& tag) { return tag.first == want; });
      try {
        auto got = plan_tag(g, spec.shas[h], BranchClass::main(), Bump::patch);
        require(!exists, "planned " + got.str() + " although it already exists");
        require(got.version == want, "planned " + got.str() + " for base " + to_string(base));
        ++planned;
      } catch (const Error& e) {
        require(e.code() == ErrorCode::TagCollision && exists, std::string("unexpected error ") + e.what());
        ++collisions;
      }
    }
  }
  return std::to_string(planned) + " heads planned p+1, " + std::to_string(collisions) +
         " correctly reported TagCollision";
}

// Main history with lines opened by minor/major bumps and occasional patch
// tags; release branches fork from the last tag of an older line and carry
// earlier hotfix tags.
struct HotfixScenario {
  CommitGraph graph;
  std::vector<std::string> release_branches;
  int next_sha = 0;

  std::string fresh_sha(t::Rng& rng) {
    auto s = t::random_sha(rng);
    s.replace(0, 8, text::hex(static_cast<std::uint32_t>(next_sha++), 8, false));
    return s;
  }
};

HotfixScenario make_hotfix_scenario(t::Rng& rng) {
  HotfixScenario s;
  auto& g = s.graph;
  std::string head = s.fresh_sha(rng);
  g.add_commit(CommitRef(head));
  VersionTriple v{0, 1, 0};
  g.add_tag(TagName{v}.str(), head);
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::string> last_on_line{{{0, 1}, head}};
  for (std::size_t i = t::pick(rng, 2, 12); i > 0; --i) {
    auto parent = head;
    head = s.fresh_sha(rng);
    g.add_commit(CommitRef(head), {parent});
    if (!t::coin(rng, 0.6)) continue;
    auto r = t::pick(rng, 0, 9);
    v = next_version(v, r < 3 ? Bump::patch : (r < 9 ? Bump::minor : Bump::major));
    g.add_tag(TagName{v}.str(), head);
    last_on_line[{v.major, v.minor}] = head;
  }
  g.set_branch("main", head);

  for (const auto& [line, fork] : last_on_line) {
    if (line == std::make_pair(v.major, v.minor) || !t::coin(rng, 0.7)) continue;
    std::string name = "release/" + std::to_string(line.first) + "." + std::to_string(line.second);
    auto tip = fork;
    for (std::size_t k = t::pick(rng, 1, 4); k > 0; --k) {
      auto child = s.fresh_sha(rng);
      g.add_commit(CommitRef(child), {tip});
      tip = child;
      if (t::coin(rng, 0.3)) {
        auto base = compute_repo_version(g, tip).version;
        g.add_tag(TagName{next_version(base, Bump::patch)}.str(), tip);
      }
    }
    g.set_branch(name, tip);
    s.release_branches.push_back(name);
  }
  return s;
}

std::string criterion_hotfix_independence() {
  t::Rng rng(1005);
  std::size_t hotfixes = 0, graphs_with_releases = 0;
  const ReleaseNaming naming;
  for (int i = 0; i < 200; ++i) {
    auto s = make_hotfix_scenario(rng);
    graphs_with_releases += !s.release_branches.empty();
    for (int round = 0; round < 3; ++round) {
      for (const auto& branch : s.release_branches) {
        auto main_before = plan_tag(s.graph, "main", naming, Bump::patch);
        auto tip = s.graph.node(*s.graph.branch_head(branch)).ref.sha();
        auto line = classify_branch(branch, naming);
        auto fix = plan_tag(s.graph, branch, naming, Bump::patch);
        require(fix.version.major == line.line_major && fix.version.minor == line.line_minor,
                branch + " planned " + fix.str() + " off its line");
        // A new hotfix commit on the branch, tagged with the planned version.
        auto child = s.fresh_sha(rng);
        s.graph.add_commit(CommitRef(child), {tip});
        s.graph.set_branch(branch, child);
        fix = plan_tag(s.graph, branch, naming, Bump::patch);
        s.graph.add_tag(fix.str(), child);
        ++hotfixes;
        auto main_after = plan_tag(s.graph, "main", naming, Bump::patch);
        require(main_after == main_before,
                "main plan changed from " + main_before.str() + " to " + main_after.str() + " after " + fix.str());
      }
    }
  }
  require(graphs_with_releases >= 100, "corpus too thin: only " + std::to_string(graphs_with_releases) +
                                           " graphs have release branches");
  return "200 graphs (" + std::to_string(graphs_with_releases) + " with release branches), " +
         std::to_string(hotfixes) + " hotfix tags applied, main plans unchanged";
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string criterion_traceability() {
  t::Rng rng(1006);
  t::TempDir dir;
  std::size_t commits = 0;
  for (int i = 0; i < 100; ++i) {
    auto spec = t::random_graph_spec(rng, 20, 5, true);
    auto g = t::build_graph(spec);
    for (const auto& sha : spec.shas) {
      const auto& node = g.node(sha);
      auto v = compute_repo_version(g, sha).version;
      auto blob = embed_into_artifact(
          builtin_generics(v, node.ref, std::chrono::sys_seconds{std::chrono::seconds{node.commit_time}}));
      require(verify_traceability(blob, g).sha() == sha, "in-memory round trip lost " + sha);

      auto original = dir.path() / "build.hogb";
      auto renamed = dir.path() / ("firmware_" + std::to_string(commits) + ".bit");
      t::write_text(original, std::string(blob.bytes.begin(), blob.bytes.end()));
      std::filesystem::rename(original, renamed);
      ArtifactBlob from_disk{read_bytes(renamed)};
      require(from_disk.bytes == blob.bytes, "renamed file differs from the blob");
      require(verify_traceability(from_disk, g).sha() == sha, "renamed artifact did not verify to " + sha);
      std::filesystem::remove(renamed);
      ++commits;
    }
  }
  return std::to_string(commits) + " commits in 100 graphs recovered, renamed files verify identically";
}

std::string criterion_ci_topology() {
  using namespace hog::ci;
  const std::vector<std::vector<std::string>> target_sets{
      {"main"}, {"main", "develop"}, {"master", "release/*"}, {"main", "develop", "release/**", "hotfix/v?"}};
  const std::vector<Container> containers{Container::none(), Container::docker("vendor/tools:1.0"),
                                          Container::apptainer()};
  const std::vector<std::string> branches{"main", "master", "develop", "release/1.2", "release/a/b", "hotfix/v1",
                                          "feature/x", "scratch"};
  std::size_t workflows = 0, plans = 0;
  for (auto provider : {Provider::gitlab, Provider::github}) {
    for (const auto& container : containers) {
      for (int toggles = 0; toggles < 4; ++toggles) {
        for (const auto& targets : target_sets) {
          for (int runners = 0; runners < 2; ++runners) {
            CiConfig cfg;
            cfg.provider = provider;
            cfg.projects = {"fw_a", "fw-b"};
            cfg.target_branches = targets;
            cfg.enable_doxygen = toggles & 1;
            cfg.enable_release = toggles & 2;
            cfg.container = container;
            if (runners) cfg.runner_tags = {"self-hosted", "vivado"};
            const auto text = emit_workflow(cfg);
            YAML::Node y;
            try {
              y = YAML::Load(text);
            } catch (const YAML::Exception& e) {
              throw Failure{std::string("emitted workflow is not YAML: ") + e.what()};
            }
            require(y.IsMap(), "workflow root is not a mapping");
            require(emit_yaml(y) == text, "workflow does not re-emit byte-identically");
            for (const auto& b : targets) {
              if (provider == Provider::github) {
                for (const char* trig : {"pull_request", "push"}) {
                  bool found = false;
                  for (const auto& n : y["on"][trig]["branches"]) found = found || n.as<std::string>() == b;
                  require(found, std::string("github ") + trig + " trigger lacks " + b);
                }
              } else {
                auto expect = is_glob(b) ? glob_to_gitlab_regex(b) : "\"" + b + "\"";
                for (const char* job : {"generate", "tag"}) {
                  auto rule = y[job]["rules"][0]["if"].as<std::string>();
                  require(rule.find(expect) != std::string::npos, std::string("gitlab rule of ") + job + " lacks " + b);
                }
              }
            }
            auto jobs = provider == Provider::github ? y["jobs"] : y;
            require(bool(jobs["doc"]) == cfg.enable_doxygen, "doc job presence does not follow the toggle");
            require(bool(jobs["release"]) == cfg.enable_release, "release job presence does not follow the toggle");
            if (container.kind == Container::Kind::docker) {
              auto image = provider == Provider::github ? jobs["build_fw_a"]["container"]["image"] : jobs["build:fw_a"]["image"];
              require(image && image.as<std::string>() == "vendor/tools:1.0", "docker image missing on build job");
            }
            ++workflows;

            for (const auto& b : branches) {
              for (const auto& ev : {ForgeEvent::pr_opened("feature/y", b), ForgeEvent::pr_merged(b), ForgeEvent::push(b)}) {
                auto plan = simulate_pipeline(cfg, ev);
                ++plans;
                require(!(plan.has_stage(Stage::simulate) && plan.has_stage(Stage::tag)),
                        "plan mixes simulate and tag jobs for branch " + b);
                require(is_target_branch(cfg, b) || plan.empty(), "non-target branch " + b + " produced jobs");
                if (is_target_branch(cfg, b) && ev.kind == ForgeEvent::Kind::pr_opened) {
                  require(plan.has_stage(Stage::simulate) && !plan.has_stage(Stage::tag), "PR plan shape wrong for " + b);
                }
                if (is_target_branch(cfg, b) && ev.kind != ForgeEvent::Kind::pr_opened) {
                  require(plan.has_stage(Stage::tag) && plan.has_stage(Stage::release) == cfg.enable_release,
                          "merge plan shape wrong for " + b);
                }
              }
            }
          }
        }
      }
    }
  }
  return std::to_string(workflows) + " workflows valid, " + std::to_string(plans) + " plans never mix stages";
}

std::string criterion_packing() {
  const std::uint64_t patches[] = {0, 1, 2, 254, 255, 256, 32767, 32768, 65533, 65534, 65535};
  std::optional<std::uint32_t> prev;
  std::size_t checked = 0;
  for (std::uint64_t M = 0; M <= 255; ++M) {
    for (std::uint64_t m = 0; m <= 255; ++m) {
      for (auto p : patches) {
        auto packed = pack_version({M, m, p});
        require(packed == M * 16777216 + m * 65536 + p, "pack layout wrong for " + to_string({M, m, p}));
        require(!prev || packed > *prev, "packing not strictly increasing at " + to_string({M, m, p}));
        prev = packed;
        ++checked;
      }
    }
  }
  t::Rng rng(1008);
  for (int i = 0; i < 100000; ++i) {
    VersionTriple a{t::pick(rng, 0, 255), t::pick(rng, 0, 255), t::pick(rng, 0, 65535)};
    VersionTriple b{t::pick(rng, 0, 255), t::pick(rng, 0, 255), t::pick(rng, 0, 65535)};
    require((a < b) == (pack_version(a) < pack_version(b)), "order not preserved for sampled pair");
    require((a == b) == (pack_version(a) == pack_version(b)), "injectivity violated for sampled pair");
  }
  for (VersionTriple over : {VersionTriple{256, 0, 0}, VersionTriple{0, 256, 0}, VersionTriple{0, 0, 65536}}) {
    try {
      pack_version(over);
      throw Failure{"no Overflow for " + to_string(over)};
    } catch (const Error& e) {
      require(e.code() == ErrorCode::Overflow, "wrong error for out-of-range version");
    }
  }
  for (int i = 0; i < 1000; ++i) {
    auto a = t::random_sha(rng);
    auto b = a.substr(0, 8) + t::random_sha(rng).substr(8);
    require(sha32_of(a) == sha32_of(b), "sha32 prefix property violated for " + a);
    require(sha32_of(a) == std::stoul(a.substr(0, 8), nullptr, 16), "sha32 value wrong for " + a);
  }
  return std::to_string(checked) + " boundary triples strictly ordered, 100000 sampled pairs, 1000 SHAs";
}

std::string run_hog(const std::filesystem::path& repo, std::vector<std::string> args, int expect_exit = 0) {
  args.insert(args.begin(), {HOG_CLI_PATH, "-C", repo.string()});
  auto res = git::run_process(args);
  require(res.exit_code == expect_exit, "hog " + args[3] + " exited " + std::to_string(res.exit_code) + ": " + res.err);
  return res.out;
}

std::string criterion_end_to_end() {
  t::TempDir dir;
  const auto& repo = dir.path();
  t::init_demo_repo(repo);
  t::commit_all(repo, "initial", "2023-01-15T12:34:56Z");
  t::git_in(repo, {"tag", "v0.1.0"});
  t::write_text(repo / "src/util.vhd", "-- util, fixed\n");
  t::commit_all(repo, "fix", "2023-01-16T09:00:00Z");
  auto head = t::git_in(repo, {"rev-parse", "HEAD"});

  auto version = run_hog(repo, {"version"});
  require(version == "0.1.0+" + head.substr(0, 8) + "\n", "version printed '" + version + "'");
  auto plan = run_hog(repo, {"tag", "--plan"});
  require(plan == "v0.1.1\n", "tag --plan printed '" + plan + "'");
  require(t::git_in(repo, {"tag", "--list"}) == "v0.1.0", "tag --plan modified the repository tags");

  for (auto provider : {"github", "gitlab"}) {
    auto path = run_hog(repo, {"ci", "generate", "--provider", provider});
    path = std::string(text::trim(path));
    try {
      auto y = YAML::LoadFile((repo / path).string());
      require(y.IsMap(), std::string(provider) + " workflow is not a mapping");
    } catch (const YAML::Exception& e) {
      throw Failure{std::string(provider) + " workflow does not parse: " + e.what()};
    }
  }
  run_hog(repo, {"frobnicate"}, 2);
  return "version " + std::string(text::trim(version)) + ", plan v0.1.1, github and gitlab workflows parse";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "reproducibility", 5, criterion_reproducibility},
      {2, "parser round trip", 5, criterion_round_trip},
      {3, "version oracle", 10, criterion_version_oracle},
      {4, "patch-increment rule", 10, criterion_patch_rule},
      {5, "hotfix independence", 10, criterion_hotfix_independence},
      {6, "traceability round trip", 5, criterion_traceability},
      {7, "CI topology", 5, criterion_ci_topology},
      {8, "packing checks", 5, criterion_packing},
      {9, "end-to-end", 30, criterion_end_to_end},
  };
  int failed = 0;
  for (const auto& c : criteria) failed += run_criterion(c) ? 0 : 1;
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
