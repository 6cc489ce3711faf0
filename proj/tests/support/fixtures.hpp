#pragma once

// Random fixtures and independent oracles shared by the unit and acceptance
// suites.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hog/config.hpp"
#include "hog/generics.hpp"
#include "hog/git.hpp"
#include "hog/versioner.hpp"

namespace hog::fixture {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::string random_sha(Rng& rng) {
  static const char* digits = "0123456789abcdef";
  std::string s(40, '0');
  for (auto& c : s) c = digits[pick(rng, 0, 15)];
  return s;
}

inline std::string random_identifier(Rng& rng, std::size_t max_len = 10) {
  static const std::string first = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  static const std::string rest = first + "0123456789_";
  std::string s(1, first[pick(rng, 0, first.size() - 1)]);
  for (std::size_t i = pick(rng, 0, max_len - 1); i > 0; --i) s += rest[pick(rng, 0, rest.size() - 1)];
  return s;
}

/// A value text with no leading/trailing whitespace and no newline.
inline std::string random_value_text(Rng& rng) {
  static const std::string chars = "abcXYZ019_-./:=#[] {}\"'$";
  std::string s;
  for (std::size_t i = pick(rng, 1, 12); i > 0; --i) s += chars[pick(rng, 0, chars.size() - 1)];
  while (!s.empty() && s.back() == ' ') s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  return s.empty() ? "v" : s;
}

inline TypedValue random_typed_value(Rng& rng, bool allow_string = true) {
  switch (pick(rng, 0, allow_string ? 3 : 2)) {
    case 0: return TypedValue::integer(static_cast<std::int64_t>(rng()) >> pick(rng, 0, 62));
    case 1: return TypedValue::bitvector32(static_cast<std::uint32_t>(rng()));
    case 2: return TypedValue::boolean(coin(rng));
    default: return TypedValue::string(random_value_text(rng));
  }
}

/// A well-formed ProjectConfig exercising every grammar feature.
inline ProjectConfig random_project_config(Rng& rng) {
  ProjectConfig c;
  c.project_name = random_identifier(rng) + (coin(rng) ? "-fw.v1" : "");
  c.vendor = static_cast<Vendor>(pick(rng, 0, 2));
  c.top_module = random_identifier(rng);
  std::set<std::string> folded;
  for (std::size_t i = pick(rng, 0, 6); i > 0; --i) {
    auto name = random_identifier(rng);
    if (is_builtin_generic_name(name) || !folded.insert(text::to_lower(name)).second) continue;
    c.user_generics.insert(name, random_typed_value(rng));
  }
  static const char* sections[] = {"main", "synth_1", "impl_1", "parameters", "zz_custom", "SYNTHESIZE"};
  for (std::size_t i = pick(rng, 0, 4); i > 0; --i) {
    std::string sec = sections[pick(rng, 0, 5)];
    auto& props = c.properties[sec];
    for (std::size_t k = pick(rng, 1, 4); k > 0; --k) {
      auto key = text::to_upper(random_identifier(rng)) + (coin(rng) ? ".ARGS.X" : "");
      if (sec == "main" && (key == "name" || key == "vendor" || key == "top")) continue;
      props.insert(key, random_value_text(rng));
    }
  }
  if (coin(rng)) c.post_creation_hook = coin(rng) ? "post-creation.tcl" : "hooks/post-creation.tcl";
  return c;
}

inline SourceList random_source_list(Rng& rng, ListKind kind, std::set<std::string>& used_paths) {
  static const char* dirs[] = {"src", "rtl/core", "sim", "con", "ip/fifo"};
  static const char* exts_src[] = {".vhd", ".v", ".sv", ".vhdl"};
  static const char* exts_con[] = {".xdc", ".sdc", ".pdc", ".tcl"};
  SourceList list;
  list.kind = kind;
  list.name = random_identifier(rng, 6);
  for (std::size_t i = pick(rng, 1, 8); i > 0; --i) {
    ListEntry e;
    e.path = std::string(dirs[pick(rng, 0, 4)]) + "/" + random_identifier(rng) +
             (kind == ListKind::con ? exts_con[pick(rng, 0, 3)] : exts_src[pick(rng, 0, 3)]);
    if (!used_paths.insert(e.path).second) continue;
    e.library = coin(rng) ? "work" : random_identifier(rng, 6);
    if (coin(rng, 0.3)) e.properties.insert("file_type", "VHDL_2008");
    list.entries.push_back(std::move(e));
  }
  return list;
}

// ---------------------------------------------------------------------------
// Commit graphs

struct GraphSpec {
  std::vector<std::string> shas;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::pair<VersionTriple, std::size_t>> tags;
};

inline CommitGraph build_graph(const GraphSpec& spec) {
  CommitGraph g;
  for (std::size_t i = 0; i < spec.shas.size(); ++i) {
    std::vector<std::string> ps;
    for (auto p : spec.parents[i]) ps.push_back(spec.shas[p]);
    g.add_commit(CommitRef(spec.shas[i]), ps, 1673786096 + static_cast<std::int64_t>(i) * 3600);
  }
  for (const auto& [v, node] : spec.tags) g.add_tag(TagName{v}.str(), spec.shas[node]);
  return g;
}

/// Random DAG: node i draws 0-2 parents among nodes < i (node 0 is a root).
/// Tag versions come from a small range so ties and collisions occur.
inline GraphSpec random_graph_spec(Rng& rng, std::size_t max_nodes = 20, std::size_t max_tags = 5,
                                   bool unique_sha32 = false) {
  GraphSpec s;
  const std::size_t n = pick(rng, 1, max_nodes);
  std::set<std::uint32_t> prefixes;
  for (std::size_t i = 0; i < n; ++i) {
    std::string sha;
    do {
      sha = random_sha(rng);
    } while (unique_sha32 && !prefixes.insert(sha32_of(sha)).second);
    s.shas.push_back(sha);
    std::vector<std::size_t> ps;
    if (i > 0) {
      std::size_t k = coin(rng, 0.1) ? 0 : (coin(rng, 0.25) ? 2 : 1);
      for (std::size_t j = 0; j < k; ++j) {
        auto p = pick(rng, 0, i - 1);
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
      }
    }
    s.parents.push_back(ps);
  }
  std::set<VersionTriple> used;
  for (std::size_t t = pick(rng, 0, max_tags); t > 0; --t) {
    VersionTriple v{pick(rng, 0, 2), pick(rng, 0, 3), pick(rng, 0, 6)};
    if (!used.insert(v).second) continue;
    s.tags.emplace_back(v, pick(rng, 0, n - 1));
  }
  return s;
}

/// Brute-force oracle: full transitive closure by Warshall's algorithm, then
/// the lexicographic maximum over every tag whose node `head` reaches.
inline std::pair<VersionTriple, bool> oracle_repo_version(const GraphSpec& s, std::size_t head) {
  const std::size_t n = s.shas.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (auto p : s.parents[i]) reach[i][p] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;

  std::optional<VersionTriple> best;
  bool exact = false;
  for (const auto& [v, node] : s.tags) {
    if (!reach[head][node]) continue;
    if (!best || v > *best) best = v;
  }
  if (best) {
    for (const auto& [v, node] : s.tags) exact = exact || (node == head && v == *best);
  }
  return {best.value_or(VersionTriple{}), exact};
}

// ---------------------------------------------------------------------------
// Scratch git repositories

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "hog-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

/// Git with fixed identity and dates so commit shas are reproducible.
inline std::string git_in(const std::filesystem::path& repo, std::vector<std::string> args) {
  std::vector<std::string> full{"git", "-C", repo.string(), "-c", "user.name=Hog Test", "-c", "user.email=hog@example.com",
                                "-c", "commit.gpgsign=false", "-c", "tag.gpgsign=false"};
  full.insert(full.end(), args.begin(), args.end());
  auto res = git::run_process(full);
  if (res.exit_code != 0) throw std::runtime_error("git failed: " + res.err);
  return std::string(text::trim(res.out));
}

inline void commit_all(const std::filesystem::path& repo, const std::string& message, const std::string& date) {
  setenv("GIT_AUTHOR_DATE", date.c_str(), 1);
  setenv("GIT_COMMITTER_DATE", date.c_str(), 1);
  git_in(repo, {"add", "-A"});
  git_in(repo, {"commit", "-q", "--allow-empty", "-m", message});
}

/// Initializes a repository on `main` holding one vivado project "demo".
inline void init_demo_repo(const std::filesystem::path& repo, const std::string& vendor = "vivado") {
  git_in(repo, {"init", "-q", "-b", "main"});
  write_text(repo / "Top/demo/hog.conf",
             "[main]\nvendor=" + vendor + "\ntop=demo_top\n\n[generics]\nWIDTH=int:8\nUSE_GTX=bool:true\n");
  write_text(repo / "Top/demo/list/work.src", "src/demo_top.vhd\nsrc/util.vhd lib=common\n");
  write_text(repo / "Top/demo/list/tb.sim", "sim/tb.vhd\n");
  write_text(repo / "Top/demo/list/pins.con", "con/pins.xdc\n");
  write_text(repo / "src/demo_top.vhd", "-- top\n");
  write_text(repo / "src/util.vhd", "-- util\n");
}

}  // namespace hog::fixture
