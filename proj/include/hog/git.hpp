#pragma once

// Reads repository history through the git command line.

#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hog/error.hpp"
#include "hog/text.hpp"
#include "hog/versioner.hpp"

extern char** environ;

namespace hog::git {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs `argv` (looked up on PATH) without a shell and captures both streams.
inline ProcessResult run_process(const std::vector<std::string>& argv) {
  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0) throw Error(ErrorCode::IoError, std::strerror(errno));
  if (pipe(err_pipe) != 0) {
    close(out_pipe[0]);
    close(out_pipe[1]);
    throw Error(ErrorCode::IoError, std::strerror(errno));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
  posix_spawn_file_actions_addclose(&actions, err_pipe[0]);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe[1], STDERR_FILENO);
  posix_spawn_file_actions_addclose(&actions, out_pipe[1]);
  posix_spawn_file_actions_addclose(&actions, err_pipe[1]);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(out_pipe[1]);
  close(err_pipe[1]);
  if (rc != 0) {
    close(out_pipe[0]);
    close(err_pipe[0]);
    throw Error(ErrorCode::GitError, "cannot run " + argv.front() + ": " + std::strerror(rc));
  }

  ProcessResult result;
  std::array<pollfd, 2> fds{{{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}}};
  std::array<std::string*, 2> sinks{&result.out, &result.err};
  int open_fds = 2;
  char buf[8192];
  while (open_fds > 0) {
    if (poll(fds.data(), fds.size(), -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (std::size_t i = 0; i < fds.size(); ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      auto n = read(fds[i].fd, buf, sizeof buf);
      if (n > 0) {
        sinks[i]->append(buf, static_cast<std::size_t>(n));
      } else {
        close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      }
    }
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

/// `git -C <repo> args...`; throws GitError on a non-zero exit.
inline std::string run_git(const std::string& repo, std::vector<std::string> args) {
  args.insert(args.begin(), {"git", "-C", repo});
  auto res = run_process(args);
  if (res.exit_code != 0) {
    throw Error(ErrorCode::GitError, args[3] + " failed: " + std::string(text::trim(res.err)));
  }
  return res.out;
}

struct RepoSnapshot {
  std::string root;              // top-level working tree directory
  CommitGraph graph;
  std::optional<std::string> head;  // HEAD sha; empty for an unborn branch
  std::string branch;            // current branch, empty when detached
};

inline RepoSnapshot load_repository(const std::string& dir) {
  RepoSnapshot snap;
  snap.root = std::string(text::trim(run_git(dir, {"rev-parse", "--show-toplevel"})));

  auto head = run_process({"git", "-C", dir, "rev-parse", "--verify", "-q", "HEAD^{commit}"});
  if (head.exit_code == 0) snap.head = std::string(text::trim(head.out));
  auto branch = run_process({"git", "-C", dir, "symbolic-ref", "-q", "--short", "HEAD"});
  if (branch.exit_code == 0) snap.branch = std::string(text::trim(branch.out));
  if (!snap.head) return snap;

  auto revs = run_git(dir, {"rev-list", "--topo-order", "--reverse", "--parents", "--timestamp", "--all", "HEAD"});
  for (auto line : text::split_lines(revs)) {
    auto fields = text::split_ws(line);
    if (fields.size() < 2) continue;
    auto ts = text::parse_int64(fields[0]);
    if (!ts) throw Error(ErrorCode::GitError, "unexpected rev-list line '" + std::string(line) + "'");
    std::vector<std::string> parents;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      // Parents cut off by a shallow clone are not part of the snapshot.
      if (snap.graph.contains(fields[i])) parents.emplace_back(fields[i]);
    }
    snap.graph.add_commit(CommitRef(fields[1]), parents, *ts);
  }

  auto tags = run_git(dir, {"tag", "--list", "--format=%(refname:strip=2) %(objectname) %(*objectname)"});
  for (auto line : text::split_lines(tags)) {
    auto fields = text::split_ws(line);
    if (fields.size() < 2) continue;
    std::string target(fields.size() >= 3 ? fields[2] : fields[1]);
    if (!snap.graph.contains(target)) continue;
    snap.graph.add_tag(fields[0], target);
  }

  auto heads = run_git(dir, {"for-each-ref", "refs/heads", "--format=%(refname:strip=2) %(objectname)"});
  for (auto line : text::split_lines(heads)) {
    auto fields = text::split_ws(line);
    if (fields.size() == 2 && snap.graph.contains(fields[1])) snap.graph.set_branch(std::string(fields[0]), fields[1]);
  }
  return snap;
}

}  // namespace hog::git
