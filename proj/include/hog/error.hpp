#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hog {

enum class ErrorCode {
  SyntaxError,
  ReservedNameError,
  DuplicateKeyError,
  DuplicatePathError,
  PathEscapeError,
  NotAVersionTag,
  Overflow,
  GraphError,
  TagCollision,
  LineMismatch,
  BumpNotAllowed,
  NotAReleaseBranch,
  MalformedSha,
  UnsupportedType,
  MalformedArtifact,
  NoShaRecord,
  UnknownCommit,
  AmbiguousCommit,
  MissingEnv,
  UnsupportedVendor,
  UnsupportedProvider,
  ForgeUnreachable,
  AuthFailed,
  MissingTag,
  DuplicateRelease,
  InvalidConfig,
  GitError,
  IoError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ReservedNameError: return "ReservedNameError";
    case ErrorCode::DuplicateKeyError: return "DuplicateKeyError";
    case ErrorCode::DuplicatePathError: return "DuplicatePathError";
    case ErrorCode::PathEscapeError: return "PathEscapeError";
    case ErrorCode::NotAVersionTag: return "NotAVersionTag";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::GraphError: return "GraphError";
    case ErrorCode::TagCollision: return "TagCollision";
    case ErrorCode::LineMismatch: return "LineMismatch";
    case ErrorCode::BumpNotAllowed: return "BumpNotAllowed";
    case ErrorCode::NotAReleaseBranch: return "NotAReleaseBranch";
    case ErrorCode::MalformedSha: return "MalformedSha";
    case ErrorCode::UnsupportedType: return "UnsupportedType";
    case ErrorCode::MalformedArtifact: return "MalformedArtifact";
    case ErrorCode::NoShaRecord: return "NoShaRecord";
    case ErrorCode::UnknownCommit: return "UnknownCommit";
    case ErrorCode::AmbiguousCommit: return "AmbiguousCommit";
    case ErrorCode::MissingEnv: return "MissingEnv";
    case ErrorCode::UnsupportedVendor: return "UnsupportedVendor";
    case ErrorCode::UnsupportedProvider: return "UnsupportedProvider";
    case ErrorCode::ForgeUnreachable: return "ForgeUnreachable";
    case ErrorCode::AuthFailed: return "AuthFailed";
    case ErrorCode::MissingTag: return "MissingTag";
    case ErrorCode::DuplicateRelease: return "DuplicateRelease";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::GitError: return "GitError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

/// Every failure raised by the library. The code names the failure class;
/// what() carries "<ErrorName>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

/// Parse failures keep the 1-based line they were found on (0 when unknown).
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& reason)
      : Error(ErrorCode::SyntaxError,
              "line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hog
