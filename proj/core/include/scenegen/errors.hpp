#pragma once

#include <stdexcept>
#include <string>

namespace scenegen {

/// Broad failure classes; the CLI maps each to an exit code.
enum class ErrorKind {
  kInvalidInput,
  kBackendUnavailable,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed scene JSON or a scene invariant violation; `path()` is the JSON path of the offender.
class SceneFormatError : public Error {
 public:
  SceneFormatError(const std::string& what, const std::string& path)
      : Error(ErrorKind::kInvalidInput, what + " at " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& message) : Error(ErrorKind::kInvalidInput, message) {}
};

class ManifestError : public Error {
 public:
  explicit ManifestError(const std::string& message) : Error(ErrorKind::kInvalidInput, message) {}
};

class LayoutError : public Error {
 public:
  explicit LayoutError(const std::string& message) : Error(ErrorKind::kInvalidInput, message) {}
};

/// Element references an asset or mesh that cannot be found.
class UnresolvedMeshError : public Error {
 public:
  explicit UnresolvedMeshError(const std::string& element_id)
      : Error(ErrorKind::kInvalidInput, "unresolvable mesh for element " + element_id),
        element_id_(element_id) {}
  const std::string& element_id() const { return element_id_; }

 private:
  std::string element_id_;
};

/// A policy or scorer backend failed to produce a usable answer.
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& message, bool unreachable = false)
      : Error(unreachable ? ErrorKind::kBackendUnavailable : ErrorKind::kInternal, message) {}
};

}  // namespace scenegen
