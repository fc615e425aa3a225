#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace altmap {

enum class ErrorKind {
  NotADoi,
  MalformedRow,
  MalformedRecord,
  FileUnreadable,
  SnapshotCorrupt,
  VersionMismatch,
  EmptySelection,
  InvalidFraction,
  EmptyGraph,
  DegenerateInput,
  UnknownPlatform,
  MalformedLabelFile,
  EmptyRange,
  IoError,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

// Data errors are reported with exit code 2 by the CLI, I/O errors with 3.
bool is_io_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace altmap
