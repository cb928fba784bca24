#pragma once

#include <stdexcept>
#include <string>

namespace blockswap {

/// Broad failure class; the CLI maps each to an exit code.
enum class ErrorCategory { usage = 1, validation = 2, data = 3, internal = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define BLOCKSWAP_DEFINE_ERROR(Name, Category, Prefix)                     \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what)                                 \
        : Error(ErrorCategory::Category, std::string(Prefix) + ": " + what) {} \
  };

// graph-ir
BLOCKSWAP_DEFINE_ERROR(NotSISO, data, "NotSISO")
BLOCKSWAP_DEFINE_ERROR(InconsistentSpatial, data, "InconsistentSpatial")
BLOCKSWAP_DEFINE_ERROR(MalformedDocument, data, "MalformedDocument")
BLOCKSWAP_DEFINE_ERROR(InvalidNetwork, validation, "InvalidNetwork")
// enumeration
BLOCKSWAP_DEFINE_ERROR(StartNotSingleInput, data, "StartNotSingleInput")
BLOCKSWAP_DEFINE_ERROR(TooLarge, data, "TooLarge")
// model house
BLOCKSWAP_DEFINE_ERROR(NoSubnetFound, data, "NoSubnetFound")
BLOCKSWAP_DEFINE_ERROR(EmptyPretrainedSet, data, "EmptyPretrainedSet")
BLOCKSWAP_DEFINE_ERROR(MaskLengthMismatch, data, "MaskLengthMismatch")
// cost profile
BLOCKSWAP_DEFINE_ERROR(UnknownAlternative, data, "UnknownAlternative")
// rewrite
BLOCKSWAP_DEFINE_ERROR(BoundaryMismatch, data, "BoundaryMismatch")
BLOCKSWAP_DEFINE_ERROR(TargetNotIntact, data, "TargetNotIntact")

#undef BLOCKSWAP_DEFINE_ERROR

/// Document does not match the expected schema; `path()` is a JSON path such as "$.edges".
class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string path, const std::string& what)
      : Error(ErrorCategory::data, "SchemaViolation at " + path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace blockswap
