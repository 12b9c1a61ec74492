#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace planact {

/// Base class for every error raised by the engine. `code()` is a stable
/// identifier ("SyntaxError", "UnknownObject", ...) used by the CLI and tests.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define PLANACT_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

// pddl-core
PLANACT_DEFINE_ERROR(ArityMismatch)
PLANACT_DEFINE_ERROR(UnknownType)
PLANACT_DEFINE_ERROR(DuplicateName)
PLANACT_DEFINE_ERROR(UnknownPredicate)
PLANACT_DEFINE_ERROR(UnknownObject)
PLANACT_DEFINE_ERROR(UnknownVariable)
PLANACT_DEFINE_ERROR(KindConflict)
PLANACT_DEFINE_ERROR(OutputMentionedInDomain)
PLANACT_DEFINE_ERROR(OutputUnused)
PLANACT_DEFINE_ERROR(NotApplicable)

// planner
PLANACT_DEFINE_ERROR(LevelBudgetExhausted)
PLANACT_DEFINE_ERROR(NoPlan)
PLANACT_DEFINE_ERROR(UnknownSampler)

// world-sim
PLANACT_DEFINE_ERROR(SchemaError)
PLANACT_DEFINE_ERROR(OverlapError)

// csubbt-exec
PLANACT_DEFINE_ERROR(NoTemplate)
PLANACT_DEFINE_ERROR(MalformedXml)
PLANACT_DEFINE_ERROR(UnknownNodeTag)
PLANACT_DEFINE_ERROR(PrematureEmission)

// flp-replan
PLANACT_DEFINE_ERROR(TaskFailed)
PLANACT_DEFINE_ERROR(Timeout)
PLANACT_DEFINE_ERROR(TransportError)
PLANACT_DEFINE_ERROR(MissingScript)
PLANACT_DEFINE_ERROR(NoBlockFound)
PLANACT_DEFINE_ERROR(EmptyGoal)

// harness
PLANACT_DEFINE_ERROR(MissingGroundTruth)

#undef PLANACT_DEFINE_ERROR

/// Parse error with a source position. `expected` describes what the parser
/// was looking for when it stopped.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t col, const std::string& expected)
      : Error("SyntaxError", "line " + std::to_string(line) + ", col " +
                                 std::to_string(col) + ": expected " + expected),
        line_(line),
        col_(col),
        expected_(expected) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t col_;
  std::string expected_;
};

}  // namespace planact
