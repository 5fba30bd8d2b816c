#ifndef LEXMATCH_ERROR_HPP_
#define LEXMATCH_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lexmatch {

// Base of every error raised by the library. The CLI maps these to exit code 2
// unless a command documents otherwise.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document. `location` is a JSON-pointer-like path.
class SchemaError : public Error {
 public:
  SchemaError(std::string location, const std::string& message)
      : Error(location.empty() ? message : location + ": " + message),
        location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

class UnknownFeasibilityKind : public SchemaError {
 public:
  UnknownFeasibilityKind(std::string location, const std::string& kind)
      : SchemaError(std::move(location),
                    "unknown feasibility kind '" + kind + "'") {}
};

class UnknownAgent : public Error {
 public:
  explicit UnknownAgent(const std::string& name)
      : Error("unknown agent '" + name + "'") {}
};

class UnknownTask : public Error {
 public:
  explicit UnknownTask(const std::string& name)
      : Error("unknown task '" + name + "'") {}
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class TreeTooLarge : public Error {
 public:
  TreeTooLarge(const std::string& agent, std::size_t limit,
               const std::string& what)
      : Error("lexicographic tree of agent '" + agent + "' exceeds " + what +
              " limit " + std::to_string(limit)),
        limit_(limit) {}
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

class InfeasibleAllocation : public Error {
 public:
  using Error::Error;
};

class TaskMultiplyAssigned : public Error {
 public:
  explicit TaskMultiplyAssigned(const std::string& task)
      : Error("task '" + task + "' is assigned to more than one agent") {}
};

class InfeasibleAgentAllocation : public Error {
 public:
  explicit InfeasibleAgentAllocation(const std::string& agent)
      : Error("allocation of agent '" + agent + "' is not feasible") {}
};

class NotAcceptable : public Error {
 public:
  NotAcceptable(const std::string& agent, const std::string& task)
      : Error("pair (" + agent + ", " + task + ") is not acceptable") {}
};

class AlreadyMatched : public Error {
 public:
  AlreadyMatched(const std::string& agent, const std::string& task)
      : Error("pair (" + agent + ", " + task + ") is already matched") {}
};

class PartialValuation : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  TooLarge(const std::string& agent, std::size_t size, std::size_t max)
      : Error("agent '" + agent + "' has " + std::to_string(size) +
              " acceptable tasks, more than the limit of " +
              std::to_string(max)) {}
};

}  // namespace lexmatch

#endif  // LEXMATCH_ERROR_HPP_
