#pragma once

#include <stdexcept>
#include <string>

namespace flow2bpmn {

enum class ErrorCode {
  MalformedJson,
  Schema,
  UnresolvedNode,
  TimerUnsupported,
  MappingSyntax,
  MappingRef,
  LiftJoin,
  TurtleSyntax,
  RuleUnsafe,
  FixpointBudget,
  BuildPrecondition,
  LayoutCycle,
  IdCollision,
  Config,
  Range,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson:     return "E_MALFORMED_JSON";
    case ErrorCode::Schema:            return "E_SCHEMA";
    case ErrorCode::UnresolvedNode:    return "E_UNRESOLVED_NODE";
    case ErrorCode::TimerUnsupported:  return "E_TIMER_UNSUPPORTED";
    case ErrorCode::MappingSyntax:     return "E_MAPPING_SYNTAX";
    case ErrorCode::MappingRef:        return "E_MAPPING_REF";
    case ErrorCode::LiftJoin:          return "E_LIFT_JOIN";
    case ErrorCode::TurtleSyntax:      return "E_TURTLE_SYNTAX";
    case ErrorCode::RuleUnsafe:        return "E_RULE_UNSAFE";
    case ErrorCode::FixpointBudget:    return "E_FIXPOINT_BUDGET";
    case ErrorCode::BuildPrecondition: return "E_BUILD_PRECONDITION";
    case ErrorCode::LayoutCycle:       return "E_LAYOUT_CYCLE";
    case ErrorCode::IdCollision:       return "E_ID_COLLISION";
    case ErrorCode::Config:            return "E_CONFIG";
    case ErrorCode::Range:             return "E_RANGE";
  }
  return "E_UNKNOWN";
}

/// Single error type for the whole pipeline; the code keys the failure
/// taxonomy used in batch reports.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw PipelineError(code, message);
}

}  // namespace flow2bpmn
