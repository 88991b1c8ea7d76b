#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hesse3 {

enum class ErrorCode {
  CharacteristicThree,
  ReducibleModulus,
  InvalidField,
  FieldMismatch,
  NoEmbedding,
  ZeroPolynomial,
  DivisionByZero,
  WrongCharacteristic,
  SingularInput,
  NotOnCurve,
  SingularPoint,
  UnsupportedShape,
  SingularCurve,
  FieldTooLarge,
  DegenerateConfiguration,
  CollinearTriple,
  NotSymplectic,
  ExtensionTooLarge,
  ParseError,
  Internal,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::CharacteristicThree: return "CharacteristicThree";
    case ErrorCode::ReducibleModulus: return "ReducibleModulus";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::NoEmbedding: return "NoEmbedding";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::WrongCharacteristic: return "WrongCharacteristic";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::NotOnCurve: return "NotOnCurve";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::SingularCurve: return "SingularCurve";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::CollinearTriple: return "CollinearTriple";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::ExtensionTooLarge: return "ExtensionTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

/// All library failures are reported through this exception type; `code()`
/// identifies the failure class for callers that need to branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace hesse3
