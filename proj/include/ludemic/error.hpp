#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ludemic {

/// Error categories raised across the workbench. The CLI maps these onto exit
/// codes, so every thrown error carries one.
enum class ErrorCode {
  // description language
  UnterminatedString,
  IllegalCharacter,
  UnbalancedParens,
  EmptyCompound,
  UnexpectedToken,
  TrailingTokens,
  // engine
  UnsupportedLudeme,
  MissingSection,
  InvalidBoard,
  InvalidDescription,
  IllegalMove,
  // heuristics
  NotApplicable,
  // data
  DuplicateGameName,
  MissingResults,
  MalformedCsv,
  MalformedResults,
  DegenerateInput,
  PerplexityTooLarge,
  Io,
  Usage,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ludemic
