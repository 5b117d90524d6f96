#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace desiree {

/// Source position, 1-based line/column plus byte offset and length.
struct Span {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;
  std::size_t length = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { Error, Warning, Info };

inline const char* to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "?";
}

// Stable diagnostic codes. Never renumber; add new ones at the end of a group.
namespace codes {
inline constexpr const char* kLex = "E-LEX-001";
inline constexpr const char* kParse = "E-PARSE-001";
inline constexpr const char* kNotSupported = "E-PARSE-002";
inline constexpr const char* kRegionMix = "E-PARSE-003";
inline constexpr const char* kBadLiteral = "E-PARSE-004";
inline constexpr const char* kDuplicateId = "E-ID-001";
inline constexpr const char* kDanglingReference = "E-REF-001";
inline constexpr const char* kKindMismatch = "E-KIND-001";
inline constexpr const char* kSigArity = "E-SIG-001";
inline constexpr const char* kSigKind = "E-SIG-002";
inline constexpr const char* kSigCategory = "E-SIG-003";
inline constexpr const char* kSigDroppedInput = "E-SIG-004";
inline constexpr const char* kSigArgument = "E-SIG-005";
inline constexpr const char* kSigOutputMismatch = "E-SIG-006";
inline constexpr const char* kStrengthInadmissible = "E-STR-001";
inline constexpr const char* kStrengthViolated = "E-STR-002";
inline constexpr const char* kStrengthMissing = "E-STR-003";
inline constexpr const char* kStrengthUnknown = "W-STR-001";
inline constexpr const char* kStrengthAsserted = "I-STR-001";
inline constexpr const char* kClash = "E-CONS-001";
inline constexpr const char* kReasonerUnknown = "W-RSN-001";
}  // namespace codes

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  Span span;
  std::string message;
  std::vector<std::string> related;
};

inline Diagnostic make_error(std::string code, Span span, std::string message,
                             std::vector<std::string> related = {}) {
  return {Severity::Error, std::move(code), span, std::move(message), std::move(related)};
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

// File order, then code. Stable so equal keys keep insertion order.
inline void sort_diagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.offset, a.code) < std::tie(b.span.offset, b.code);
  });
}

class LexError : public std::runtime_error {
 public:
  LexError(Span span, const std::string& message)
      : std::runtime_error(message), span_(span) {}
  const Span& span() const noexcept { return span_; }

 private:
  Span span_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(Span span, const std::string& message, std::vector<std::string> expected = {},
             std::string code = codes::kParse)
      : std::runtime_error(message),
        span_(span),
        expected_(std::move(expected)),
        code_(std::move(code)) {}
  const Span& span() const noexcept { return span_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& code() const noexcept { return code_; }

 private:
  Span span_;
  std::vector<std::string> expected_;
  std::string code_;
};

}  // namespace desiree
