#pragma once

#include <stdexcept>
#include <string>

namespace semiteam {

enum class Errc {
  SpecMismatch,
  NotOrdered,
  InfiniteSearch,
  SyntaxError,
  ArityError,
  UnknownSymbol,
  UnboundVariable,
  VocabularyClash,
  UnknownVariable,
  LengthMismatch,
  UnsupportedSpec,
  EmptySpace,
  MissingVariable,
  MissingIndeterminate,
  InvalidInput,
};

const char* errc_name(Errc c);

/// Engine-wide error type. `code()` is stable and machine-readable; the CLI
/// surfaces it in JSON payloads.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

} // namespace semiteam
