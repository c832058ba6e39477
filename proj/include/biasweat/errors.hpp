#pragma once

#include <stdexcept>
#include <string>

namespace biasweat {

enum class Errc {
  // I/O and parsing (CLI exit code 1)
  IoFailure,
  RaggedRow,
  DuplicateToken,
  NonFiniteValue,
  EmptyFile,
  HeaderMismatch,
  TokenUnencodable,
  EmptyTable,
  MalformedRecord,
  SchemaViolation,
  // validation / resolution (CLI exit code 2)
  ZeroVector,
  DimensionMismatch,
  UnknownBuiltin,
  OverlappingSets,
  UnequalSets,
  ResultTooSmall,
  AllTokensOov,
  TooManyPartitions,
  EmptyCorpus,
  EmptyVocabulary,
  EmptySuite,
  NoComputedRows,
  // numerical (CLI exit code 3)
  DegenerateSpread,
  NonFiniteLoss,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

const char* errc_name(Errc code);

// Exit-code mapping used by the CLI: 1 I/O-or-parse, 2 validation/resolution,
// 3 numerical.
int errc_exit_code(Errc code);

}  // namespace biasweat
