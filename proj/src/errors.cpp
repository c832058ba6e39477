#include "biasweat/errors.hpp"

namespace biasweat {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::IoFailure: return "IoFailure";
    case Errc::RaggedRow: return "RaggedRow";
    case Errc::DuplicateToken: return "DuplicateToken";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::TokenUnencodable: return "TokenUnencodable";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnknownBuiltin: return "UnknownBuiltin";
    case Errc::OverlappingSets: return "OverlappingSets";
    case Errc::UnequalSets: return "UnequalSets";
    case Errc::ResultTooSmall: return "ResultTooSmall";
    case Errc::AllTokensOov: return "AllTokensOov";
    case Errc::TooManyPartitions: return "TooManyPartitions";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::EmptyVocabulary: return "EmptyVocabulary";
    case Errc::EmptySuite: return "EmptySuite";
    case Errc::NoComputedRows: return "NoComputedRows";
    case Errc::DegenerateSpread: return "DegenerateSpread";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
  }
  return "Unknown";
}

int errc_exit_code(Errc code) {
  switch (code) {
    case Errc::IoFailure:
    case Errc::RaggedRow:
    case Errc::DuplicateToken:
    case Errc::NonFiniteValue:
    case Errc::EmptyFile:
    case Errc::HeaderMismatch:
    case Errc::TokenUnencodable:
    case Errc::EmptyTable:
    case Errc::MalformedRecord:
    case Errc::SchemaViolation:
      return 1;
    case Errc::DegenerateSpread:
    case Errc::NonFiniteLoss:
      return 3;
    default:
      return 2;
  }
}

}  // namespace biasweat
