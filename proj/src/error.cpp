#include "panelkit/error.hpp"

namespace panelkit {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::UnbalancedPanel: return "UnbalancedPanel";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::NonNumericValue: return "NonNumericValue";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::LagTooLarge: return "LagTooLarge";
    case ErrorCode::SingletonTimeSeries: return "SingletonTimeSeries";
    case ErrorCode::TooFewPeriods: return "TooFewPeriods";
    case ErrorCode::TooFewPeriodsForSplit: return "TooFewPeriodsForSplit";
    case ErrorCode::TooFewUnits: return "TooFewUnits";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::RankDeficientDesign: return "RankDeficientDesign";
    case ErrorCode::SingleCluster: return "SingleCluster";
    case ErrorCode::SingularBread: return "SingularBread";
    case ErrorCode::SingularH: return "SingularH";
    case ErrorCode::InvalidTrim: return "InvalidTrim";
    case ErrorCode::NoValidInstruments: return "NoValidInstruments";
    case ErrorCode::ZeroWeightMatrix: return "ZeroWeightMatrix";
    case ErrorCode::OrderConditionFailed: return "OrderConditionFailed";
    case ErrorCode::SingularGMMGram: return "SingularGMMGram";
    case ErrorCode::HalfSampleOrderConditionFailed: return "HalfSampleOrderConditionFailed";
    case ErrorCode::UnitRootDenominator: return "UnitRootDenominator";
    case ErrorCode::NegativeVariance: return "NegativeVariance";
    case ErrorCode::TooManyFailedReplicates: return "TooManyFailedReplicates";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput:
    case ErrorCode::MalformedCsv:
    case ErrorCode::UnbalancedPanel:
    case ErrorCode::DuplicateCell:
    case ErrorCode::NonNumericValue:
    case ErrorCode::UnknownVariable:
    case ErrorCode::LagTooLarge:
    case ErrorCode::SingletonTimeSeries:
    case ErrorCode::TooFewPeriods:
    case ErrorCode::TooFewPeriodsForSplit:
    case ErrorCode::TooFewUnits:
    case ErrorCode::InvalidPermutation:
      return ErrorCategory::data;
    case ErrorCode::InvalidConfig:
    case ErrorCode::ConfigParse:
    case ErrorCode::InvalidArgument:
      return ErrorCategory::usage;
    default:
      return ErrorCategory::estimation;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace panelkit
