#pragma once

#include <stdexcept>
#include <string>

namespace panelkit {

enum class ErrorCode {
  // data ingestion and panel operations
  EmptyInput,
  MalformedCsv,
  UnbalancedPanel,
  DuplicateCell,
  NonNumericValue,
  UnknownVariable,
  LagTooLarge,
  SingletonTimeSeries,
  TooFewPeriods,
  TooFewPeriodsForSplit,
  TooFewUnits,
  InvalidPermutation,
  // estimation
  RankDeficientDesign,
  SingleCluster,
  SingularBread,
  SingularH,
  InvalidTrim,
  NoValidInstruments,
  ZeroWeightMatrix,
  OrderConditionFailed,
  SingularGMMGram,
  HalfSampleOrderConditionFailed,
  UnitRootDenominator,
  NegativeVariance,
  TooManyFailedReplicates,
  // configuration and usage
  InvalidConfig,
  ConfigParse,
  InvalidArgument,
};

// Coarse grouping used by the command-line front end for exit codes.
enum class ErrorCategory { usage, data, estimation };

const char* error_name(ErrorCode code) noexcept;
ErrorCategory error_category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const char* name() const noexcept { return error_name(code_); }
  ErrorCategory category() const noexcept { return error_category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace panelkit
