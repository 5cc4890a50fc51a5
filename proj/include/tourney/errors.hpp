#pragma once

#include <stdexcept>
#include <string>

namespace tourney {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented invariant (bad schedule, bad config, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not deliver a result at the requested accuracy.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

#define TOURNEY_DEFINE_ERROR(Name, Base) \
  class Name : public Base {             \
   public:                               \
    using Base::Base;                    \
  }

TOURNEY_DEFINE_ERROR(InvalidDistribution, InvalidInput);
TOURNEY_DEFINE_ERROR(InvalidSchedule, InvalidInput);
TOURNEY_DEFINE_ERROR(InvalidCost, InvalidInput);
TOURNEY_DEFINE_ERROR(RankOutOfRange, InvalidInput);
TOURNEY_DEFINE_ERROR(SeedRequired, InvalidInput);
TOURNEY_DEFINE_ERROR(PropertyViolation, InvalidInput);
TOURNEY_DEFINE_ERROR(NoBoundAvailable, InvalidInput);
TOURNEY_DEFINE_ERROR(AllZeroEfforts, InvalidInput);
TOURNEY_DEFINE_ERROR(SampleTooSmall, InvalidInput);
TOURNEY_DEFINE_ERROR(NoDeclaredStandard, InvalidInput);
TOURNEY_DEFINE_ERROR(SufficiencyViolated, InvalidInput);
TOURNEY_DEFINE_ERROR(ConfigError, InvalidInput);

TOURNEY_DEFINE_ERROR(SurvivalUnderflow, NumericFailure);
TOURNEY_DEFINE_ERROR(ZeroDensity, NumericFailure);
TOURNEY_DEFINE_ERROR(TooManyModes, NumericFailure);
TOURNEY_DEFINE_ERROR(QuadratureFailure, NumericFailure);
TOURNEY_DEFINE_ERROR(EffortOutOfRange, NumericFailure);
TOURNEY_DEFINE_ERROR(RepresentationMismatch, NumericFailure);
TOURNEY_DEFINE_ERROR(UnboundedLikelihoodRatio, NumericFailure);

#undef TOURNEY_DEFINE_ERROR

}  // namespace tourney
