#pragma once

#include <stdexcept>
#include <string>

namespace gaitscore {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad file contents, invalid config).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but numerically degenerate (e.g. zero torso length).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Sequence or clip has fewer frames than the operation needs.
class TooShortError : public Error {
 public:
  using Error::Error;
};

/// Tensor or branch shapes do not match the model.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// API called out of order (e.g. backward before forward).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint does not belong to the requested model spec.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

/// No track qualifies as the participant.
class NoParticipantError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gaitscore
