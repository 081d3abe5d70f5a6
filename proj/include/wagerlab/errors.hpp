#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wagerlab {

/// Base class for everything this library throws on bad input or a broken
/// run-time contract. `step` is the 0-based history length at which the
/// problem was detected, when that is meaningful.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct WagerSetViolation : Error {
  std::size_t step;
  WagerSetViolation(std::size_t step, const std::string& detail)
      : Error("wager outside declared wager set at step " +
              std::to_string(step) + ": " + detail),
        step(step) {}
};

struct ConsumptionNegative : Error {
  std::size_t step;
  ConsumptionNegative(std::size_t step, const std::string& detail)
      : Error("negative marginal consumption at step " + std::to_string(step) +
              ": " + detail),
        step(step) {}
};

struct BadDescriptor : Error {
  explicit BadDescriptor(const std::string& reason)
      : Error("bad strategy descriptor: " + reason) {}
};

struct BandInvalid : Error {
  explicit BandInvalid(const std::string& detail)
      : Error("invalid band (need a < b): " + detail) {}
};

struct NonpositiveCapital : Error {
  std::size_t step;
  explicit NonpositiveCapital(std::size_t step)
      : Error("source capital not positive at epoch start, step " +
              std::to_string(step)),
        step(step) {}
};

struct InitialTooSmall : Error {
  explicit InitialTooSmall(const std::string& detail)
      : Error("source initial capital too small: " + detail) {}
};

struct FamilyNotInteger : Error {
  std::size_t step;
  FamilyNotInteger(std::size_t step, const std::string& detail)
      : Error("family member not integer-valued at step " +
              std::to_string(step) + ": " + detail),
        step(step) {}
};

/// A per-step certificate of a sequence construction failed. Certificates are
/// the constructions' induction invariants turned into run-time assertions;
/// they are only checked when certificate checking is switched on.
struct CertificateViolation : Error {
  std::size_t step;
  CertificateViolation(std::size_t step, const std::string& detail)
      : Error("certificate violated at step " + std::to_string(step) + ": " +
              detail),
        step(step) {}
};

}  // namespace wagerlab
