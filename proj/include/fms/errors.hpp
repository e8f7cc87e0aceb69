#pragma once

#include <stdexcept>
#include <string>

namespace fms {

// Error taxonomy used for CLI exit codes: parse errors (bad input syntax),
// validation errors (inputs that parse but violate axioms), and mathematical
// errors (well-formed requests whose answer does not exist, e.g. an orbit
// that was never realized in a truncated tower). Everything else is internal.
enum class ErrorClass { Parse, Validation, Mathematical, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string msg) : std::runtime_error(std::move(msg)), cls_(cls) {}
  ErrorClass error_class() const { return cls_; }

 private:
  ErrorClass cls_;
};

struct ParseError : Error {
  explicit ParseError(std::string msg) : Error(ErrorClass::Parse, std::move(msg)) {}
};

struct ValidationError : Error {
  explicit ValidationError(std::string msg) : Error(ErrorClass::Validation, std::move(msg)) {}
};

struct MathError : Error {
  explicit MathError(std::string msg) : Error(ErrorClass::Mathematical, std::move(msg)) {}
};

// metric_core
struct EmptySubsetError : MathError {
  EmptySubsetError() : MathError("subset must be nonempty") {}
};

// katetov
struct PointNotInSpaceError : MathError {
  explicit PointNotInSpaceError(int point)
      : MathError("point " + std::to_string(point) + " not in space") {}
};
struct SpaceMismatchError : MathError {
  SpaceMismatchError() : MathError("maps/isometries live on different spaces") {}
};
struct BadEmbeddingError : MathError {
  explicit BadEmbeddingError(std::string msg) : MathError("bad embedding: " + std::move(msg)) {}
};
struct InvalidKatetovMapError : MathError {
  explicit InvalidKatetovMapError(std::string msg)
      : MathError("invalid Katetov map: " + std::move(msg)) {}
};
struct NotCauchyError : MathError {
  NotCauchyError(std::size_t index, std::string msg)
      : MathError("sequence not Cauchy at index " + std::to_string(index) + ": " + std::move(msg)),
        index(index) {}
  std::size_t index;
};
struct SupportTooLargeError : MathError {
  SupportTooLargeError(std::size_t index, int cardinality, int bound)
      : MathError("sequence element " + std::to_string(index) + " has minimal support " +
                  std::to_string(cardinality) + " > " + std::to_string(bound)),
        index(index),
        cardinality(cardinality),
        bound(bound) {}
  std::size_t index;
  int cardinality;
  int bound;
};

// tower
struct DuplicatePointError : MathError {
  explicit DuplicatePointError(int existing)
      : MathError("map realizes existing point " + std::to_string(existing)), existing(existing) {}
  int existing;
};
struct OrbitNotRealizedError : MathError {
  OrbitNotRealizedError(int point, int level)
      : MathError("image of the map realized by point " + std::to_string(point) + " (level " +
                  std::to_string(level) + ") is not adjoined; tower is not orbit-closed"),
        point(point),
        level(level) {}
  int point;
  int level;
};
struct TowerGrowthFailedError : MathError {
  explicit TowerGrowthFailedError(std::string msg)
      : MathError("tower growth failed: " + std::move(msg)) {}
};

// witness
struct PreconditionError : MathError {
  explicit PreconditionError(std::string msg) : MathError("precondition: " + std::move(msg)) {}
};
struct WitnessPlanInsufficientError : MathError {
  WitnessPlanInsufficientError(int needed_k, int needed_j)
      : MathError("witness plan has no index i with k_i = " + std::to_string(needed_k) +
                  " and j_i >= " + std::to_string(needed_j)),
        needed_k(needed_k),
        needed_j(needed_j) {}
  int needed_k;
  int needed_j;
};

}  // namespace fms
