#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lomatch {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

/// Error thrown while reading a line-oriented input file; carries the
/// 1-based line number the problem was found on.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A user (or item) without enough ratings to support the requested
/// operation. Callers typically fall back to content-only scoring.
class ColdStartError : public std::runtime_error {
 public:
  explicit ColdStartError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Fixed-size similarity vector for one candidate pair. Components lie in
/// [0,1]; the schema id names the feature layout.
struct FeatureVector {
  Vector values;
  std::string schema_id;
};

// Default 4-feature schema: title, description, keywords, resource type.
inline constexpr const char* kLom4Schema = "lom4";
inline constexpr Index kLom4Dim = 4;

inline bool is_valid_feature_vector(const FeatureVector& fv, Index dim) {
  if (fv.values.size() != dim) return false;
  return ((fv.values.array() >= 0.0) && (fv.values.array() <= 1.0)).all();
}

/// Deterministic double formatting shared by all CSV artifact writers.
std::string format_value(double v);

}  // namespace lomatch
