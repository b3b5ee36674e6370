#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bitalloc {

// Stable error taxonomy. Every failure the library reports carries one of
// these codes; the C ABI mirrors them one-to-one.
enum class ErrorCode : int {
  ok = 0,
  invalid_argument,
  dimension_mismatch,
  empty_input,
  cycle,
  unreachable,
  source,
  index,
  infeasible_allocation,
  off_grid,
  empty_slice,
  out_of_range,
  not_monotone,
  grid_too_large,
  not_convex_model,
  no_convergence,
  too_few_samples,
  empty_front,
  parse,
  schema,
  io,
  unknown,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A dependency cycle; `cycle()` lists the offending nodes in walk order,
// first node repeated at the end.
class CycleError : public Error {
 public:
  CycleError(std::vector<int> cycle, const std::string& what)
      : Error(ErrorCode::cycle, what), cycle_(std::move(cycle)) {}

  const std::vector<int>& cycle() const { return cycle_; }

 private:
  std::vector<int> cycle_;
};

// Nodes with no path from the base layer.
class UnreachableError : public Error {
 public:
  UnreachableError(std::vector<int> nodes, const std::string& what)
      : Error(ErrorCode::unreachable, what), nodes_(std::move(nodes)) {}

  const std::vector<int>& nodes() const { return nodes_; }

 private:
  std::vector<int> nodes_;
};

class SourceError : public Error {
 public:
  explicit SourceError(const std::string& what) : Error(ErrorCode::source, what) {}
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& what) : Error(ErrorCode::index, what) {}
};

class InfeasibleAllocation : public Error {
 public:
  explicit InfeasibleAllocation(const std::string& what)
      : Error(ErrorCode::infeasible_allocation, what) {}
};

// Tabulated model lookup miss: the allocation is not a tabulated grid point.
class OffGrid : public Error {
 public:
  explicit OffGrid(const std::string& what) : Error(ErrorCode::off_grid, what) {}
};

class EmptySlice : public Error {
 public:
  explicit EmptySlice(const std::string& what) : Error(ErrorCode::empty_slice, what) {}
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& what) : Error(ErrorCode::out_of_range, what) {}
};

class NotMonotone : public Error {
 public:
  explicit NotMonotone(const std::string& what) : Error(ErrorCode::not_monotone, what) {}
};

// Enumeration would exceed the point cap; carries the estimated grid size.
class GridTooLarge : public Error {
 public:
  GridTooLarge(double estimate, const std::string& what)
      : Error(ErrorCode::grid_too_large, what), estimate_(estimate) {}

  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

class NotConvexModel : public Error {
 public:
  explicit NotConvexModel(const std::string& what) : Error(ErrorCode::not_convex_model, what) {}
};

// Iteration cap hit before the residual dropped below tolerance.
class NoConvergence : public Error {
 public:
  NoConvergence(double residual, const std::string& what)
      : Error(ErrorCode::no_convergence, what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

class TooFewSamples : public Error {
 public:
  explicit TooFewSamples(const std::string& what) : Error(ErrorCode::too_few_samples, what) {}
};

class EmptyFront : public Error {
 public:
  explicit EmptyFront(const std::string& what) : Error(ErrorCode::empty_front, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::parse, what) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorCode::schema, what) {}
};

}  // namespace bitalloc
