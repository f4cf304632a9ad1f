#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace synthmetric {

enum class ErrorCode {
  MissingLabelColumn,
  NonNumericCell,
  EmptyDataset,
  ConstantLabel,
  InvalidLabel,
  InvalidArgument,
  TooFewSamplesPerClass,
  TooFewNeighbors,
  DegenerateClass,
  SchemaMismatch,
  TooFewFeatures,
  NonBinaryFeature,
  TooFewRows,
  InvalidWeights,
  TooFewRuns,
  InsufficientVariation,
  SingleClass,
  LengthMismatch,
  NoDefinedCells,
  TooFewCells,
  TooFewFamilies,
  EmptyTable,
  EmptySummaries,
  ConfigInvalid,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by CSV ingestion; carries the offending 1-based data row and 0-based column.
class NonNumericCellError : public Error {
 public:
  NonNumericCellError(std::size_t row, std::size_t col, const std::string& cell)
      : Error(ErrorCode::NonNumericCell,
              "row " + std::to_string(row) + ", column " + std::to_string(col) + ": '" + cell + "'"),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace synthmetric
