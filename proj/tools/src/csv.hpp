#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nestspec/coxph.hpp"
#include "nestspec/errors.hpp"
#include "nestspec/harness.hpp"

namespace nestspec::cli {

/// Malformed file content. Messages carry the file, 1-based row, and (when it
/// applies) the 1-based column of the offense.
class ParseError : public InputError {
public:
    using InputError::InputError;
};

/// Filesystem-level failure (missing file, unwritable output).
class IoError : public Error {
public:
    using Error::Error;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a comma-separated file with a mandatory header row. Every cell below
/// the header must parse as a finite number; anything else raises ParseError
/// naming the row and column.
CsvTable read_csv(const std::string& path);

/// Schema y,x1,...,xp. `family` controls response validation (binomial 0/1,
/// poisson non-negative integers).
RegressionData read_regression_csv(const std::string& path, DataFamily family);

/// Schema time,event,x1,...,xp with time > 0 and event in {0, 1}.
SurvivalData read_survival_csv(const std::string& path);

/// Schema value (one column).
SeriesData read_series_csv(const std::string& path);

Dataset read_dataset(const std::string& path, DataFamily family);

/// Serializes a dataset back into the same schema the readers accept, with
/// 17-significant-digit numbers so a round trip reproduces identical doubles.
std::string dataset_to_csv(const Dataset& dataset);

/// Writes via a temp file and rename, so readers never observe a torn file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace nestspec::cli
