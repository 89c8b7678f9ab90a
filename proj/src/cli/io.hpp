#pragma once

// File formats of the command-line tool.
//
// Signals: UTF-8 text, one real per line, no header. Tables: CSV with a
// header row and numbers at 17 significant digits. Reports: JSON objects with
// fixed key names. Output files are written to a temporary sibling and
// renamed into place, so readers never observe a partial file.

#include "owm/detector.hpp"
#include "owm/exponents.hpp"
#include "owm/simulate.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace owm::cli {

/// Malformed input file; the message names the file and line.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Output could not be written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double value);

std::vector<double> read_signal(const std::filesystem::path& path);
std::string format_signal(const std::vector<double>& samples);

/// Atomic replace of `path` with `contents`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Minimal CSV builder: header first, then rows of already-formatted cells.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;
    /// Same content as an array of objects keyed by header; numeric cells
    /// become numbers, non-finite cells null.
    nlohmann::json to_json() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

extern const std::vector<std::string> kSweepHeader;
extern const std::vector<std::string> kSimulateHeader;
extern const std::vector<std::string> kCompareHeader;

std::vector<std::string> simulate_row(const TrialBatchResult& batch, double theory);

/// JSON numbers for finite values, null otherwise.
nlohmann::json number_or_null(double value);

nlohmann::json exponent_json(const ExponentReport& report,
                             std::optional<std::uint64_t> seed = std::nullopt);
nlohmann::json detection_json(const DetectionReport& report, std::uint64_t seed);

/// `out.csv` + ("sz2", "0.52") -> `out_sz2_0.52.csv`.
std::filesystem::path series_path(const std::filesystem::path& base, const std::string& name,
                                  double value);

}  // namespace owm::cli
