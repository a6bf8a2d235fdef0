#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "qcd/detectors.hpp"
#include "qcd/eval.hpp"
#include "qcd/simulate.hpp"

namespace qcd::csv {

/// Data-file errors carry the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double value);

// Spike CSV: header `trial,bin_0,...,bin_{B-1}`, one row per trial,
// values 0/1, comma separated, no quoting.
void write_spike_csv(const SpikeTrialSet& set, const std::filesystem::path& path);

/// Reads the matrix back. Event metadata is not stored in the file; the
/// returned set carries defaults (change_trial = trials + 1, cue_bin = 0).
SpikeTrialSet read_spike_csv(const std::filesystem::path& path);

// Detector report: `index,statistic,threshold,stopped` rows.
void write_report_csv(const StoppingReport& report, const std::filesystem::path& path);

void write_calibration_csv(const CalibrationResult& result, const std::filesystem::path& path);

void write_tradeoff_csv(std::span<const TradeoffRow> rows, const std::filesystem::path& path);

} // namespace qcd::csv
