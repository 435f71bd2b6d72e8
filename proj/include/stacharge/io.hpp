#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "stacharge/experiments.hpp"
#include "stacharge/metrics.hpp"
#include "stacharge/propagator.hpp"

namespace stacharge {

inline constexpr const char* kTrajectoryHeader = "t,omega0_t,p1,p2,p3,W_norm,P_inst";

/// Locale-independent scientific notation with 12 significant digits ("nan" for NaN).
std::string format_number(double value);

/// Sibling summary path: "run.csv" -> "run.summary.json".
std::filesystem::path summary_path_for(const std::filesystem::path& csv_path);

/// Machine-readable run summary; keys are emitted in sorted order.
std::string summary_document(const Trajectory& trajectory, const ChargeReport& report, const ProtocolSpec& spec,
                             const DecoherenceSpec& dec);

/// Writes the trajectory as CSV (header kTrajectoryHeader, one row per sample) and the summary
/// document next to it. P_inst is dW_norm/d(omega0 t). Throws std::runtime_error with the path
/// on I/O failure.
void write_trajectory(const Trajectory& trajectory, const ChargeReport& report, const ProtocolSpec& spec,
                      const DecoherenceSpec& dec, const std::filesystem::path& path);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, double level_ratio, double omega0);

void write_sweep_table(std::ostream& out, const SweepResult& result);

void write_pulse_table(std::ostream& out, const std::vector<PulseTableRow>& rows, double omega0);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::out_of_range when absent.
    std::size_t column(const std::string& name) const;
    /// Cell parsed as a number; throws ValidationError if it is not one.
    double number(std::size_t row, const std::string& name) const;
    const std::string& text(std::size_t row, const std::string& name) const;
};

/// Parses a CSV with one header line; every row must have as many cells as the header.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace stacharge
