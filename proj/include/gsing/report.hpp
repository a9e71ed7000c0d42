#pragma once

// Job configuration and the machine-readable reports behind the CLI
// commands. Reports are JSON documents with schema "gsing-report/1"; file
// artifacts (CSV, VTK, line lists) go to the output directory when one is
// given and are embedded in the report otherwise.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsing/platform.hpp"

namespace gsing {

enum class Precision { double_, extended, exact };
std::string_view precision_name(Precision p);
/// "double", "extended" (alias "quad") or "exact".
Precision parse_precision(std::string_view text);

struct JobConfig {
    std::string command;
    std::string out_dir;  ///< empty: artifacts embedded in the report
    double tol = 1e-8;
    std::uint64_t seed = 1;
    std::size_t samples = 100;
    std::size_t grid = 32;
    std::array<double, 6> box{-10, 10, -10, 10, -10, 10};  ///< xmin, xmax, ymin, ymax, zmin, zmax
    /// Unset: exact for param, extended for everything else.
    std::optional<Precision> precision;
    std::size_t restarts = 2000;
    std::string max_den = "1" + std::string(40, '0');

    /// Keys as in the JSON options object: tol, seed, samples, grid, box,
    /// precision, restarts, max_den, out. Unknown keys are input errors.
    static JobConfig from_json(const std::string& command, const std::string& options_json);
    std::string to_json() const;
};

inline constexpr std::array<std::string_view, 8> kCommands{"surface", "twist",    "quadric", "param",
                                                          "lines",   "infinity", "verify",  "mesh"};

struct JobResult {
    int status = 0;  ///< 0 ok, 1 findings, 2 input error, 3 internal-consistency error
    std::string report;
};

/// Runs one command. Errors become a report with the matching status;
/// nothing is thrown.
JobResult run_job(const PlatformSpec& spec, const JobConfig& config);

/// "xmin,xmax,ymin,ymax,zmin,zmax" or a single half-width h for [-h, h]^3.
std::array<double, 6> parse_box(std::string_view text);

}  // namespace gsing
