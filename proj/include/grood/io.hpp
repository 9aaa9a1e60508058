#pragma once

// Plain-text formats.
//
//   Matrix file:  "rows cols" header, then `rows` lines of `cols` numbers.
//   Update stream: "n p" header, then one line per update: a_1..a_n b_1..b_p.
//   Report CSV:   step,kind,distance,ortho_drift,recon_residual,wall_time_ns
//
// Lines whose first non-blank character is '#' and blank lines are ignored.
// Floats are written with 17 significant digits, which round-trips doubles.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "grood/core.hpp"
#include "grood/streaming.hpp"

namespace grood::io {

/// printf("%.17g").
std::string format_double(double value);

Matrix parse_matrix(std::istream& in);
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

struct UpdateStream {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<RankOneUpdate> updates;
};

UpdateStream parse_update_stream(std::istream& in);
void write_update_stream(std::ostream& out, std::size_t n, std::size_t p,
                         std::span<const RankOneUpdate> updates);
UpdateStream read_update_stream(const std::filesystem::path& path);
void write_update_stream(const std::filesystem::path& path, std::size_t n,
                         std::size_t p, std::span<const RankOneUpdate> updates);

inline constexpr const char* kReportHeader =
    "step,kind,distance,ortho_drift,recon_residual,wall_time_ns";

void write_report_csv(std::ostream& out, std::span<const StepReport> reports);
std::vector<StepReport> parse_report_csv(std::istream& in);

}  // namespace grood::io
