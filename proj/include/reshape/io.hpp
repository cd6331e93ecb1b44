#pragma once

#include "reshape/comb.hpp"
#include "reshape/envelope.hpp"
#include "reshape/metrics.hpp"
#include "reshape/optimizer.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace reshape::io {

inline constexpr const char* kCombSchema = "reshape-comb/1";

// Comb text format (JSON):
//   {"schema": "reshape-comb/1", "carrier_nm": ..., "spacing_ghz": ...,
//    "lines": [{"amplitude": ..., "phase": ...}, ...]}
std::string comb_to_string(const FrequencyComb& comb);
FrequencyComb comb_from_string(const std::string& text);
void write_comb(const std::filesystem::path& path, const FrequencyComb& comb);
FrequencyComb read_comb(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws Error if absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Columns t_ps, re, im; with a squelch threshold, also abs and phase_rad
/// (phase forced to 0 below threshold * peak).
void write_envelope(const std::filesystem::path& path, const ComplexEnvelope& env, double squelch_threshold = 0.0);
/// Reads t_ps, re, im back onto `grid`; throws Error if the time column does
/// not match the grid.
ComplexEnvelope read_envelope(const std::filesystem::path& path, const TimeGrid& grid, double carrier_nm = kSignalNm);

/// Columns delay_ps, V.
void write_visibility_curve(const std::filesystem::path& path, const VisibilityCurve& curve);
VisibilityCurve read_visibility_curve(const std::filesystem::path& path);

/// Columns iteration, objective, vmax_so_far, params_checksum, accepted.
void write_trace(const std::filesystem::path& path, const OptimizationTrace& trace);
std::vector<TraceRecord> read_trace(const std::filesystem::path& path);

struct ScanPoint {
  double pump_scale = 0.0;
  double delay_ps = 0.0;
  double v_max = 0.0;
  double eta_mm = 0.0;
  double eta_r = 0.0;
};

/// Columns pump_scale, delay_ps, v_max, eta_mm, eta_r.
void write_scan(const std::filesystem::path& path, const std::vector<ScanPoint>& scan);
std::vector<ScanPoint> read_scan(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace reshape::io
