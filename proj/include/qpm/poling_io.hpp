#pragma once

// Poling pattern CSV formats.
//
//   csv-boundaries   z_start_m,z_end_m,sign
//   csv-widths       width_m,sign
//
// Positions and widths carry 12 significant digits; sign is +1 or -1. Lines
// starting with '#' are comments and are skipped on import.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "qpm/grating.hpp"

namespace qpm {

enum class PolingFormat { csv_boundaries, csv_widths };

PolingFormat parse_poling_format(std::string_view tag);
std::string_view to_string(PolingFormat format);

std::string export_poling(const Grating& grating, PolingFormat format);

/// Parses either format, detected from the header row.
Grating import_poling(std::string_view text);

Grating read_poling_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// FNV-1a (64-bit) of the csv-widths export, as 16 hex digits. Identifies a
/// domain list independently of file format and comments.
std::string content_hash(const Grating& grating);

}  // namespace qpm
