#include "qpm/poling_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "qpm/errors.hpp"

namespace qpm {

namespace {

constexpr std::string_view kBoundariesHeader = "z_start_m,z_end_m,sign";
constexpr std::string_view kWidthsHeader = "width_m,sign";

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s, std::size_t line_no) {
    s = trim(s);
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("poling", "line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
    }
    return value;
}

Orientation parse_sign(std::string_view s, std::size_t line_no) {
    s = trim(s);
    if (s == "1" || s == "+1") return Orientation::up;
    if (s == "-1") return Orientation::down;
    throw ConfigError("poling", "line " + std::to_string(line_no) + ": sign must be +1 or -1");
}

std::string sign_text(Orientation o) { return o == Orientation::up ? "1" : "-1"; }

}  // namespace

PolingFormat parse_poling_format(std::string_view tag) {
    if (tag == "csv-boundaries") return PolingFormat::csv_boundaries;
    if (tag == "csv-widths") return PolingFormat::csv_widths;
    throw ConfigError("format", "unknown poling format '" + std::string(tag) + "'");
}

std::string_view to_string(PolingFormat format) {
    return format == PolingFormat::csv_boundaries ? "csv-boundaries" : "csv-widths";
}

std::string export_poling(const Grating& grating, PolingFormat format) {
    std::string out;
    out.reserve(32 * (grating.size() + 1));
    if (format == PolingFormat::csv_boundaries) {
        out.append(kBoundariesHeader).push_back('\n');
        double z = 0.0;
        for (const auto& d : grating.domains()) {
            const double end = z + d.width;
            out += format_number(z, 12) + "," + format_number(end, 12) + "," + sign_text(d.orientation) + "\n";
            z = end;
        }
    } else {
        out.append(kWidthsHeader).push_back('\n');
        for (const auto& d : grating.domains()) {
            out += format_number(d.width, 12) + "," + sign_text(d.orientation) + "\n";
        }
    }
    return out;
}

Grating import_poling(std::string_view text) {
    std::vector<Domain> domains;
    std::optional<PolingFormat> format;
    std::optional<double> prev_end;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (!format) {
            if (line == kBoundariesHeader) {
                format = PolingFormat::csv_boundaries;
            } else if (line == kWidthsHeader) {
                format = PolingFormat::csv_widths;
            } else {
                throw ConfigError("poling", "unrecognised header row '" + std::string(line) + "'");
            }
            continue;
        }
        const auto cols = split(line, ',');
        if (*format == PolingFormat::csv_boundaries) {
            if (cols.size() != 3) throw ConfigError("poling", "line " + std::to_string(line_no) + ": expected 3 columns");
            const double z0 = parse_double(cols[0], line_no);
            const double z1 = parse_double(cols[1], line_no);
            const double expected = prev_end.value_or(0.0);
            if (std::abs(z0 - expected) > 1e-9 * std::max(std::abs(z1), 1e-12)) {
                throw ConfigError("poling", "line " + std::to_string(line_no) + ": domain does not start where the previous one ends");
            }
            prev_end = z1;
            domains.push_back({z1 - z0, parse_sign(cols[2], line_no)});
        } else {
            if (cols.size() != 2) throw ConfigError("poling", "line " + std::to_string(line_no) + ": expected 2 columns");
            domains.push_back({parse_double(cols[0], line_no), parse_sign(cols[1], line_no)});
        }
    }
    if (!format) throw ConfigError("poling", "missing header row");
    return Grating(std::move(domains));
}

Grating read_poling_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("poling_file", "cannot open poling file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return import_poling(ss.str());
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string content_hash(const Grating& grating) {
    // FNV-1a over (sign, width in picometres) so both file formats agree.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& d : grating.domains()) {
        mix(d.orientation == Orientation::up ? 1U : 0U);
        mix(static_cast<std::uint64_t>(std::llround(d.width * 1e12)));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qpm
