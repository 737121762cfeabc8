#pragma once

#include <string>
#include <vector>

namespace nslab::io {

/// Write-then-rename so readers never observe partial files.
void write_text_atomic(const std::string& path, const std::string& content);

/// %.17g formatting: round-trippable doubles, byte-stable across runs.
std::string fmt(double x);

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Minimal log-log polyline plot with an optional guide line of the given
/// slope anchored at the first sample.
std::string svg_loglog(const std::vector<std::pair<double, double>>& series, double guide_slope,
                       const std::string& title);

}  // namespace nslab::io
