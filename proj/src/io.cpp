#include "nslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nslab::io {

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string svg_loglog(const std::vector<std::pair<double, double>>& series, double guide_slope,
                       const std::string& title) {
  const int W = 640, H = 480, M = 56;
  double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [x, y] : series) {
    if (!(x > 0.0) || !(y > 0.0)) continue;
    const double lx = std::log10(x), ly = std::log10(y);
    pts.emplace_back(lx, ly);
    lx0 = std::min(lx0, lx);
    lx1 = std::max(lx1, lx);
    ly0 = std::min(ly0, ly);
    ly1 = std::max(ly1, ly);
  }
  if (pts.empty()) return "<svg xmlns='http://www.w3.org/2000/svg'/>\n";
  if (lx1 - lx0 < 1e-12) lx1 = lx0 + 1.0;
  if (ly1 - ly0 < 1e-12) ly1 = ly0 + 1.0;
  auto px = [&](double lx) { return M + (W - 2 * M) * (lx - lx0) / (lx1 - lx0); };
  auto py = [&](double ly) { return H - M - (H - 2 * M) * (ly - ly0) / (ly1 - ly0); };

  std::string s = "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(W) + "' height='" +
                  std::to_string(H) + "'>\n";
  s += "<rect width='100%' height='100%' fill='white'/>\n";
  s += "<text x='" + std::to_string(M) + "' y='24' font-size='14'>" + title + "</text>\n";
  s += "<polyline fill='none' stroke='black' points='";
  for (const auto& [lx, ly] : pts) s += fmt(px(lx)) + "," + fmt(py(ly)) + " ";
  s += "'/>\n";
  // guide line through the first point with the target slope
  const double gx0 = pts.front().first, gy0 = pts.front().second;
  const double gx1 = lx1, gy1 = gy0 + guide_slope * (lx1 - gx0);
  s += "<line stroke='gray' stroke-dasharray='6 3' x1='" + fmt(px(gx0)) + "' y1='" + fmt(py(gy0)) +
       "' x2='" + fmt(px(gx1)) + "' y2='" + fmt(py(gy1)) + "'/>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace nslab::io
