#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "uflow/csv.hpp"

namespace uflow {

void svg_plot(const std::string& path, const std::string& title,
              const std::vector<std::vector<std::pair<double, double>>>& series,
              const std::vector<std::string>& labels) {
  const int W = 760, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (auto [x, y] : s) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
      << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\""
      << H - MB << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double x = xmin + k * (xmax - xmin) / 4.0;
    double y = ymin + k * (ymax - ymin) / 4.0;
    out << "<text x=\"" << px(x) << "\" y=\"" << H - MB + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt17(x).substr(0, 8)
        << "</text>\n";
    out << "<text x=\"" << ML - 6 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt17(y).substr(0, 8)
        << "</text>\n";
  }
  for (size_t si = 0; si < series.size(); ++si) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[si % 5]
        << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[si])
      if (std::isfinite(x) && std::isfinite(y)) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    if (si < labels.size())
      out << "<text x=\"" << W - MR - 150 << "\" y=\"" << MT + 16 * (si + 1)
          << "\" font-size=\"12\" fill=\"" << colors[si % 5] << "\">" << labels[si]
          << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace uflow
