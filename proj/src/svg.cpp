#include "critlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "critlab/io.hpp"

namespace critlab {

namespace {

struct Series {
  std::vector<double> x, y;
};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void emit_polyline(std::ostringstream& os, const Series& s, double x0, double y0,
                   double w, double h, double xmin, double xmax, double ymin,
                   double ymax, const char* color, bool dashed) {
  if (s.x.empty()) return;
  double xr = xmax - xmin > 0 ? xmax - xmin : 1.0;
  double yr = ymax - ymin > 0 ? ymax - ymin : 1.0;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"";
  if (dashed) os << " stroke-dasharray=\"4 3\"";
  os << " points=\"";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    double px = x0 + (s.x[i] - xmin) / xr * w;
    double py = y0 + h - (s.y[i] - ymin) / yr * h;
    if (i) os << ' ';
    os << coord(px) << ',' << coord(py);
  }
  os << "\"/>\n";
}

}  // namespace

void write_train_svg(const std::string& path, const TrainRecord& record,
                     const std::string& title) {
  struct Panel {
    const char* name;
    int metric;  // 0=loss, 1=acc, 2=norm
  };
  const Panel panels[] = {{"loss", 0}, {"acc", 1}, {"norm", 2}};
  const int width = 640, panel_h = 150, pad = 45, gap = 30;
  const int height = pad + 3 * panel_h + 2 * gap + 20;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<text x=\"" << pad << "\" y=\"18\" font-family=\"monospace\" "
        "font-size=\"13\">"
     << title << "</text>\n";
  os << "<text x=\"" << width - 200 << "\" y=\"18\" font-family=\"monospace\" "
        "font-size=\"11\">train dashed, test solid</text>\n";

  for (int pi = 0; pi < 3; ++pi) {
    double y0 = pad + pi * (panel_h + gap);
    double x0 = pad, w = width - 2 * pad, h = panel_h;

    Series train_s, test_s;
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    double xmax = 0;
    for (const auto& r : record.rows) {
      double v = panels[pi].metric == 0 ? r.loss
                 : panels[pi].metric == 1 ? r.acc
                                          : r.norm;
      if (r.split == Split::train) {
        train_s.x.push_back(r.epoch);
        train_s.y.push_back(v);
      } else if (r.split == Split::test) {
        test_s.x.push_back(r.epoch);
        test_s.y.push_back(v);
      } else {
        continue;
      }
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
      xmax = std::max(xmax, static_cast<double>(r.epoch));
    }
    if (ymin > ymax) { ymin = 0; ymax = 1; }
    if (ymax == ymin) { ymax = ymin + 1; }

    os << "<rect x=\"" << coord(x0) << "\" y=\"" << coord(y0) << "\" width=\""
       << coord(w) << "\" height=\"" << coord(h)
       << "\" fill=\"none\" stroke=\"#999\"/>\n";
    os << "<text x=\"" << coord(x0) << "\" y=\"" << coord(y0 - 6)
       << "\" font-family=\"monospace\" font-size=\"11\">" << panels[pi].name
       << " [" << fmt_g9(ymin) << ", " << fmt_g9(ymax) << "]</text>\n";
    emit_polyline(os, train_s, x0, y0, w, h, 0, xmax, ymin, ymax, "#1f77b4", true);
    emit_polyline(os, test_s, x0, y0, w, h, 0, xmax, ymin, ymax, "#d62728", false);
  }
  os << "</svg>\n";
  write_text_file(path, os.str());
}

}  // namespace critlab
