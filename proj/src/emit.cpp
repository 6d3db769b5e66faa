#include "beliaev/emit.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace beliaev {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void write_csv(const ScanResult& table, std::ostream& os) {
  for (const auto& [key, value] : table.meta) {
    os << "# " << key << "=" << value << "\n";
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    os << (c ? "," : "") << table.columns[c];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::logic_error("scan row width does not match header");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << format17(row[c]);
    }
    os << "\n";
  }
}

void write_json(const ScanResult& table, std::ostream& os) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.meta) meta[key] = value;
  j["meta"] = meta;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  os << j.dump(2) << "\n";
}

void write_svg(const ScanResult& table, std::size_t xcol, std::size_t ycol,
               bool logx, bool logy, std::ostream& os) {
  if (xcol >= table.columns.size() || ycol >= table.columns.size()) {
    throw std::invalid_argument("svg: column index out of range");
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : table.rows) {
    double x = row[xcol], y = row[ycol];
    if (logx) {
      if (x == 0.0) continue;
      x = std::log10(std::fabs(x));
    }
    if (logy) {
      if (y == 0.0) continue;
      y = std::log10(std::fabs(y));
    }
    pts.emplace_back(x, y);
  }
  const double w = 640, h = 480, pad = 56;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!pts.empty()) {
    xmin = xmax = pts[0].first;
    ymin = ymax = pts[0].second;
    for (auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto sx = [&](double x) {
    return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad);
  };
  auto sy = [&](double y) {
    return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad);
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\">\n";
  os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << w - 2 * pad
     << "\" height=\"" << h - 2 * pad
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">"
     << (logx ? "log10 " : "") << table.columns[xcol] << "</text>\n";
  os << "<text x=\"14\" y=\"" << h / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 "
     << h / 2 << ")\">" << (logy ? "log10 " : "") << table.columns[ycol]
     << "</text>\n";
  char lab[64];
  std::snprintf(lab, sizeof(lab), "%.4g", xmin);
  os << "<text x=\"" << pad << "\" y=\"" << h - pad + 16
     << "\" font-size=\"11\">" << lab << "</text>\n";
  std::snprintf(lab, sizeof(lab), "%.4g", xmax);
  os << "<text x=\"" << w - pad << "\" y=\"" << h - pad + 16
     << "\" text-anchor=\"end\" font-size=\"11\">" << lab << "</text>\n";
  std::snprintf(lab, sizeof(lab), "%.4g", ymin);
  os << "<text x=\"" << pad - 4 << "\" y=\"" << h - pad
     << "\" text-anchor=\"end\" font-size=\"11\">" << lab << "</text>\n";
  std::snprintf(lab, sizeof(lab), "%.4g", ymax);
  os << "<text x=\"" << pad - 4 << "\" y=\"" << pad + 4
     << "\" text-anchor=\"end\" font-size=\"11\">" << lab << "</text>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" "
        "points=\"";
  for (auto& [x, y] : pts) os << sx(x) << "," << sy(y) << " ";
  os << "\"/>\n</svg>\n";
}

std::string fnv1a_hex(const std::string& payload) {
  unsigned long long hash = 14695981039346656037ull;
  for (unsigned char ch : payload) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", hash);
  return buf;
}

}  // namespace beliaev
