#include "sbt/errors.hpp"
#include "sbt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sbt {

namespace {

constexpr const char* kHeader = "t,H0,dev_Lr,gap,vol_dev,per_dev";

void put(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

}  // namespace

FamilyRow family_row(const FamilyReport& r) { return {r.t, r.H0, r.dev_Lr, r.gap, r.vol_dev, r.per_dev}; }

std::string family_csv(const std::vector<FamilyRow>& rows) {
  std::string out = kHeader;
  out += '\n';
  for (const auto& r : rows) {
    for (double v : {r.t, r.H0, r.dev_Lr, r.gap, r.vol_dev, r.per_dev}) {
      put(out, v);
      out += ',';
    }
    out.back() = '\n';
  }
  return out;
}

std::vector<FamilyRow> parse_family_csv(std::string_view text) {
  std::vector<FamilyRow> rows;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (lineno == 1) {
      if (line != kHeader) throw ConfigError("unexpected CSV header '" + std::string(line) + "'");
      continue;
    }
    if (line.empty()) continue;
    double v[6];
    const char* p = line.data();
    const char* stop = line.data() + line.size();
    for (int i = 0; i < 6; ++i) {
      const auto [q, ec] = std::from_chars(p, stop, v[i]);
      if (ec != std::errc() || (i < 5 && (q == stop || *q != ',')) || (i == 5 && q != stop))
        throw ConfigError("malformed CSV line " + std::to_string(lineno));
      p = q + 1;
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return rows;
}

std::string loglog_svg(const std::vector<PlotSeries>& series, const std::string& x_label, const std::string& y_label,
                       const std::string& title) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
      x0 = std::min(x0, std::log10(s.x[i]));
      x1 = std::max(x1, std::log10(s.x[i]));
      y0 = std::min(y0, std::log10(s.y[i]));
      y1 = std::max(y1, std::log10(s.y[i]));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);

  const double w = 640, h = 480, left = 80, right = 180, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  const auto px = [&](double v) { return left + (std::log10(v) - x0) / (x1 - x0) * pw; };
  const auto py = [&](double v) { return top + ph - (std::log10(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = x0; d <= x1 + 1e-9; d += 1) {
    const double x = left + (d - x0) / (x1 - x0) * pw;
    o << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\"" << top + ph + 5
      << "\" stroke=\"black\"/><text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e"
      << static_cast<int>(d) << "</text>\n";
  }
  for (double d = y0; d <= y1 + 1e-9; d += 1) {
    const double y = top + ph - (d - y0) / (y1 - y0) * ph;
    o << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
      << "\" stroke=\"black\"/><text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e"
      << static_cast<int>(d) << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">" << escape(x_label)
    << "</text>\n";
  o << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << top + ph / 2
    << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 5];
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
        o << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (s.x[i] > 0 && s.y[i] > 0) o << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      }
      o << "\"/>\n";
    }
    const double ly = top + 12 + 18 * k;
    o << "<rect x=\"" << w - right + 12 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\"" << color
      << "\"/><text x=\"" << w - right + 28 << "\" y=\"" << ly + 1 << "\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace sbt
