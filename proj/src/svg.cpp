#include "synthmetric/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "synthmetric/text.hpp"

namespace synthmetric {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string diverging_color(double rho) {
  const double v = std::clamp(rho, -1.0, 1.0);
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::fabs(v))));
  const int r = v >= 0.0 ? 255 : fade;
  const int g = fade;
  const int b = v >= 0.0 ? fade : 255;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

namespace {

std::string num(double v) { return fixed(v, 1); }

std::string svg_open(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\" font-family=\"sans-serif\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" +
         num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
}

std::string text(double x, double y, std::string_view content, std::string_view extra = {}) {
  std::string out = "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"";
  if (!extra.empty()) out += " " + std::string(extra);
  out += ">" + xml_escape(content) + "</text>\n";
  return out;
}

std::string line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0) {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" +
         std::string(stroke) + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

}  // namespace

std::string render_heatmap_svg(const HeatmapTable& table, std::string_view title) {
  if (table.row_names.empty() || table.col_names.empty()) throw Error(ErrorCode::EmptyTable, "heatmap table is empty");
  constexpr double kCellW = 84.0;
  constexpr double kCellH = 32.0;
  constexpr double kLeft = 170.0;
  constexpr double kTop = 150.0;
  constexpr double kLegend = 70.0;
  const double width = kLeft + kCellW * static_cast<double>(table.col_names.size()) + kLegend;
  const double height = kTop + kCellH * static_cast<double>(table.row_names.size()) + 30.0;

  std::string out = svg_open(width, height);
  out += text(10.0, 24.0, title, "font-size=\"16\" font-weight=\"bold\"");
  for (std::size_t c = 0; c < table.col_names.size(); ++c) {
    const double x = kLeft + kCellW * (static_cast<double>(c) + 0.5);
    const double y = kTop - 8.0;
    out += text(x, y, table.col_names[c],
                "font-size=\"11\" text-anchor=\"start\" transform=\"rotate(-45 " + num(x) + " " + num(y) + ")\"");
  }
  for (std::size_t r = 0; r < table.row_names.size(); ++r) {
    const double y = kTop + kCellH * static_cast<double>(r);
    out += text(kLeft - 8.0, y + kCellH * 0.5 + 4.0, table.row_names[r], "font-size=\"12\" text-anchor=\"end\"");
    for (std::size_t c = 0; c < table.col_names.size(); ++c) {
      const double x = kLeft + kCellW * static_cast<double>(c);
      const auto& value = table.at(r, c);
      const std::string fill = value ? diverging_color(*value) : std::string("#d9d9d9");
      out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(kCellW) + "\" height=\"" + num(kCellH) +
             "\" fill=\"" + fill + "\" stroke=\"#ffffff\" stroke-width=\"1.0\"/>\n";
      if (value) {
        const char* ink = std::fabs(*value) > 0.6 ? "#ffffff" : "#000000";
        out += text(x + kCellW * 0.5, y + kCellH * 0.5 + 4.0, fixed(*value, 2),
                    std::string("font-size=\"12\" text-anchor=\"middle\" fill=\"") + ink + "\"");
      }
    }
  }
  // color legend
  const double lx = kLeft + kCellW * static_cast<double>(table.col_names.size()) + 20.0;
  const double steps = 10.0;
  const double lh = kCellH * static_cast<double>(table.row_names.size());
  for (int s = 0; s < 10; ++s) {
    const double rho = 1.0 - 2.0 * (static_cast<double>(s) + 0.5) / steps;
    out += "<rect x=\"" + num(lx) + "\" y=\"" + num(kTop + lh * s / steps) + "\" width=\"14.0\" height=\"" +
           num(lh / steps) + "\" fill=\"" + diverging_color(rho) + "\"/>\n";
  }
  out += text(lx + 18.0, kTop + 10.0, "1", "font-size=\"10\"");
  out += text(lx + 18.0, kTop + lh, "-1", "font-size=\"10\"");
  out += "</svg>\n";
  return out;
}

std::string render_boxplot_svg(const BoxplotTable& table, std::string_view target, std::string_view title) {
  const auto rows = table.for_target(target);
  if (rows.empty()) throw Error(ErrorCode::EmptySummaries, "no boxplot rows for target " + std::string(target));
  constexpr double kGlyphW = 70.0;
  constexpr double kLeft = 60.0;
  constexpr double kTop = 50.0;
  constexpr double kPlotH = 320.0;
  constexpr double kBottom = 130.0;
  const double width = kLeft + kGlyphW * static_cast<double>(rows.size()) + 20.0;
  const double height = kTop + kPlotH + kBottom;
  auto y_of = [&](double rho) { return kTop + (1.0 - std::clamp(rho, -1.0, 1.0)) * 0.5 * kPlotH; };

  std::string out = svg_open(width, height);
  out +=
      text(10.0, 24.0, std::string(title) + " (" + std::string(target) + ")", "font-size=\"16\" font-weight=\"bold\"");
  const double right = kLeft + kGlyphW * static_cast<double>(rows.size());
  for (double tick : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const double y = y_of(tick);
    out += line(kLeft, y, right, y, tick == 0.0 ? "#888888" : "#e0e0e0");
    out += text(kLeft - 6.0, y + 4.0, fixed(tick, 1), "font-size=\"10\" text-anchor=\"end\"");
  }
  out += line(kLeft, kTop, kLeft, kTop + kPlotH, "#000000");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& s = rows[i].summary;
    const double cx = kLeft + kGlyphW * (static_cast<double>(i) + 0.5);
    const double half = kGlyphW * 0.3;
    out += "<g>\n";
    out += line(cx, y_of(s.max), cx, y_of(s.q3), "#333333");
    out += line(cx, y_of(s.q1), cx, y_of(s.min), "#333333");
    out += line(cx - half * 0.5, y_of(s.max), cx + half * 0.5, y_of(s.max), "#333333");
    out += line(cx - half * 0.5, y_of(s.min), cx + half * 0.5, y_of(s.min), "#333333");
    out += "<rect x=\"" + num(cx - half) + "\" y=\"" + num(y_of(s.q3)) + "\" width=\"" + num(2.0 * half) +
           "\" height=\"" + num(y_of(s.q1) - y_of(s.q3)) + "\" fill=\"" +
           (rows[i].metric == "SuperMetric" ? "#fdae61" : "#abd9e9") + "\" stroke=\"#333333\" stroke-width=\"1.0\"/>\n";
    out += line(cx - half, y_of(s.median), cx + half, y_of(s.median), "#000000", 2.0);
    out += "</g>\n";
    const double ly = kTop + kPlotH + 12.0;
    out += text(cx, ly, rows[i].metric,
                "font-size=\"11\" text-anchor=\"end\" transform=\"rotate(-45 " + num(cx) + " " + num(ly) + ")\"");
  }
  out += "</svg>\n";
  return out;
}

std::string render_notice_svg(std::string_view title, std::string_view message) {
  std::string out = svg_open(480.0, 120.0);
  out += text(10.0, 24.0, title, "font-size=\"16\" font-weight=\"bold\"");
  out += text(10.0, 64.0, message, "font-size=\"12\" fill=\"#555555\"");
  return out + "</svg>\n";
}

}  // namespace synthmetric
