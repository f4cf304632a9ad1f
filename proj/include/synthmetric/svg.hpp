#pragma once

#include <string>
#include <string_view>

#include "synthmetric/analysis.hpp"

namespace synthmetric {

// Static, byte-deterministic SVG renderings of the correlation tables.

// One rect per cell on a blue (-1) / white (0) / red (+1) scale with the value printed to
// two decimals; undefined cells are grey and unlabeled.
std::string render_heatmap_svg(const HeatmapTable& table,
                               std::string_view title = "Mean correlation with recall and F1");

// One box-and-whiskers glyph per row of `target` ("Pooled" by default) on a fixed [-1, 1] axis.
std::string render_boxplot_svg(const BoxplotTable& table, std::string_view target = "Pooled",
                               std::string_view title = "Correlation with utility across generators");

// Stand-in figure when there is nothing to draw, e.g. no correlation cell is defined.
std::string render_notice_svg(std::string_view title, std::string_view message);

// "#rrggbb" for a correlation value.
std::string diverging_color(double rho);

std::string xml_escape(std::string_view text);

}  // namespace synthmetric
