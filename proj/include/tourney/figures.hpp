#pragma once

#include <string>
#include <vector>

#include "tourney/dist.hpp"

namespace tourney {

/// The three piecewise-linear noise densities of the multi-modal example:
/// "red", "green" or "blue". Knots are unnormalized; the distribution is
/// renormalized on construction.
NoiseDistribution figure1_density(const std::string& color);

/// One CSV panel: a first column `t` and one column per series. NaN cells
/// (undefined values) are written empty.
struct Panel {
  std::string name;
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  ///< values[column][row]
};

struct Figure {
  std::string name;
  std::vector<Panel> panels;
};

/// "fig1" (three multi-modal densities) or "fig2" (the DFR example): panels for
/// the density, the likelihood ratio -f'/f, the hazard, and g(t; v) for
/// winner-take-all, two equal prizes and equal sharing with n = 3.
Figure make_figure(const std::string& which, double grid_fraction = 2e-4);

std::string panel_csv(const Panel& panel);

/// Line plot of a CSV panel. Depends only on the CSV text.
std::string render_svg(const std::string& csv, const std::string& title);

/// Writes <dir>/<figure>_<panel>.csv and .svg; returns the paths written.
std::vector<std::string> write_figure(const Figure& figure, const std::string& dir);

}  // namespace tourney
