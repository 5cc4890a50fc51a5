#include "tourney/figures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "tourney/equilibrium.hpp"
#include "tourney/errors.hpp"
#include "tourney/parallel.hpp"

namespace tourney {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kPlayers = 3;

std::string number(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

std::vector<double> grid_over(double lo, double hi, double fraction) {
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / fraction));
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps);
  return t;
}

double safe_hazard(const NoiseDistribution& d, double x) {
  return d.survival(x) < 1e-12 ? kNaN : hazard(d, x);
}

double safe_ratio(const NoiseDistribution& d, double x) {
  return d.pdf(x) <= 0.0 ? kNaN : likelihood_ratio(d, x);
}

struct Series {
  std::string label;
  NoiseDistribution dist;
};

Figure build(const std::string& name, const std::vector<Series>& series, double lo, double hi,
             double fraction) {
  const std::vector<double> t = grid_over(lo, hi, fraction);
  std::vector<std::string> comments;
  for (const Series& s : series) {
    if (s.dist.family() == Family::piecewise_linear) {
      comments.push_back("normalization " + s.label + " " + number(s.dist.normalization_factor()));
    }
  }

  Panel density{"density", comments, {"t"}, {t}};
  Panel ratio{"likelihood_ratio", comments, {"t"}, {t}};
  Panel hz{"hazard", comments, {"t"}, {t}};
  Panel g{"marginal_benefit", comments, {"t"}, {t}};
  g.comments.push_back("players 3");

  const PrizeSchedule schedules[] = {PrizeSchedule::winner_take_all(kPlayers),
                                     PrizeSchedule::top_equal(2, kPlayers),
                                     PrizeSchedule::equal_sharing(kPlayers)};
  const char* schedule_names[] = {"wta", "two_prizes", "eps"};

  for (const Series& s : series) {
    std::vector<double> f(t.size()), lr(t.size()), h(t.size());
    parallel_for(t.size(), [&](std::size_t i) {
      f[i] = s.dist.pdf(t[i]);
      lr[i] = safe_ratio(s.dist, t[i]);
      h[i] = safe_hazard(s.dist, t[i]);
    });
    density.columns.push_back(s.label);
    density.values.push_back(std::move(f));
    ratio.columns.push_back(s.label);
    ratio.values.push_back(std::move(lr));
    hz.columns.push_back(s.label);
    hz.values.push_back(std::move(h));
    for (int k = 0; k < 3; ++k) {
      g.columns.push_back(series.size() == 1 ? schedule_names[k] : s.label + "_" + schedule_names[k]);
      g.values.push_back(total_marginal_benefit_curve(s.dist, schedules[k], t));
    }
  }
  return {name, {density, ratio, hz, g}};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

NoiseDistribution figure1_density(const std::string& color) {
  double peak = 0.0;
  if (color == "red") {
    peak = 19.0;
  } else if (color == "green") {
    peak = 17.0;
  } else if (color == "blue") {
    peak = 18.0;
  } else {
    throw InvalidInput("figure1_density: unknown series '" + color + "'");
  }
  const double xs[] = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.75};
  const double fs[] = {20.0, 16.0, 21.0, 16.0, peak, 16.0, 0.0};
  std::vector<Knot> knots;
  for (int i = 0; i < 7; ++i) knots.push_back({xs[i], fs[i] / 16.0});
  return NoiseDistribution::piecewise_linear(std::move(knots));
}

Figure make_figure(const std::string& which, double grid_fraction) {
  if (!(grid_fraction > 0.0 && grid_fraction <= 0.1)) {
    throw InvalidInput("make_figure: grid fraction must lie in (0, 0.1]");
  }
  if (which == "fig1") {
    return build("fig1",
                 {{"red", figure1_density("red")},
                  {"green", figure1_density("green")},
                  {"blue", figure1_density("blue")}},
                 0.0, 1.75, grid_fraction);
  }
  if (which == "fig2") return build("fig2", {{"dfr", NoiseDistribution::erf_dfr()}}, 0.0, 3.0, grid_fraction);
  throw InvalidInput("unknown figure '" + which + "', expected fig1 or fig2");
}

std::string panel_csv(const Panel& panel) {
  std::ostringstream out;
  for (const std::string& c : panel.comments) out << "# " << c << "\n";
  for (std::size_t c = 0; c < panel.columns.size(); ++c) out << (c ? "," : "") << panel.columns[c];
  out << "\n";
  const std::size_t rows = panel.values.empty() ? 0 : panel.values.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < panel.values.size(); ++c) {
      if (c) out << ",";
      const double v = panel.values[c][r];
      if (std::isfinite(v)) out << number(v);
    }
    out << "\n";
  }
  return out.str();
}

std::string render_svg(const std::string& csv, const std::string& title) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cells = split(line, ',');
    if (header.empty()) {
      header = cells;
      cols.resize(header.size());
      continue;
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      cols[c].push_back(c < cells.size() && !cells[c].empty() ? std::stod(cells[c]) : kNaN);
    }
  }
  if (header.size() < 2 || cols[0].empty()) throw InvalidInput("render_svg: CSV has no data");

  constexpr double W = 640, H = 400, L = 60, R = 150, T = 40, B = 40;
  static const char* palette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  double xmin = cols[0].front(), xmax = cols[0].back();
  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (std::size_t c = 1; c < cols.size(); ++c) {
    for (double v : cols[c]) {
      if (std::isfinite(v)) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    }
  }
  if (!std::isfinite(ymin)) ymin = 0.0, ymax = 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  svg << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const std::string& text, const char* anchor) {
    svg << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\""
        << anchor << "\">" << text << "</text>\n";
  };
  label(L, H - B + 16, number(xmin), "middle");
  label(W - R, H - B + 16, number(xmax), "middle");
  label(L - 6, H - B, number(ymin), "end");
  label(L - 6, T + 10, number(ymax), "end");
  label((L + W - R) / 2, H - 8, header[0], "middle");

  for (std::size_t c = 1; c < cols.size(); ++c) {
    const char* colour = palette[(c - 1) % 10];
    std::ostringstream path;
    bool open = false;
    for (std::size_t i = 0; i < cols[c].size(); ++i) {
      const double v = cols[c][i];
      if (!std::isfinite(v)) {
        open = false;
        continue;
      }
      path << (open ? " L" : " M") << number(px(cols[0][i])) << "," << number(py(v));
      open = true;
    }
    svg << "<path fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" d=\"" << path.str() << "\"/>\n";
    const double ly = T + 14.0 * static_cast<double>(c);
    svg << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    label(W - R + 34, ly + 4, header[c], "start");
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> write_figure(const Figure& figure, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const Panel& panel : figure.panels) {
    const std::string base = (std::filesystem::path(dir) / (figure.name + "_" + panel.name)).string();
    const std::string csv = panel_csv(panel);
    std::ofstream(base + ".csv") << csv;
    std::ofstream(base + ".svg") << render_svg(csv, figure.name + " " + panel.name);
    written.push_back(base + ".csv");
    written.push_back(base + ".svg");
  }
  return written;
}

}  // namespace tourney
