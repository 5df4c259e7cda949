#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "shapebias/pool.hpp"

namespace shapebias {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;
constexpr int kTicks = 5;

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) return {lo - 0.5, hi + 0.5};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_scatter(std::span<const ModelRecord> pool, const MetricPair& pair,
                           const CorrelationReport& fit) {
  std::vector<std::pair<double, double>> points;
  for (const auto& model : pool) {
    const auto x = metric_value(model, pair.x);
    const auto y = metric_value(model, pair.y);
    if (x && y) points.emplace_back(*x, *y);
  }

  Range xr{0.0, 1.0}, yr{0.0, 1.0};
  if (!points.empty()) {
    auto [xmin, xmax] = std::minmax_element(points.begin(), points.end(),
                                            [](auto& a, auto& b) { return a.first < b.first; });
    auto [ymin, ymax] = std::minmax_element(points.begin(), points.end(),
                                            [](auto& a, auto& b) { return a.second < b.second; });
    xr = padded(xmin->first, xmax->first);
    yr = padded(ymin->second, ymax->second);
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  const std::string x_name(to_string(pair.x));
  const std::string y_name(to_string(pair.y));

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
         fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<defs><clipPath id=\"plot-area\"><rect x=\"" + fixed(kLeft, 2) + "\" y=\"" +
         fixed(kTop, 2) + "\" width=\"" + fixed(plot_w, 2) + "\" height=\"" + fixed(plot_h, 2) +
         "\"/></clipPath></defs>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(kWidth / 2, 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(fit.scope) + ": " + escape(y_name) + " vs " + escape(x_name) + "</text>\n";

  // Axes and ticks.
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(kTop + plot_h, 2) + "\" x2=\"" +
         fixed(kLeft + plot_w, 2) + "\" y2=\"" + fixed(kTop + plot_h, 2) + "\"/>\n";
  svg += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(kTop, 2) + "\" x2=\"" +
         fixed(kLeft, 2) + "\" y2=\"" + fixed(kTop + plot_h, 2) + "\"/>\n";
  svg += "</g>\n<g fill=\"black\">\n";
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = xr.lo + (xr.hi - xr.lo) * t / kTicks;
    const double yv = yr.lo + (yr.hi - yr.lo) * t / kTicks;
    svg += "<text x=\"" + fixed(sx(xv), 2) + "\" y=\"" + fixed(kTop + plot_h + 18, 2) +
           "\" text-anchor=\"middle\">" + fixed(xv, 2) + "</text>\n";
    svg += "<text x=\"" + fixed(kLeft - 8, 2) + "\" y=\"" + fixed(sy(yv) + 4, 2) +
           "\" text-anchor=\"end\">" + fixed(yv, 2) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + plot_w / 2, 2) + "\" y=\"" + fixed(kHeight - 15, 2) +
         "\" text-anchor=\"middle\">" + escape(x_name) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + fixed(kTop + plot_h / 2, 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " + fixed(kTop + plot_h / 2, 2) +
         ")\">" + escape(y_name) + "</text>\n";
  svg += "</g>\n";

  svg += "<g fill=\"steelblue\" fill-opacity=\"0.7\">\n";
  for (const auto& [x, y] : points) {
    svg += "<circle cx=\"" + fixed(sx(x), 2) + "\" cy=\"" + fixed(sy(y), 2) + "\" r=\"3\"/>\n";
  }
  svg += "</g>\n";

  svg += "<line clip-path=\"url(#plot-area)\" stroke=\"firebrick\" stroke-width=\"2\" x1=\"" +
         fixed(sx(xr.lo), 2) + "\" y1=\"" + fixed(sy(fit.slope * xr.lo + fit.intercept), 2) +
         "\" x2=\"" + fixed(sx(xr.hi), 2) + "\" y2=\"" +
         fixed(sy(fit.slope * xr.hi + fit.intercept), 2) + "\"/>\n";
  svg += "<text x=\"" + fixed(kLeft + 10, 2) + "\" y=\"" + fixed(kTop + 16, 2) + "\">r = " +
         fixed(fit.r, 2) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

void emit_scatter(std::span<const ModelRecord> pool, const MetricPair& pair,
                  const CorrelationReport& fit, const std::filesystem::path& out) {
  write_file_atomic(out, render_scatter(pool, pair, fit));
}

}  // namespace shapebias
