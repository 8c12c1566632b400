#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "internal.hpp"

namespace selfnorm::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 60.0;

std::string escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      case '&': r += "&amp;"; break;
      case '"': r += "&quot;"; break;
      default: r += c;
    }
  }
  return r;
}

}  // namespace

std::string rate_plot_svg(const RateReport& report, const std::string& title) {
  std::vector<double> lx, ly;
  for (const auto& [n, e] : report.pairs) {
    lx.push_back(std::log10(n));
    ly.push_back(std::log10(e));
  }
  // Fitted line in log10 coordinates: log10 e = slope log10 n + intercept / ln 10.
  const double b = report.intercept / std::log(10.0);
  auto [xmin_it, xmax_it] = std::minmax_element(lx.begin(), lx.end());
  double xmin = *xmin_it, xmax = *xmax_it;
  double ymin = *std::min_element(ly.begin(), ly.end());
  double ymax = *std::max_element(ly.begin(), ly.end());
  for (double x : {xmin, xmax}) {
    ymin = std::min(ymin, report.slope * x + b);
    ymax = std::max(ymax, report.slope * x + b);
  }
  const double padx = 0.05 * std::max(xmax - xmin, 1e-3);
  const double pady = 0.05 * std::max(ymax - ymin, 1e-3);
  xmin -= padx, xmax += padx, ymin -= pady, ymax += pady;
  const auto px = [&](double x) {
    return kMargin + (x - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin);
  };
  const auto py = [&](double y) {
    return kHeight - kMargin - (y - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\">" << escape(title)
    << "</text>\n";
  s << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
    << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
    << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 20
    << "\" text-anchor=\"middle\">log10(n)</text>\n";
  s << "<text x=\"18\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << kHeight / 2 << ")\">log10(error)</text>\n";
  for (std::size_t i = 0; i < lx.size(); ++i) {
    s << "<text x=\"" << px(lx[i]) << "\" y=\"" << kHeight - kMargin + 16
      << "\" text-anchor=\"middle\">" << format_number(report.pairs[i].first) << "</text>\n";
  }
  for (double y : {ymin + pady, ymax - pady}) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", y);
    s << "<text x=\"" << kMargin - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << buf
      << "</text>\n";
  }
  s << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < lx.size(); ++i) s << (i ? " " : "") << px(lx[i]) << ',' << py(ly[i]);
  s << "\"/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i) {
    s << "<circle cx=\"" << px(lx[i]) << "\" cy=\"" << py(ly[i]) << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
  }
  const double x0 = xmin + padx, x1 = xmax - padx;
  s << "<line x1=\"" << px(x0) << "\" y1=\"" << py(report.slope * x0 + b) << "\" x2=\"" << px(x1)
    << "\" y2=\"" << py(report.slope * x1 + b)
    << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
  char legend[64];
  std::snprintf(legend, sizeof legend, "fitted slope %.3f", report.slope);
  s << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kMargin - 8
    << "\" text-anchor=\"end\" fill=\"#d62728\">" << legend << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace selfnorm::cli
