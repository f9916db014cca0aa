#include "faultsim/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "faultsim/errors.hpp"

namespace faultsim::harness {

namespace {

constexpr int kWidth = 900;
constexpr int kChartHeight = 240;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 30;
constexpr int kMarginBottom = 35;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::vector<Eigen::Index> resolve_group(const Trajectory& traj, const std::string& group) {
  std::vector<Eigen::Index> cols;
  const auto& names = traj.columns();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == group || names[i].rfind(group + "_", 0) == 0)
      cols.push_back(static_cast<Eigen::Index>(i));
  if (cols.empty()) throw ConfigError("svg: no columns match channel group '" + group + "'");
  return cols;
}

std::string fmt(double v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

// Round tick spacing to 1/2/5 decades.
double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2.0 * mag;
  if (r < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

std::string svg_to_string(const Trajectory& traj, const std::vector<std::string>& groups,
                          std::optional<std::pair<double, double>> t_range) {
  if (traj.rows() < 2) throw ConfigError("svg: need at least 2 samples");
  if (groups.empty()) throw ConfigError("svg: need at least one channel group");

  const Eigen::VectorXd t = traj.column("t");
  Eigen::Index r0 = 0, r1 = traj.rows() - 1;
  if (t_range) {
    while (r0 < r1 && t[r0] < t_range->first) ++r0;
    while (r1 > r0 && t[r1] > t_range->second) --r1;
    if (r1 - r0 < 1) throw ConfigError("svg: t range selects fewer than 2 samples");
  }
  const double tmin = t[r0], tmax = t[r1];

  const int total_height = kMarginTop + static_cast<int>(groups.size()) * kChartHeight + 10;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << total_height << "\" viewBox=\"0 0 " << kWidth << " " << total_height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kChartHeight - kMarginTop - kMarginBottom;

  for (size_t gi = 0; gi < groups.size(); ++gi) {
    const auto cols = resolve_group(traj, groups[gi]);
    const double y_top = kMarginTop + static_cast<double>(gi) * kChartHeight;

    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (auto c : cols)
      for (Eigen::Index r = r0; r <= r1; ++r) {
        vmin = std::min(vmin, traj.cell(r, c));
        vmax = std::max(vmax, traj.cell(r, c));
      }
    if (vmin == vmax) {
      vmin -= 1.0;
      vmax += 1.0;
    } else {
      const double pad = 0.05 * (vmax - vmin);
      vmin -= pad;
      vmax += pad;
    }

    auto sx = [&](double tt) { return kMarginLeft + (tt - tmin) / (tmax - tmin) * plot_w; };
    auto sy = [&](double v) { return y_top + plot_h - (v - vmin) / (vmax - vmin) * plot_h; };

    s << "<g>\n";
    s << "<rect x=\"" << kMarginLeft << "\" y=\"" << y_top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    s << "<text x=\"" << kMarginLeft << "\" y=\"" << y_top - 8 << "\" font-size=\"14\">"
      << groups[gi] << "</text>\n";

    const double xstep = nice_step(tmax - tmin, 6);
    for (double tt = std::ceil(tmin / xstep) * xstep; tt <= tmax + 1e-12; tt += xstep) {
      const double px = sx(tt);
      s << "<line x1=\"" << px << "\" y1=\"" << y_top + plot_h << "\" x2=\"" << px << "\" y2=\""
        << y_top + plot_h + 5 << "\" stroke=\"#444\"/>\n";
      s << "<text x=\"" << px << "\" y=\"" << y_top + plot_h + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(tt) << "</text>\n";
    }
    const double ystep = nice_step(vmax - vmin, 4);
    for (double v = std::ceil(vmin / ystep) * ystep; v <= vmax + 1e-12; v += ystep) {
      const double py = sy(v);
      s << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
      s << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }

    // decimate long series to at most ~2000 points per polyline
    const Eigen::Index stride = std::max<Eigen::Index>(1, (r1 - r0) / 2000);
    for (size_t ci = 0; ci < cols.size(); ++ci) {
      const char* color = kPalette[ci % 6];
      s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
      for (Eigen::Index r = r0; r <= r1; r += stride)
        s << sx(t[r]) << ',' << sy(traj.cell(r, cols[static_cast<size_t>(ci)])) << ' ';
      if ((r1 - r0) % stride != 0)
        s << sx(t[r1]) << ',' << sy(traj.cell(r1, cols[static_cast<size_t>(ci)]));
      s << "\"/>\n";
      const double ly = y_top + 14 + 16 * static_cast<double>(ci);
      s << "<line x1=\"" << kMarginLeft + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kMarginLeft + plot_w + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
      s << "<text x=\"" << kMarginLeft + plot_w + 35 << "\" y=\"" << ly + 4
        << "\" font-size=\"11\">" << traj.columns()[static_cast<size_t>(cols[ci])]
        << "</text>\n";
    }
    s << "</g>\n";
  }
  s << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << total_height - 4
    << "\" font-size=\"12\" text-anchor=\"middle\">t [s]</text>\n";
  s << "</svg>\n";
  return s.str();
}

void emit_svg(const Trajectory& traj, const std::vector<std::string>& groups,
              const std::string& path, std::optional<std::pair<double, double>> t_range) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << svg_to_string(traj, groups, t_range);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace faultsim::harness
