#include "extwm/svg.hpp"

#include <cmath>
#include <cstdio>

namespace extwm::svg {

namespace {

constexpr int kMarginLeft = 56;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 44;

std::string num(double v) {
  // fixed precision keeps the output byte-stable across runs
  char buf[40];
  if (!std::isfinite(v)) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Mapper {
  double x0, x1, y0, y1;
  double px0, px1, py0, py1;
  double X(double x) const { return px0 + (x - x0) / (x1 - x0) * (px1 - px0); }
  double Y(double y) const { return py0 + (y - y0) / (y1 - y0) * (py1 - py0); }
};

// round tick spacing to 1/2/5 * 10^k covering roughly 5-8 ticks
double tick_step(double span) {
  double raw = span / 6.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double m = raw / mag;
  double step = (m < 1.5) ? 1.0 : (m < 3.5) ? 2.0 : (m < 7.5) ? 5.0 : 10.0;
  return step * mag;
}

void append_axes(std::string& out, const Mapper& mp) {
  out += "<g stroke=\"#888\" stroke-width=\"1\" fill=\"none\">\n";
  out += "<rect x=\"" + num(mp.px0) + "\" y=\"" + num(mp.py1) + "\" width=\"" +
         num(mp.px1 - mp.px0) + "\" height=\"" + num(mp.py0 - mp.py1) + "\"/>\n";
  out += "</g>\n";
  out += "<g font-family=\"monospace\" font-size=\"11\" fill=\"#444\">\n";
  double sx = tick_step(mp.x1 - mp.x0);
  for (double t = std::ceil(mp.x0 / sx) * sx; t <= mp.x1 + 1e-12; t += sx) {
    if (std::abs(t) < 1e-12) t = 0.0;
    out += "<line x1=\"" + num(mp.X(t)) + "\" y1=\"" + num(mp.py0) + "\" x2=\"" +
           num(mp.X(t)) + "\" y2=\"" + num(mp.py0 + 4) +
           "\" stroke=\"#888\"/>\n";
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "%g", t);
    out += "<text x=\"" + num(mp.X(t)) + "\" y=\"" + num(mp.py0 + 16) +
           "\" text-anchor=\"middle\">" + lbl + "</text>\n";
  }
  double sy = tick_step(mp.y1 - mp.y0);
  for (double t = std::ceil(mp.y0 / sy) * sy; t <= mp.y1 + 1e-12; t += sy) {
    if (std::abs(t) < 1e-12) t = 0.0;
    out += "<line x1=\"" + num(mp.px0 - 4) + "\" y1=\"" + num(mp.Y(t)) +
           "\" x2=\"" + num(mp.px0) + "\" y2=\"" + num(mp.Y(t)) +
           "\" stroke=\"#888\"/>\n";
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "%g", t);
    out += "<text x=\"" + num(mp.px0 - 7) + "\" y=\"" + num(mp.Y(t) + 4) +
           "\" text-anchor=\"end\">" + lbl + "</text>\n";
  }
  out += "</g>\n";
}

}  // namespace

bool Figure::has_data() const {
  for (const Path& p : paths)
    if (p.pts.size() >= 2) return true;
  return !markers.empty();
}

std::string Figure::render() const {
  Mapper mp{xmin, xmax, ymin, ymax,
            double(kMarginLeft), double(width - kMarginRight),
            double(height - kMarginBottom), double(kMarginTop)};

  std::string out;
  out.reserve(1 << 16);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!title.empty())
    out += "<text x=\"" + num(width / 2.0) +
           "\" y=\"22\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"14\" fill=\"#000\">" +
           title + "</text>\n";
  append_axes(out, mp);

  out += "<clipPath id=\"frame\"><rect x=\"" + num(mp.px0) + "\" y=\"" +
         num(mp.py1) + "\" width=\"" + num(mp.px1 - mp.px0) + "\" height=\"" +
         num(mp.py0 - mp.py1) + "\"/></clipPath>\n";
  out += "<g clip-path=\"url(#frame)\">\n";
  for (const Path& p : paths) {
    if (p.pts.size() < 2) continue;
    out += "<path d=\"";
    for (std::size_t i = 0; i < p.pts.size(); ++i) {
      out += (i == 0) ? "M " : "L ";
      out += num(mp.X(p.pts[i].first)) + " " + num(mp.Y(p.pts[i].second)) + " ";
    }
    if (p.closed) out += "Z";
    out += "\" " + p.style + "/>\n";
  }
  for (const Marker& m : markers)
    out += "<circle cx=\"" + num(mp.X(m.x)) + "\" cy=\"" + num(mp.Y(m.y)) +
           "\" r=\"" + num(m.radius) + "\" " + m.style + "/>\n";
  out += "</g>\n";
  out += "<g font-family=\"monospace\" font-size=\"12\" fill=\"#000\">\n";
  for (const Label& l : labels)
    out += "<text x=\"" + num(mp.X(l.x)) + "\" y=\"" + num(mp.Y(l.y)) + "\">" +
           l.text + "</text>\n";
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace extwm::svg
