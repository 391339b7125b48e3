#pragma once

#include <string>
#include <utility>
#include <vector>

namespace extwm::svg {

// Minimal deterministic SVG scene: fixed-precision coordinate formatting so
// that identical inputs always render byte-identical files.

struct Path {
  std::string style;  // stroke/fill attribute string
  std::vector<std::pair<double, double>> pts;
  bool closed = false;
};

struct Marker {
  double x = 0.0, y = 0.0;
  double radius = 3.0;
  std::string style;
};

struct Label {
  double x = 0.0, y = 0.0;
  std::string text;
};

struct Figure {
  std::string name;   // file stem, e.g. "phase_portrait"
  std::string title;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;  // data window
  int width = 840, height = 600;

  std::vector<Path> paths;
  std::vector<Marker> markers;
  std::vector<Label> labels;

  bool has_data() const;      // any path with >= 2 points, or any marker
  std::string render() const; // complete SVG document
};

}  // namespace extwm::svg
