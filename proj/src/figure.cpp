#include "so3mean/harness.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace so3mean {

namespace {

constexpr int kCanvas = 640;
constexpr double kScale = 230.0;  // pixels per unit length
constexpr double kAzimuth = 35.0 * std::numbers::pi / 180.0;
constexpr double kElevation = 25.0 * std::numbers::pi / 180.0;

constexpr const char* kCloudColors[3] = {"#e6851e", "#2ca25f", "#8856a7"};
constexpr const char* kPredictedColor = "#1f4fff";
constexpr const char* kOracleColor = "#e41a1c";

// Fixed orthographic camera.
struct Camera {
  Eigen::Vector3d right{-std::sin(kAzimuth), std::cos(kAzimuth), 0.0};
  Eigen::Vector3d up{-std::sin(kElevation) * std::cos(kAzimuth),
                     -std::sin(kElevation) * std::sin(kAzimuth), std::cos(kElevation)};

  std::pair<double, double> project(const Eigen::Vector3d& p) const {
    const double c = 0.5 * kCanvas;
    return {c + kScale * p.dot(right), c - kScale * p.dot(up)};
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  // Avoid "-0.000" so identical geometry always prints identically.
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string line(const Camera& cam, const Eigen::Vector3d& tip, const char* color, double width,
                 const char* dash = nullptr) {
  const auto [x0, y0] = cam.project(Eigen::Vector3d::Zero());
  const auto [x1, y1] = cam.project(tip);
  std::string out = "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) +
                    "\" y2=\"" + fmt(y1) + "\" stroke=\"" + color + "\" stroke-width=\"" +
                    fmt(width) + "\"";
  if (dash) out += std::string(" stroke-dasharray=\"") + dash + "\"";
  return out + "/>\n";
}

}  // namespace

std::string render_figure_svg(const FigureInput& input) {
  const Camera cam;
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kCanvas) +
         "\" height=\"" + std::to_string(kCanvas) + "\" viewBox=\"0 0 " +
         std::to_string(kCanvas) + " " + std::to_string(kCanvas) + "\">\n";
  svg += "<!-- config-hash: " + input.config_hash + " -->\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto [cx, cy] = cam.project(Eigen::Vector3d::Zero());
  svg += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(kScale) +
         "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";

  svg += "<g id=\"cloud\">\n";
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d e = Eigen::Vector3d::Unit(i);
    for (const auto& x : input.cloud) {
      const auto [px, py] = cam.project(x.act(e));
      svg += "<circle cx=\"" + fmt(px) + "\" cy=\"" + fmt(py) + "\" r=\"1.2\" fill=\"" +
             kCloudColors[i] + "\" fill-opacity=\"0.5\"/>\n";
    }
  }
  svg += "</g>\n";

  svg += "<g id=\"arrows\">\n";
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d e = Eigen::Vector3d::Unit(i);
    svg += line(cam, e, "black", 1.5);
    svg += line(cam, input.oracle_mean.act(e), kOracleColor, 2.5);
    svg += line(cam, input.predicted_mean.act(e), kPredictedColor, 1.5, "6,3");
  }
  svg += "</g>\n";

  svg += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"13\">\n";
  const char* labels[] = {"canonical basis e1, e2, e3", "Frechet mean, Monte Carlo oracle",
                          "Frechet mean, moment ODE prediction"};
  const char* colors[] = {"black", kOracleColor, kPredictedColor};
  for (int i = 0; i < 3; ++i) {
    const std::string y = std::to_string(24 + 18 * i);
    svg += "<line x1=\"16\" y1=\"" + y + "\" x2=\"40\" y2=\"" + y + "\" stroke=\"" + colors[i] +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"48\" y=\"" + std::to_string(28 + 18 * i) + "\">" + labels[i] + "</text>\n";
  }
  svg += "<text x=\"16\" y=\"" + std::to_string(kCanvas - 16) + "\">samples: " +
         std::to_string(input.cloud.size()) + "  config " + input.config_hash + "</text>\n";
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace so3mean
