#include "ccdsim/image.hpp"

#include <cmath>

namespace ccdsim {

Scene::Scene(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height * 3, fill) {}

void Scene::set_gray(std::size_t row, std::size_t col, double v) {
  for (int c = 0; c < 3; ++c) at(row, col, c) = v;
}

void Scene::validate() const {
  for (double v : data_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw InvalidInput("scene radiance must be finite and within [0,1]");
    }
  }
}

RgbFrame::RgbFrame(std::size_t width, std::size_t height, int adc_bits)
    : width_(width), height_(height), adc_bits_(adc_bits), data_(width * height * 3, 0) {
  if (adc_bits < 1 || adc_bits > 16) throw InvalidInput("adc_bits must be within [1,16]");
}

Plane<double> luma(const RgbFrame& frame) {
  Plane<double> out(frame.width(), frame.height());
  auto s = frame.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = kLumaR * s[3 * i] + kLumaG * s[3 * i + 1] + kLumaB * s[3 * i + 2];
  }
  return out;
}

RgbFrame frame_from_scene(const Scene& scene, int adc_bits) {
  RgbFrame out(scene.width(), scene.height(), adc_bits);
  const double full = out.max_value();
  for (std::size_t r = 0; r < scene.height(); ++r) {
    for (std::size_t c = 0; c < scene.width(); ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        out.at(r, c, ch) = static_cast<std::uint16_t>(std::floor(scene.at(r, c, ch) * full + 0.5));
      }
    }
  }
  return out;
}

}  // namespace ccdsim
