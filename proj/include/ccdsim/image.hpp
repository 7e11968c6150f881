#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccdsim {

/// Thrown for any precondition violation on public operations.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rec. 709 luma weights, shared by the attack signal generator and the metrics.
inline constexpr double kLumaR = 0.2126;
inline constexpr double kLumaG = 0.7152;
inline constexpr double kLumaB = 0.0722;

/// Dense row-major 2-D buffer.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  const T& at(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool operator==(const Plane&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

/// Normalized RGB radiance map. Radiance 1.0 at the reference exposure exactly fills a well.
class Scene {
 public:
  Scene() = default;
  Scene(std::size_t width, std::size_t height, double fill = 0.0);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }

  double& at(std::size_t row, std::size_t col, int channel) {
    return data_[(row * width_ + col) * 3 + static_cast<std::size_t>(channel)];
  }
  double at(std::size_t row, std::size_t col, int channel) const {
    return data_[(row * width_ + col) * 3 + static_cast<std::size_t>(channel)];
  }
  void set_gray(std::size_t row, std::size_t col, double v);

  /// Throws InvalidInput if any value is non-finite or outside [0,1].
  void validate() const;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Demosaiced three-channel integer image at effective resolution.
class RgbFrame {
 public:
  RgbFrame() = default;
  RgbFrame(std::size_t width, std::size_t height, int adc_bits);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  int adc_bits() const { return adc_bits_; }
  std::uint16_t max_value() const { return static_cast<std::uint16_t>((1u << adc_bits_) - 1u); }

  std::uint16_t& at(std::size_t row, std::size_t col, int channel) {
    return data_[(row * width_ + col) * 3 + static_cast<std::size_t>(channel)];
  }
  std::uint16_t at(std::size_t row, std::size_t col, int channel) const {
    return data_[(row * width_ + col) * 3 + static_cast<std::size_t>(channel)];
  }
  std::span<const std::uint16_t> samples() const { return data_; }

  bool operator==(const RgbFrame&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  int adc_bits_ = 8;
  std::vector<std::uint16_t> data_;
};

/// Per-pixel luma (ADC counts, not normalized).
Plane<double> luma(const RgbFrame& frame);

/// Builds a frame directly from a scene (no sensor), values scaled to full scale.
RgbFrame frame_from_scene(const Scene& scene, int adc_bits = 8);

}  // namespace ccdsim
