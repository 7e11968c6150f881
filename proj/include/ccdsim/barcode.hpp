#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ccdsim/image.hpp"

namespace ccdsim {

/// An EAN-13 symbol and its rendering geometry.
struct BarcodeSpec {
  std::string digits;  // 13 digits, last one the check digit
  std::size_t module_px = 2;
  std::size_t quiet_modules = 10;
  std::size_t bar_height_px = 80;

  std::size_t width_px() const { return (95 + 2 * quiet_modules) * module_px; }
  void validate() const;
};

/// EAN-13 check digit for 12 payload digits (weights 1,3,1,3,... from the left).
int ean13_checksum(const std::string& digits12);

/// Appends the check digit to a 12-digit payload.
BarcodeSpec make_barcode(const std::string& digits12, std::size_t module_px = 2,
                         std::size_t bar_height_px = 80);

/// The 95 module colors (true = bar) of an EAN-13 symbol, guards included.
std::vector<bool> ean13_modules(const std::string& digits13);

struct RenderStyle {
  double bar = 0.05;
  double background = 0.9;
};

/// Paints the symbol and its quiet zones with the top-left corner at (row, col).
void render_barcode(const BarcodeSpec& spec, Scene& canvas, std::size_t row, std::size_t col,
                    const RenderStyle& style = {});

struct DecoderOptions {
  std::size_t scanlines = 16;
  std::size_t threshold_window = 51;
  double threshold_offset = 0.0;
  double max_digit_distance = 1.4;  // summed |normalized run - pattern run| in modules
  double min_quiet_modules = 5.0;
  double guard_tolerance = 0.6;     // allowed |run/module - 1| for guard runs
};

/// Scanline EAN-13 decoder. Returns each distinct checksum-valid read once, ordered by
/// the number of scanlines that agreed on it (ties by first appearance).
std::vector<std::string> decode(const RgbFrame& frame, const DecoderOptions& options = {});

/// Decodes a single luma scanline; every returned string has passed the checksum.
std::vector<std::string> decode_scanline(const std::vector<double>& line,
                                         const DecoderOptions& options = {});

}  // namespace ccdsim
