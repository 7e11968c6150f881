#include "ccdsim/barcode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

namespace ccdsim {

namespace {

// Run widths (space, bar, space, bar) of the L set; G is L mirrored, R is L with colors swapped.
constexpr std::array<std::array<int, 4>, 10> kLRuns = {{
    {3, 2, 1, 1}, {2, 2, 2, 1}, {2, 1, 2, 2}, {1, 4, 1, 1}, {1, 1, 3, 2},
    {1, 2, 3, 1}, {1, 1, 1, 4}, {1, 3, 1, 2}, {1, 2, 1, 3}, {3, 1, 1, 2},
}};

// Parity of the six left digits per leading digit, 'G' marking the even set.
constexpr std::array<const char*, 10> kParity = {
    "LLLLLL", "LLGLGG", "LLGGLG", "LLGGGL", "LGLLGG",
    "LGGLLG", "LGGGLG", "LGLGLG", "LGLGGL", "LGGLGL",
};

std::array<int, 4> g_runs(int d) {
  const auto& l = kLRuns[static_cast<std::size_t>(d)];
  return {l[3], l[2], l[1], l[0]};
}

bool all_digits(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

void append_runs(std::vector<bool>& out, const std::array<int, 4>& runs, bool first_is_bar) {
  bool bar = first_is_bar;
  for (int w : runs) {
    out.insert(out.end(), static_cast<std::size_t>(w), bar);
    bar = !bar;
  }
}

struct Run {
  bool dark;
  double width;
};

std::vector<Run> binarize_runs(const std::vector<double>& line, const DecoderOptions& opt) {
  std::vector<Run> runs;
  const std::size_t n = line.size();
  if (n == 0) return runs;
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + line[i];
  const std::size_t half = opt.threshold_window / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    const double mean = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    const bool dark = line[i] < mean - opt.threshold_offset;
    if (!runs.empty() && runs.back().dark == dark) {
      runs.back().width += 1.0;
    } else {
      runs.push_back({dark, 1.0});
    }
  }
  return runs;
}

// Nearest pattern to four runs normalized to seven modules. Returns distance.
double match_digit(const Run* r, bool right_half, int& digit, bool& even_parity) {
  const double total = r[0].width + r[1].width + r[2].width + r[3].width;
  std::array<double, 4> e{};
  for (int j = 0; j < 4; ++j) e[static_cast<std::size_t>(j)] = r[j].width * 7.0 / total;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::array<int, 4>& p, int d, bool g) {
    double dist = 0.0;
    for (std::size_t j = 0; j < 4; ++j) dist += std::abs(e[j] - p[j]);
    if (dist < best) {
      best = dist;
      digit = d;
      even_parity = g;
    }
  };
  for (int d = 0; d < 10; ++d) {
    // Right-half runs are (bar, space, bar, space) with the same widths as L.
    consider(kLRuns[static_cast<std::size_t>(d)], d, false);
    if (!right_half) consider(g_runs(d), d, true);
  }
  return best;
}

bool guard_ok(const Run* r, int count, double module, double tol) {
  for (int j = 0; j < count; ++j) {
    if (std::abs(r[j].width / module - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace

void BarcodeSpec::validate() const {
  if (digits.size() != 13 || !all_digits(digits)) throw InvalidInput("EAN-13 needs 13 digits");
  if (ean13_checksum(digits.substr(0, 12)) != digits[12] - '0') {
    throw InvalidInput("EAN-13 check digit does not match");
  }
  if (module_px < 1) throw InvalidInput("module width must be at least one pixel");
  if (bar_height_px < 1) throw InvalidInput("bar height must be at least one pixel");
}

int ean13_checksum(const std::string& digits12) {
  if (digits12.size() != 12 || !all_digits(digits12)) {
    throw InvalidInput("EAN-13 payload must be exactly 12 digits");
  }
  int sum = 0;
  for (std::size_t i = 0; i < 12; ++i) sum += (digits12[i] - '0') * (i % 2 == 0 ? 1 : 3);
  return (10 - sum % 10) % 10;
}

BarcodeSpec make_barcode(const std::string& digits12, std::size_t module_px,
                         std::size_t bar_height_px) {
  BarcodeSpec spec;
  spec.digits = digits12 + static_cast<char>('0' + ean13_checksum(digits12));
  spec.module_px = module_px;
  spec.bar_height_px = bar_height_px;
  spec.validate();
  return spec;
}

std::vector<bool> ean13_modules(const std::string& digits13) {
  if (digits13.size() != 13 || !all_digits(digits13)) throw InvalidInput("EAN-13 needs 13 digits");
  std::vector<bool> m;
  m.reserve(95);
  m.insert(m.end(), {true, false, true});
  const char* parity = kParity[static_cast<std::size_t>(digits13[0] - '0')];
  for (std::size_t i = 1; i <= 6; ++i) {
    const int d = digits13[i] - '0';
    append_runs(m, parity[i - 1] == 'G' ? g_runs(d) : kLRuns[static_cast<std::size_t>(d)], false);
  }
  m.insert(m.end(), {false, true, false, true, false});
  for (std::size_t i = 7; i <= 12; ++i) {
    append_runs(m, kLRuns[static_cast<std::size_t>(digits13[i] - '0')], true);
  }
  m.insert(m.end(), {true, false, true});
  return m;
}

void render_barcode(const BarcodeSpec& spec, Scene& canvas, std::size_t row, std::size_t col,
                    const RenderStyle& style) {
  spec.validate();
  if (col + spec.width_px() > canvas.width() || row + spec.bar_height_px > canvas.height()) {
    throw InvalidInput("canvas too small for the barcode and its quiet zones");
  }
  const std::vector<bool> modules = ean13_modules(spec.digits);
  const std::size_t left = spec.quiet_modules * spec.module_px;
  for (std::size_t r = row; r < row + spec.bar_height_px; ++r) {
    for (std::size_t x = 0; x < spec.width_px(); ++x) {
      double v = style.background;
      if (x >= left && x < left + 95 * spec.module_px && modules[(x - left) / spec.module_px]) {
        v = style.bar;
      }
      canvas.set_gray(r, col + x, v);
    }
  }
}

std::vector<std::string> decode_scanline(const std::vector<double>& line,
                                         const DecoderOptions& opt) {
  std::vector<std::string> found;
  const std::vector<Run> runs = binarize_runs(line, opt);
  constexpr std::size_t kSymbolRuns = 59;
  if (runs.size() < kSymbolRuns + 2) return found;

  for (std::size_t i = 1; i + kSymbolRuns < runs.size(); ++i) {
    const Run* r = &runs[i];
    if (!r[0].dark) continue;
    double total = 0.0;
    for (std::size_t j = 0; j < kSymbolRuns; ++j) total += r[j].width;
    const double module = total / 95.0;
    if (runs[i - 1].width < opt.min_quiet_modules * module) continue;
    if (r[kSymbolRuns].width < opt.min_quiet_modules * module) continue;
    if (!guard_ok(r, 3, module, opt.guard_tolerance)) continue;
    if (!guard_ok(r + 27, 5, module, opt.guard_tolerance)) continue;
    if (!guard_ok(r + 56, 3, module, opt.guard_tolerance)) continue;

    std::string digits(13, '0');
    std::string parity;
    bool ok = true;
    for (std::size_t k = 0; k < 12 && ok; ++k) {
      const bool right = k >= 6;
      const Run* d = right ? r + 32 + 4 * (k - 6) : r + 3 + 4 * k;
      const double width = d[0].width + d[1].width + d[2].width + d[3].width;
      if (std::abs(width / module - 7.0) > 2.0) {
        ok = false;
        break;
      }
      int digit = 0;
      bool even = false;
      if (match_digit(d, right, digit, even) > opt.max_digit_distance) {
        ok = false;
        break;
      }
      digits[k + 1] = static_cast<char>('0' + digit);
      if (!right) parity.push_back(even ? 'G' : 'L');
    }
    if (!ok) continue;
    const auto lead = std::find_if(kParity.begin(), kParity.end(),
                                   [&](const char* p) { return parity == p; });
    if (lead == kParity.end()) continue;
    digits[0] = static_cast<char>('0' + (lead - kParity.begin()));
    if (ean13_checksum(digits.substr(0, 12)) != digits[12] - '0') continue;
    found.push_back(digits);
    i += kSymbolRuns - 1;
  }
  return found;
}

std::vector<std::string> decode(const RgbFrame& frame, const DecoderOptions& options) {
  if (frame.width() == 0 || frame.height() == 0 || options.scanlines == 0) return {};
  std::map<std::string, std::pair<std::size_t, std::size_t>> votes;  // read -> (count, first)
  std::size_t order = 0;
  for (std::size_t s = 0; s < options.scanlines; ++s) {
    // Evenly spaced rows, centred in equal bands.
    const std::size_t row = (2 * s + 1) * frame.height() / (2 * options.scanlines);
    std::vector<double> line(frame.width());
    for (std::size_t c = 0; c < line.size(); ++c) {
      line[c] = kLumaR * frame.at(row, c, 0) + kLumaG * frame.at(row, c, 1) + kLumaB * frame.at(row, c, 2);
    }
    for (const auto& read : decode_scanline(line, options)) {
      auto [it, inserted] = votes.try_emplace(read, 0, order++);
      ++it->second.first;
    }
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ranked(votes.begin(),
                                                                                   votes.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  std::vector<std::string> out;
  for (auto& [read, meta] : ranked) out.push_back(read);
  return out;
}

}  // namespace ccdsim
