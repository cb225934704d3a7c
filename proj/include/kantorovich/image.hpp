#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kantorovich/sampling.hpp"

namespace kantorovich {

/// Gray-level image read as the step function
///   I(x, y) = sum_ij a_ij 1_ij(x, y),  1_ij = indicator of (j-1, j] x (i-1, i],
/// where i (1-based) is the row and j the column, so x runs along columns and
/// y along rows. Pixel values are reals in [0, 255], stored row-major.
class StepImage {
 public:
  StepImage(std::size_t width, std::size_t height, double fill = 0.0);
  StepImage(std::size_t width, std::size_t height, std::vector<double> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  /// 0-based row and column.
  double at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
  void set(std::size_t row, std::size_t col, double value);
  const std::vector<double>& pixels() const { return pixels_; }

  /// Axis 0 = x (columns), axis 1 = y (rows), breaks at the integers.
  StepFunction as_step_function() const;

  bool operator==(const StepImage&) const = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> pixels_;
};

/// Reads binary (P5) or ASCII (P2) PGM with maxval <= 255. Values are
/// rescaled to [0, 255] when maxval < 255. Throws std::runtime_error on
/// malformed or unsupported input.
StepImage load_image(const std::filesystem::path& path);
StepImage read_pgm(std::istream& in);

/// Writes binary PGM (P5, maxval 255) after quantization.
void save_image(const StepImage& image, const std::filesystem::path& path);
void write_pgm(std::ostream& out, const StepImage& image);
void write_pgm_ascii(std::ostream& out, const StepImage& image);

/// Round half away from zero, then clamp to [0, 255].
unsigned char quantize(double value);

struct ReconstructionConfig {
  std::string kernel_spec = "jackson:12:1";
  double w = 40.0;
  int scale = 6;
  double truncation_tol = 1e-8;

  /// Throws std::invalid_argument on w <= 0, scale < 1 or tol <= 0.
  void validate() const;
};

/// Samples S_w I on the fine grid ((j - 0.5) / scale, (i - 0.5) / scale),
/// i, j = 1 .. scale * size, and quantizes. Output is (scale * height) x
/// (scale * width). Uses the separable evaluator.
StepImage reconstruct(const StepImage& image, const ReconstructionConfig& config);

/// Same as reconstruct, without quantization (raw S_w I samples, row-major).
std::vector<double> reconstruct_raw(const StepImage& image, const ReconstructionConfig& config);

/// Otsu's threshold over the 256-bin histogram of quantized pixels. Ties in
/// between-class variance resolve to the midpoint of the maximizing range.
/// A single-level image returns that level, so everything maps to black.
double otsu_threshold(const StepImage& image);

/// Pixels > threshold become 255, the rest 0. Otsu when no threshold is given.
StepImage binarize(const StepImage& image, std::optional<double> threshold = std::nullopt);

/// (white fraction, black fraction) of a {0, 255} image; throws
/// std::invalid_argument on any other value.
std::pair<double, double> phase_fractions(const StepImage& binary);

/// Block means over factor x factor tiles, quantized. Throws if factor does
/// not divide both dimensions.
StepImage downsample_mean(const StepImage& image, int factor);

/// Pixel replication.
StepImage upscale_nearest(const StepImage& image, int factor);

/// Peak signal-to-noise ratio in dB against a 255 peak; +inf for identical images.
double psnr(const StepImage& reference, const StepImage& test);

}  // namespace kantorovich
