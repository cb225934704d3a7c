#include "kantorovich/image.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace kantorovich {

namespace {

void check_pixel(double v) {
  if (!(v >= 0.0 && v <= 255.0)) {
    throw std::invalid_argument("pixel value " + std::to_string(v) + " outside [0, 255]");
  }
}

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n' && c != '\r') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  if (token.empty()) throw std::runtime_error("PGM: unexpected end of header");
  return token;
}

std::size_t parse_header_value(const std::string& token, const char* what) {
  std::size_t pos = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(token, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != token.size() || token.empty() || token[0] == '-') {
    throw std::runtime_error(std::string("PGM: malformed ") + what + " '" + token + "'");
  }
  return value;
}

}  // namespace

StepImage::StepImage(std::size_t width, std::size_t height, double fill)
    : StepImage(width, height, std::vector<double>(width * height, fill)) {}

StepImage::StepImage(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0) throw std::invalid_argument("image dimensions must be at least 1");
  if (pixels_.size() != width_ * height_) throw std::invalid_argument("pixel count does not match dimensions");
  for (double v : pixels_) check_pixel(v);
}

void StepImage::set(std::size_t row, std::size_t col, double value) {
  check_pixel(value);
  pixels_.at(row * width_ + col) = value;
}

StepFunction StepImage::as_step_function() const {
  StepFunction f;
  f.breaks.resize(2);
  for (std::size_t j = 0; j <= width_; ++j) f.breaks[0].push_back(static_cast<double>(j));
  for (std::size_t i = 0; i <= height_; ++i) f.breaks[1].push_back(static_cast<double>(i));
  f.values = pixels_;
  return f;
}

StepImage read_pgm(std::istream& in) {
  const std::string magic = next_token(in);
  if (magic != "P5" && magic != "P2") {
    if (magic.size() == 2 && magic[0] == 'P') {
      throw std::runtime_error("PGM: unsupported format " + magic + " (grayscale P2/P5 only)");
    }
    throw std::runtime_error("PGM: bad magic number");
  }
  const std::size_t width = parse_header_value(next_token(in), "width");
  const std::size_t height = parse_header_value(next_token(in), "height");
  const std::size_t maxval = parse_header_value(next_token(in), "maxval");
  if (width == 0 || height == 0) throw std::runtime_error("PGM: zero image dimension");
  if (maxval == 0 || maxval > 255) {
    throw std::runtime_error("PGM: maxval " + std::to_string(maxval) + " outside 1..255");
  }
  const double rescale = 255.0 / static_cast<double>(maxval);

  std::vector<double> pixels(width * height);
  if (magic == "P5") {
    // next_token consumed exactly one whitespace byte after maxval.
    std::vector<unsigned char> raw(pixels.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      throw std::runtime_error("PGM: truncated pixel data");
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] > maxval) throw std::runtime_error("PGM: pixel exceeds maxval");
      pixels[i] = raw[i] * rescale;
    }
  } else {
    for (auto& p : pixels) {
      const std::size_t v = parse_header_value(next_token(in), "pixel");
      if (v > maxval) throw std::runtime_error("PGM: pixel exceeds maxval");
      p = static_cast<double>(v) * rescale;
    }
  }
  if (maxval != 255) {
    for (auto& p : pixels) p = std::min(255.0, p);
  }
  return StepImage(width, height, std::move(pixels));
}

StepImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_pgm(in);
}

unsigned char quantize(double value) {
  const double r = std::round(value);  // half away from zero
  return static_cast<unsigned char>(std::clamp(r, 0.0, 255.0));
}

void write_pgm(std::ostream& out, const StepImage& image) {
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<unsigned char> raw(image.pixels().size());
  std::transform(image.pixels().begin(), image.pixels().end(), raw.begin(), quantize);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void write_pgm_ascii(std::ostream& out, const StepImage& image) {
  out << "P2\n" << image.width() << ' ' << image.height() << "\n255\n";
  for (std::size_t r = 0; r < image.height(); ++r) {
    for (std::size_t c = 0; c < image.width(); ++c) {
      out << static_cast<int>(quantize(image.at(r, c))) << (c + 1 == image.width() ? '\n' : ' ');
    }
  }
}

void save_image(const StepImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_pgm(out, image);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void ReconstructionConfig::validate() const {
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("w must be positive");
  if (scale < 1) throw std::invalid_argument("scale must be at least 1");
  if (!(truncation_tol > 0.0)) throw std::invalid_argument("truncation tolerance must be positive");
}

std::vector<double> reconstruct_raw(const StepImage& image, const ReconstructionConfig& config) {
  config.validate();
  const auto scheme = SamplingScheme::uniform(2);
  const KantorovichOperator op(make_product_kernel(config.kernel_spec, 2), scheme,
                               config.truncation_tol);
  const CellMeans means = step_cell_means(image.as_step_function(), scheme, config.w);

  const auto s = static_cast<std::size_t>(config.scale);
  std::vector<std::vector<double>> grid(2);
  for (std::size_t j = 1; j <= s * image.width(); ++j) {
    grid[0].push_back((static_cast<double>(j) - 0.5) / config.scale);
  }
  for (std::size_t i = 1; i <= s * image.height(); ++i) {
    grid[1].push_back((static_cast<double>(i) - 0.5) / config.scale);
  }
  return op.evaluate_separable(means, grid);
}

StepImage reconstruct(const StepImage& image, const ReconstructionConfig& config) {
  auto raw = reconstruct_raw(image, config);
  for (auto& v : raw) v = quantize(v);
  const auto s = static_cast<std::size_t>(config.scale);
  return StepImage(s * image.width(), s * image.height(), std::move(raw));
}

double otsu_threshold(const StepImage& image) {
  std::array<double, 256> hist{};
  for (double v : image.pixels()) hist[quantize(v)] += 1.0;
  const double total = static_cast<double>(image.pixels().size());

  int levels = 0, top = 0;
  for (int t = 0; t < 256; ++t) {
    if (hist[static_cast<std::size_t>(t)] > 0) {
      ++levels;
      top = t;
    }
  }
  if (levels < 2) return top;

  double sum_all = 0.0;
  for (int t = 0; t < 256; ++t) sum_all += t * hist[static_cast<std::size_t>(t)];

  // Class 0 = levels <= t. Between-class variance w0 w1 (mu0 - mu1)^2.
  std::array<double, 256> between{};
  double w0 = 0.0, sum0 = 0.0, best = 0.0;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[static_cast<std::size_t>(t)];
    sum0 += t * hist[static_cast<std::size_t>(t)];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0, mu1 = (sum_all - sum0) / w1;
    const double b = (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1);
    between[static_cast<std::size_t>(t)] = b;
    best = std::max(best, b);
  }
  int first = -1, last = -1;
  for (int t = 0; t < 255; ++t) {
    if (between[static_cast<std::size_t>(t)] >= best * (1.0 - 1e-12)) {
      if (first < 0) first = t;
      last = t;
    }
  }
  return 0.5 * (first + last);
}

StepImage binarize(const StepImage& image, std::optional<double> threshold) {
  const double t = threshold ? *threshold : otsu_threshold(image);
  std::vector<double> out(image.pixels().size());
  std::transform(image.pixels().begin(), image.pixels().end(), out.begin(),
                 [t](double v) { return v > t ? 255.0 : 0.0; });
  return StepImage(image.width(), image.height(), std::move(out));
}

std::pair<double, double> phase_fractions(const StepImage& binary) {
  std::size_t white = 0;
  for (double v : binary.pixels()) {
    if (v == 255.0) {
      ++white;
    } else if (v != 0.0) {
      throw std::invalid_argument("phase fractions need a binary {0, 255} image");
    }
  }
  const double total = static_cast<double>(binary.pixels().size());
  const double wf = static_cast<double>(white) / total;
  return {wf, 1.0 - wf};
}

StepImage downsample_mean(const StepImage& image, int factor) {
  if (factor < 1) throw std::invalid_argument("downsampling factor must be positive");
  const auto f = static_cast<std::size_t>(factor);
  if (image.width() % f != 0 || image.height() % f != 0) {
    throw std::invalid_argument("downsampling factor must divide both image dimensions");
  }
  const std::size_t w = image.width() / f, h = image.height() / f;
  std::vector<double> out(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double sum = 0.0;
      for (std::size_t dr = 0; dr < f; ++dr) {
        for (std::size_t dc = 0; dc < f; ++dc) sum += image.at(r * f + dr, c * f + dc);
      }
      out[r * w + c] = quantize(sum / static_cast<double>(f * f));
    }
  }
  return StepImage(w, h, std::move(out));
}

StepImage upscale_nearest(const StepImage& image, int factor) {
  if (factor < 1) throw std::invalid_argument("upscaling factor must be positive");
  const auto f = static_cast<std::size_t>(factor);
  const std::size_t w = image.width() * f, h = image.height() * f;
  std::vector<double> out(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) out[r * w + c] = image.at(r / f, c / f);
  }
  return StepImage(w, h, std::move(out));
}

double psnr(const StepImage& reference, const StepImage& test) {
  if (reference.width() != test.width() || reference.height() != test.height()) {
    throw std::invalid_argument("PSNR needs images of equal size");
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < reference.pixels().size(); ++i) {
    const double d = reference.pixels()[i] - test.pixels()[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(reference.pixels().size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace kantorovich
