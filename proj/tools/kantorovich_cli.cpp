// Command-line front end: image reconstruction, kernel inspection and
// convergence sweeps for sampling Kantorovich operators.
//
// Exit status: 0 success, 1 runtime failure, 2 usage error.

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kantorovich/convergence.hpp"
#include "kantorovich/image.hpp"
#include "kantorovich/kernels.hpp"

namespace {

using namespace kantorovich;

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_w_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || !(v > 0.0)) {
      throw UsageError("--w-list entries must be positive numbers, got '" + item + "'");
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

template <class F>
auto as_usage(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct ReconstructArgs {
  std::string input, output;
  ReconstructionConfig config;
};

int run_reconstruct(const ReconstructArgs& args) {
  as_usage([&] {
    args.config.validate();
    return parse_kernel(args.config.kernel_spec);
  });
  const auto start = std::chrono::steady_clock::now();
  const StepImage in = load_image(args.input);
  const StepImage out = reconstruct(in, args.config);
  save_image(out, args.output);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "input " << in.width() << "x" << in.height() << " -> output " << out.width() << "x"
            << out.height() << " (kernel " << args.config.kernel_spec << ", w " << args.config.w
            << ", scale " << args.config.scale << ") in " << seconds << " s\n";
  return 0;
}

struct KernelInfoArgs {
  std::string kernel;
  std::string csv;
  std::optional<double> beta;
  int probes = 100;
  double truncation_tol = 1e-8;
  std::optional<double> half_width;
  int samples = 1001;
};

int run_kernel_info(const KernelInfoArgs& args) {
  if (args.probes < 1) throw UsageError("--probes must be positive");
  if (args.samples < 2) throw UsageError("--samples must be at least 2");
  if (args.beta && !(*args.beta >= 0.0)) throw UsageError("--beta must be >= 0");
  const UnivariateKernel chi = as_usage([&] { return parse_kernel(args.kernel); });

  std::cout.precision(10);
  std::cout << "kernel: " << chi.name() << '\n';
  if (const auto* c = std::get_if<CompactInterval>(&chi.support())) {
    std::cout << "support: [" << c->lower << ", " << c->upper << "]\n";
  } else {
    const auto& d = std::get<PolynomialDecay>(chi.support());
    std::cout << "decay: |chi(x)| <= " << d.constant << " |x|^-" << d.exponent << '\n';
  }
  if (chi.normalization()) std::cout << "normalization c_k: " << *chi.normalization() << '\n';

  const double radius = truncation_radius(chi, args.truncation_tol);
  std::cout << "truncation radius (tol " << args.truncation_tol << "): " << radius << '\n';

  const auto pou = check_partition_of_unity(make_product({chi}), SamplingScheme::uniform(1),
                                            args.probes, args.truncation_tol);
  std::cout << "partition of unity deviation: " << pou.max_deviation << " (tail bound "
            << pou.tail_bound << ", half-width " << pou.radius.front() << ")\n";

  const auto m0 = moment_m_beta(chi, 0.0, args.probes);
  std::cout << "m_0: " << m0.value << " (tail bound " << m0.tail_bound << ")\n";
  if (args.beta) {
    try {
      const auto mb = moment_m_beta(chi, *args.beta, args.probes);
      std::cout << "m_" << *args.beta << ": " << mb.value << " (tail bound " << mb.tail_bound << ")\n";
    } catch (const std::invalid_argument& e) {
      std::cout << "m_" << *args.beta << ": not finite: " << e.what() << '\n';
    }
  }

  if (!args.csv.empty()) {
    const double hw = args.half_width ? *args.half_width
                      : chi.has_compact_support() ? radius + 0.5
                      : chi.name() == "fejer"     ? 10.0
                                                  : radius;
    if (!(hw > 0.0)) throw UsageError("--half-width must be positive");
    std::ofstream out(args.csv);
    if (!out) throw std::runtime_error("cannot write '" + args.csv + "'");
    write_kernel_curve_csv(out, chi, -hw, hw, args.samples);
    std::cout << "curve: " << args.samples << " samples on [" << -hw << ", " << hw << "] -> "
              << args.csv << '\n';
  }
  return 0;
}

struct ConvergeArgs {
  std::string kernel = "bspline:3";
  std::string test = "smooth";
  std::string metric = "sup";
  std::string w_list;
  std::string csv;
  double truncation_tol = 1e-8;
};

int run_converge(const ConvergeArgs& args) {
  const auto ws = parse_w_list(args.w_list);
  const auto signal = as_usage([&] { return parse_test_signal(args.test); });
  const auto metric = as_usage([&] { return parse_metric(args.metric); });
  as_usage([&] { return parse_kernel(args.kernel); });

  const auto rows = convergence_sweep(args.kernel, signal, metric, ws, args.truncation_tol);
  write_sweep_csv(std::cout, rows);
  if (!args.csv.empty()) {
    std::ofstream out(args.csv);
    if (!out) throw std::runtime_error("cannot write '" + args.csv + "'");
    write_sweep_csv(out, rows);
  }
  return 0;
}

struct BinarizeArgs {
  std::string input, output, report;
  std::optional<double> threshold;
};

int run_binarize(const BinarizeArgs& args) {
  const StepImage in = load_image(args.input);
  const StepImage bw = binarize(in, args.threshold);
  save_image(bw, args.output);
  const auto [white, black] = phase_fractions(bw);
  std::ostringstream line;
  line.precision(10);
  line << white << ',' << black << '\n';
  std::cout << line.str();
  if (!args.report.empty()) {
    std::ofstream out(args.report);
    if (!out) throw std::runtime_error("cannot write '" + args.report + "'");
    out << line.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling Kantorovich operators: reconstruction, kernel inspection, convergence sweeps"};
  app.require_subcommand(1);

  ReconstructArgs rec;
  auto* cmd_rec = app.add_subcommand("reconstruct", "Reconstruct/upscale a PGM image with S_w");
  cmd_rec->add_option("--input", rec.input, "Input PGM (P2 or P5)")->required();
  cmd_rec->add_option("--output", rec.output, "Output PGM (P5)")->required();
  cmd_rec->add_option("--kernel", rec.config.kernel_spec, "fejer | bspline:k | jackson:k[:alpha]")
      ->capture_default_str();
  cmd_rec->add_option("--w", rec.config.w, "Sampling rate w")->capture_default_str();
  cmd_rec->add_option("--scale", rec.config.scale, "Integer upscaling factor")->capture_default_str();
  cmd_rec->add_option("--truncation-tol", rec.config.truncation_tol, "Series truncation tolerance")
      ->capture_default_str();

  KernelInfoArgs info;
  auto* cmd_info = app.add_subcommand("kernel-info", "Report kernel conditions and export its curve");
  cmd_info->add_option("--kernel", info.kernel, "fejer | bspline:k | jackson:k[:alpha]")->required();
  cmd_info->add_option("--csv", info.csv, "Write the kernel curve as x,value CSV");
  cmd_info->add_option("--beta", info.beta, "Also report the discrete moment m_beta");
  cmd_info->add_option("--probes", info.probes, "Probe count for sums")->capture_default_str();
  cmd_info->add_option("--truncation-tol", info.truncation_tol, "Truncation tolerance")->capture_default_str();
  cmd_info->add_option("--half-width", info.half_width, "Curve range [-h, h]");
  cmd_info->add_option("--samples", info.samples, "Curve samples")->capture_default_str();

  ConvergeArgs conv;
  auto* cmd_conv = app.add_subcommand("converge", "Error of S_w f - f over a list of w");
  cmd_conv->add_option("--kernel", conv.kernel, "fejer | bspline:k | jackson:k[:alpha]")->capture_default_str();
  cmd_conv->add_option("--test", conv.test, "smooth | step")->capture_default_str();
  cmd_conv->add_option("--metric", conv.metric, "sup | lp:<p> | modular:<p>")->capture_default_str();
  cmd_conv->add_option("--w-list", conv.w_list, "Comma-separated sampling rates")->required();
  cmd_conv->add_option("--csv", conv.csv, "Also write the w,metric,value table here");
  cmd_conv->add_option("--truncation-tol", conv.truncation_tol, "Truncation tolerance")->capture_default_str();

  BinarizeArgs bin;
  auto* cmd_bin = app.add_subcommand("binarize", "Threshold to black/white and report phase fractions");
  cmd_bin->add_option("--input", bin.input, "Input PGM")->required();
  cmd_bin->add_option("--output", bin.output, "Output binary PGM")->required();
  cmd_bin->add_option("--threshold", bin.threshold, "Gray-level threshold (default: Otsu)");
  cmd_bin->add_option("--report", bin.report, "Write white_fraction,black_fraction here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (cmd_rec->parsed()) return run_reconstruct(rec);
    if (cmd_info->parsed()) return run_kernel_info(info);
    if (cmd_conv->parsed()) return run_converge(conv);
    if (cmd_bin->parsed()) return run_binarize(bin);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
