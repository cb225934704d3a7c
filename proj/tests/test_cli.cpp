// Drives the kantorovich executable through the shell.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "doctest.h"
#include "kantorovich/image.hpp"

namespace fs = std::filesystem;
using namespace kantorovich;

namespace {

struct Run {
  int status;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("kantorovich_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const auto log = scratch() / "stdout.txt";
  const std::string cmd = std::string("\"") + KANTOROVICH_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(log);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, text};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {(std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cli help and usage errors") {
  CHECK(run("--help").status == 0);
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("converge --w-list \"\"").status == 2);
  CHECK(run("converge --w-list 5,-1").status == 2);
  CHECK(run("converge --w-list 5 --metric l7").status == 2);
  CHECK(run("kernel-info --kernel bspline:0").status == 2);
}

TEST_CASE("cli reconstruct") {
  const auto in = scratch() / "in75.pgm";
  std::vector<double> px(75 * 75);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<double>((i * 37) % 256);
  save_image(StepImage(75, 75, px), in);

  SUBCASE("defaults") {
    const auto out = scratch() / "out450.pgm";
    const auto r = run("reconstruct --input " + in.string() + " --output " + out.string());
    CHECK(r.status == 0);
    const auto img = load_image(out);
    CHECK(img.width() == 450);
    CHECK(img.height() == 450);
  }
  SUBCASE("same size and deterministic") {
    const auto a = scratch() / "a.pgm", b = scratch() / "b.pgm";
    const std::string opts = " --scale 1 --w 100 --kernel bspline:3";
    CHECK(run("reconstruct --input " + in.string() + " --output " + a.string() + opts).status == 0);
    CHECK(run("reconstruct --input " + in.string() + " --output " + b.string() + opts).status == 0);
    CHECK(load_image(a).width() == 75);
    CHECK(load_image(a).height() == 75);
    CHECK(slurp(a) == slurp(b));
  }
  SUBCASE("missing input") {
    const auto out = scratch() / "never.pgm";
    fs::remove(out);
    const auto r = run("reconstruct --input " + (scratch() / "missing.pgm").string() + " --output " + out.string());
    CHECK(r.status == 1);
    CHECK_FALSE(fs::exists(out));
  }
  SUBCASE("bad options") {
    CHECK(run("reconstruct --input " + in.string() + " --output x.pgm --scale 0").status == 2);
    CHECK(run("reconstruct --input " + in.string() + " --output x.pgm --kernel cubic").status == 2);
  }
}

TEST_CASE("cli kernel-info") {
  auto r = run("kernel-info --kernel bspline:3");
  CHECK(r.status == 0);
  const auto at = r.out.find("partition of unity deviation: ");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(r.out.substr(at + 30)) <= 1e-10);

  const auto csv = scratch() / "jackson.csv";
  r = run("kernel-info --kernel jackson:12:1 --csv " + csv.string() + " --samples 11");
  CHECK(r.status == 0);
  CHECK(r.out.find("normalization c_k: 0.04731242386") != std::string::npos);
  CHECK(r.out.find("truncation radius") != std::string::npos);
  const auto text = slurp(csv);
  CHECK(text.rfind("x,value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);

  r = run("kernel-info --kernel fejer --beta 1 --probes 5");
  CHECK(r.status == 0);
  CHECK(r.out.find("not finite") != std::string::npos);
}

TEST_CASE("cli converge and binarize") {
  const auto csv = scratch() / "sweep.csv";
  auto r = run("converge --test smooth --metric sup --w-list 5,10,20,40 --csv " + csv.string());
  CHECK(r.status == 0);
  std::istringstream lines(slurp(csv));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "w,metric,value");
  double prev = 1e300;
  int count = 0;
  while (std::getline(lines, line)) {
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(v < prev);
    prev = v;
    ++count;
  }
  CHECK(count == 4);

  const auto img = scratch() / "bw_in.pgm", bw = scratch() / "bw_out.pgm", rep = scratch() / "phase.csv";
  save_image(StepImage(2, 2, std::vector<double>{10, 240, 250, 230}), img);
  r = run("binarize --input " + img.string() + " --output " + bw.string() + " --report " + rep.string());
  CHECK(r.status == 0);
  CHECK(slurp(rep) == "0.75,0.25\n");
  CHECK(load_image(bw) == StepImage(2, 2, std::vector<double>{0, 255, 255, 255}));
}
