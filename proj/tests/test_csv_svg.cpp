#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "freegrad/csv.hpp"
#include "freegrad/rng.hpp"
#include "freegrad/svg_plot.hpp"

using namespace freegrad;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "freegrad_test_io";
  fs::create_directories(dir);
  return dir;
}

std::vector<TraceRecord> random_trace(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TraceRecord> recs(n);
  for (std::size_t i = 0; i < n; ++i) {
    TraceRecord& r = recs[i];
    r.t = static_cast<long long>(i + 1);
    r.k = 1 + static_cast<long long>(rng.next_u64() % 5);
    r.gamma_k = std::exp(rng.uniform(-12.0, 12.0));
    r.h = std::exp(rng.uniform(-6.0, 18.0));
    r.eta = r.gamma_k / r.h;
    r.f_x = rng.normal() * 1e3;
    r.grad_norm_sq = rng.uniform01() * 1e8;
    r.S = rng.uniform01() * 1e9;
    r.Gamma_sq = rng.uniform01() * 1e5;
    r.dist_to_x1 = rng.uniform01() * 40.0;
    r.B = i % 7 == 0 ? std::numeric_limits<double>::infinity()
                     : rng.uniform(40.0, 80.0);
  }
  return recs;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("csv round trip is bit exact, including infinities") {
  const std::vector<TraceRecord> trace = random_trace(200, 31);
  const std::string text = trace_to_csv(trace);
  const std::vector<TraceRecord> back = trace_from_csv(text);
  REQUIRE(back.size() == trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK(back[i].t == trace[i].t);
    CHECK(back[i].k == trace[i].k);
    CHECK(std::memcmp(&back[i].gamma_k, &trace[i].gamma_k, sizeof(double)) ==
          0);
    CHECK(std::memcmp(&back[i].h, &trace[i].h, sizeof(double)) == 0);
    CHECK(std::memcmp(&back[i].eta, &trace[i].eta, sizeof(double)) == 0);
    CHECK(std::memcmp(&back[i].f_x, &trace[i].f_x, sizeof(double)) == 0);
    CHECK(std::memcmp(&back[i].grad_norm_sq, &trace[i].grad_norm_sq,
                      sizeof(double)) == 0);
    CHECK(std::memcmp(&back[i].S, &trace[i].S, sizeof(double)) == 0);
    CHECK(std::memcmp(&back[i].Gamma_sq, &trace[i].Gamma_sq,
                      sizeof(double)) == 0);
    CHECK(std::memcmp(&back[i].dist_to_x1, &trace[i].dist_to_x1,
                      sizeof(double)) == 0);
    CHECK(std::memcmp(&back[i].B, &trace[i].B, sizeof(double)) == 0);
  }
}

TEST_CASE("csv layout: header plus one line per record") {
  const std::vector<TraceRecord> trace = random_trace(3, 5);
  const std::string text = trace_to_csv(trace);
  CHECK(text.rfind(kTraceCsvHeader, 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + 3 rows
  CHECK(text.find("\r") == std::string::npos);

  const fs::path path = temp_dir() / "layout.csv";
  write_trace_csv(path, trace);
  CHECK(slurp(path) == text);
  const std::vector<TraceRecord> reread = read_trace_csv(path);
  CHECK(reread.size() == 3);
}

TEST_CASE("csv rejects malformed input") {
  CHECK_THROWS_AS(trace_from_csv("bogus header\n1,2\n"), IoError);
  CHECK_THROWS_AS(
      trace_from_csv(std::string(kTraceCsvHeader) + "\n1,2,3\n"), IoError);
  CHECK_THROWS_AS(
      trace_from_csv(std::string(kTraceCsvHeader) +
                     "\n1,1,x,1,1,1,1,1,1,1,1\n"),
      IoError);
  CHECK_THROWS_AS(write_trace_csv(temp_dir() / "x.csv", {}), InvalidArgument);
  CHECK_THROWS_AS(read_trace_csv(temp_dir() / "does_not_exist.csv"), IoError);
}

TEST_CASE("svg: single point still yields a valid file") {
  Series s;
  s.label = "lonely";
  s.x = {10.0};
  s.y = {3.0};
  const fs::path path = temp_dir() / "single.svg";
  const std::size_t plotted =
      write_loglog_svg(path, PlotSpec{"one point", "t", "y"}, {&s, 1});
  CHECK(plotted == 1);
  const std::string svg = slurp(path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("lonely") != std::string::npos);
}

TEST_CASE("svg: multi-series plot with skipped nonpositive points") {
  Series a;
  a.label = "algo_a";
  Series b;
  b.label = "algo_b";
  for (int t = 1; t <= 100; ++t) {
    a.x.push_back(t);
    a.y.push_back(t * 0.5);
    b.x.push_back(t);
    // A nonpositive stretch must be skipped, not plotted.
    b.y.push_back(t < 10 ? 0.0 : std::sqrt(static_cast<double>(t)));
  }
  const fs::path path = temp_dir() / "multi.svg";
  const Series series[] = {a, b};
  const std::size_t plotted =
      write_loglog_svg(path, PlotSpec{"curves", "t", "value"}, series);
  CHECK(plotted == 100 + 91);
  const std::string svg = slurp(path);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("algo_a") != std::string::npos);
  CHECK(svg.find("algo_b") != std::string::npos);
  CHECK(svg.find("1e1") != std::string::npos);  // power-of-ten tick labels
}

TEST_CASE("svg: a constant series renders as a horizontal polyline") {
  Series s;
  s.label = "flat";
  for (int t = 1; t <= 50; ++t) {
    s.x.push_back(t);
    s.y.push_back(0.25);
  }
  const fs::path path = temp_dir() / "flat.svg";
  write_loglog_svg(path, PlotSpec{"flat", "t", "eta"}, {&s, 1});
  const std::string svg = slurp(path);
  const std::size_t start = svg.find("points=\"");
  REQUIRE(start != std::string::npos);
  const std::size_t end = svg.find('"', start + 8);
  const std::string points = svg.substr(start + 8, end - start - 8);
  // Every "x,y " pair shares one y coordinate.
  std::string first_y;
  std::istringstream in(points);
  std::string pair;
  while (in >> pair) {
    const std::string y = pair.substr(pair.find(',') + 1);
    if (first_y.empty())
      first_y = y;
    else
      CHECK(y == first_y);
  }
  CHECK(!first_y.empty());
}

TEST_CASE("svg rejects fully nonpositive data") {
  Series s;
  s.label = "bad";
  s.x = {1.0, 2.0};
  s.y = {-1.0, 0.0};
  CHECK_THROWS_AS(
      write_loglog_svg(temp_dir() / "bad.svg", PlotSpec{"t", "x", "y"},
                       {&s, 1}),
      InvalidArgument);
}
