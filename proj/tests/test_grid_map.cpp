#include "doctest.h"

#include <cmath>
#include <vector>

#include "magnav/errors.hpp"
#include "magnav/grid_map.hpp"
#include "magnav/vehicle.hpp"
#include "test_helpers.hpp"

using namespace magnav;
using test_helpers::Quadratic;
using test_helpers::sample_map;
using test_helpers::tmp_path;
using test_helpers::write_file;

TEST_CASE("bilinear interpolation matches hand-computed values") {
  // Single cell, corner values 1..4; values[i*ny+j], x index outermost.
  GridMap map(0.0, 0.0, 1.0, 2, 2, {1.0, 2.0, 3.0, 4.0});
  CHECK(map.field_at(0.0, 0.0) == 1.0);
  CHECK(map.field_at(0.0, 1.0) == 2.0);
  CHECK(map.field_at(1.0, 0.0) == 3.0);
  CHECK(map.field_at(1.0, 1.0) == 4.0);
  CHECK(map.field_at(0.5, 0.5) == doctest::Approx(2.5).epsilon(1e-14));
  // (1-fx)(1-fy)*1 + fx(1-fy)*3 + (1-fx)fy*2 + fx fy*4 at fx=.25, fy=.75.
  CHECK(map.field_at(0.25, 0.75) == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("queries on the far edges stay inside the grid") {
  GridMap map(-1.0, 2.0, 0.5, 4, 3, std::vector<double>(12, 7.5));
  CHECK(map.max_x() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(map.max_y() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(map.contains(-1.0, 2.0));
  CHECK(map.contains(0.5, 3.0));
  CHECK(map.field_at(0.5, 3.0) == 7.5);
  CHECK(map.field_at(0.5, 2.4) == 7.5);
  CHECK_FALSE(map.contains(0.51, 3.0));
  CHECK_THROWS_AS(map.field_at(0.51, 2.5), OutOfBounds);
  CHECK_THROWS_AS(map.field_at(-1.001, 2.5), OutOfBounds);
  CHECK_THROWS_AS(map.field_at(0.0, 3.001), OutOfBounds);
}

TEST_CASE("contains with margin shrinks the usable area") {
  GridMap map(0.0, 0.0, 0.5, 5, 5, std::vector<double>(25, 0.0));
  CHECK(map.contains(0.5, 0.5, 0.5));
  CHECK_FALSE(map.contains(0.4, 0.5, 0.5));
  CHECK_FALSE(map.contains(1.7, 0.5, 0.5));
}

TEST_CASE("gradient and hessian are exact on quadratic fields") {
  Quadratic q{3.0, 1.5, -0.8, 0.9, 0.4, -0.6};
  GridMap map = sample_map(q, -2.0, -2.0, 0.25, 17, 17);
  for (double x : {-1.0, -0.25, 0.0, 0.75, 1.5}) {
    for (double y : {-1.5, 0.0, 0.5, 1.25}) {
      Eigen::Vector2d g = map.gradient_at(x, y);
      CHECK(g(0) == doctest::Approx(q.hx(x, y)).epsilon(1e-9));
      CHECK(g(1) == doctest::Approx(q.hy(x, y)).epsilon(1e-9));
      Eigen::Matrix2d h = map.hessian_at(x, y);
      CHECK(h(0, 0) == doctest::Approx(2.0 * q.d).epsilon(1e-9));
      CHECK(h(0, 1) == doctest::Approx(q.e).epsilon(1e-9));
      CHECK(h(1, 0) == doctest::Approx(q.e).epsilon(1e-9));
      CHECK(h(1, 1) == doctest::Approx(2.0 * q.f).epsilon(1e-9));
    }
  }
}

TEST_CASE("derivative stencils refuse points too close to the border") {
  Quadratic q{0.0, 1.0, 1.0, 0.0, 0.0, 0.0};
  GridMap map = sample_map(q, 0.0, 0.0, 0.25, 9, 9);
  CHECK_NOTHROW(map.gradient_at(0.25, 0.25));
  CHECK_THROWS_AS(map.gradient_at(0.1, 1.0), OutOfBounds);
  CHECK_THROWS_AS(map.hessian_at(1.0, 1.95), OutOfBounds);
}

TEST_CASE("heading correction adds a sinusoid on top of the field") {
  GridMap map(0.0, 0.0, 1.0, 2, 2, {1.0, 2.0, 3.0, 4.0}, 30.0, 0.7);
  Pose pose{0.5, 0.5, 1.1};
  double expected = map.field_at(0.5, 0.5) + 30.0 * std::sin(1.1 + 0.7);
  CHECK(map.field_with_heading(pose) == expected);
  GridMap plain(0.0, 0.0, 1.0, 2, 2, {1.0, 2.0, 3.0, 4.0});
  CHECK(plain.field_with_heading(pose) == plain.field_at(0.5, 0.5));
}

TEST_CASE("synthesized source maps match the closed form") {
  std::vector<GaussianSource> sources = {{-1.0, 0.5, 60.0, 0.7},
                                         {1.2, -0.8, -40.0, 0.5}};
  GridMap map = generate_gaussian_map(sources, {-3.0, -2.5, 3.0, 2.5}, 0.25,
                                      48000.0);
  CHECK(map.nx() == 25);
  CHECK(map.ny() == 21);
  CHECK(map.resolution() == 0.25);
  for (int i : {0, 7, 12, 24}) {
    for (int j : {0, 5, 20}) {
      double x = -3.0 + i * 0.25;
      double y = -2.5 + j * 0.25;
      double want = 48000.0;
      for (const auto& s : sources) {
        double r2 = (x - s.cx) * (x - s.cx) + (y - s.cy) * (y - s.cy);
        want += s.amplitude * std::exp(-r2 / (2.0 * s.sigma * s.sigma));
      }
      CHECK(map.value_at(i, j) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("source map generation validates its inputs") {
  std::vector<GaussianSource> ok = {{0.0, 0.0, 10.0, 0.5}};
  CHECK_THROWS_AS(generate_gaussian_map(ok, {1.0, 0.0, -1.0, 1.0}, 0.25, 0.0),
                  InvalidArgument);
  CHECK_THROWS_AS(generate_gaussian_map(ok, {0.0, 0.0, 1.0, 1.0}, 0.0, 0.0),
                  InvalidArgument);
  std::vector<GaussianSource> bad = {{0.0, 0.0, 10.0, 0.0}};
  CHECK_THROWS_AS(generate_gaussian_map(bad, {0.0, 0.0, 1.0, 1.0}, 0.25, 0.0),
                  InvalidArgument);
}

TEST_CASE("map save/load round trip preserves every value bit for bit") {
  std::vector<GaussianSource> sources = {{0.3, -0.2, 35.0, 0.6}};
  GridMap map = generate_gaussian_map(sources, {-1.5, -1.0, 1.5, 1.0}, 0.25,
                                      48123.456, 12.5, -0.3);
  std::string path = tmp_path("roundtrip.map");
  save_map(map, path);
  GridMap back = load_map(path);
  CHECK(back.nx() == map.nx());
  CHECK(back.ny() == map.ny());
  CHECK(back.origin_x() == map.origin_x());
  CHECK(back.origin_y() == map.origin_y());
  CHECK(back.resolution() == map.resolution());
  CHECK(back.heading_amp() == map.heading_amp());
  CHECK(back.heading_phase() == map.heading_phase());
  for (int i = 0; i < map.nx(); ++i)
    for (int j = 0; j < map.ny(); ++j)
      CHECK(back.value_at(i, j) == map.value_at(i, j));
}

TEST_CASE("map loader rejects damaged files") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_map(tmp_path("no_such_file.map")), IoError);
  }
  SUBCASE("wrong magic") {
    std::string p = write_file("bad_magic.map",
                               "NOTMAP 1\n0 0 0.5 2 2 0 0\n1 2\n3 4\n");
    CHECK_THROWS_AS(load_map(p), MalformedMap);
  }
  SUBCASE("unsupported version") {
    std::string p = write_file("bad_version.map",
                               "MAGMAP 9\n0 0 0.5 2 2 0 0\n1 2\n3 4\n");
    CHECK_THROWS_AS(load_map(p), MalformedMap);
  }
  SUBCASE("too few values") {
    std::string p =
        write_file("short.map", "MAGMAP 1\n0 0 0.5 2 2 0 0\n1 2\n3\n");
    CHECK_THROWS_AS(load_map(p), MalformedMap);
  }
  SUBCASE("trailing extra values") {
    std::string p = write_file("long.map",
                               "MAGMAP 1\n0 0 0.5 2 2 0 0\n1 2\n3 4\n5 6\n");
    CHECK_THROWS_AS(load_map(p), MalformedMap);
  }
  SUBCASE("non-numeric value") {
    std::string p =
        write_file("garbage.map", "MAGMAP 1\n0 0 0.5 2 2 0 0\n1 2\n3 x\n");
    CHECK_THROWS_AS(load_map(p), MalformedMap);
  }
  SUBCASE("bad resolution") {
    std::string p =
        write_file("badres.map", "MAGMAP 1\n0 0 0 2 2 0 0\n1 2\n3 4\n");
    CHECK_THROWS_AS(load_map(p), MalformedMap);
  }
  SUBCASE("absurd dimensions") {
    std::string p = write_file("huge.map",
                               "MAGMAP 1\n0 0 0.5 2000000 2 0 0\n1 2\n3 4\n");
    CHECK_THROWS_AS(load_map(p), MalformedMap);
  }
}

TEST_CASE("map files may carry comments and blank lines") {
  std::string p = write_file("commented.map",
                             "MAGMAP 1\n"
                             "# origin res dims heading\n"
                             "0 0 0.5 2 2 10 0.25\n"
                             "\n"
                             "1 2\n"
                             "# second row\n"
                             "3 4\n");
  GridMap map = load_map(p);
  CHECK(map.nx() == 2);
  CHECK(map.value_at(1, 1) == 4.0);
  CHECK(map.heading_amp() == 10.0);
}

TEST_CASE("source spec files build maps") {
  std::string p = write_file("spec.sources",
                             "# lab survey\n"
                             "bounds -1.5 -1.0 1.5 1.0\n"
                             "resolution 0.25\n"
                             "baseline 48000\n"
                             "heading 15 0.4\n"
                             "source 0.3 -0.2 35 0.6\n"
                             "source -0.9 0.4 -20 0.5\n");
  GridMap map = build_map(load_map_spec(p));
  CHECK(map.nx() == 13);
  CHECK(map.ny() == 9);
  CHECK(map.heading_amp() == 15.0);
  double x = 0.25, y = -0.25;
  double want =
      48000.0 +
      35.0 * std::exp(
                 -((x - 0.3) * (x - 0.3) + (y + 0.2) * (y + 0.2)) /
                 (2.0 * 0.36)) -
      20.0 * std::exp(
                 -((x + 0.9) * (x + 0.9) + (y - 0.4) * (y - 0.4)) /
                 (2.0 * 0.25));
  CHECK(map.field_at(x, y) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("source spec parser reports the offending line") {
  SUBCASE("unknown directive") {
    std::string p = write_file("unknown.sources",
                               "bounds 0 0 1 1\n"
                               "resolution 0.25\n"
                               "wibble 3\n");
    try {
      load_map_spec(p);
      FAIL("expected MalformedMap");
    } catch (const MalformedMap& e) {
      CHECK(std::string(e.what()).find(":3:") != std::string::npos);
      CHECK(std::string(e.what()).find("wibble") != std::string::npos);
    }
  }
  SUBCASE("missing bounds") {
    std::string p = write_file("nobounds.sources", "resolution 0.25\n");
    CHECK_THROWS_AS(load_map_spec(p), MalformedMap);
  }
  SUBCASE("missing resolution") {
    std::string p = write_file("nores.sources", "bounds 0 0 1 1\n");
    CHECK_THROWS_AS(load_map_spec(p), MalformedMap);
  }
  SUBCASE("short source line") {
    std::string p = write_file("shortsource.sources",
                               "bounds 0 0 1 1\nresolution 0.25\nsource 1 2\n");
    CHECK_THROWS_AS(load_map_spec(p), MalformedMap);
  }
}

TEST_CASE("grid construction validates its arguments") {
  CHECK_THROWS_AS(GridMap(0, 0, 1.0, 1, 2, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(GridMap(0, 0, 0.0, 2, 2, {1, 2, 3, 4}), InvalidArgument);
  CHECK_THROWS_AS(GridMap(0, 0, 1.0, 2, 2, {1, 2, 3}), InvalidArgument);
  double nan = std::nan("");
  CHECK_THROWS_AS(GridMap(0, 0, 1.0, 2, 2, {1, 2, 3, nan}), InvalidArgument);
}
