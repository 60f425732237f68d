// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include <doctest.h>

#include "rotbox/oracle.hpp"
#include "rotbox/rng.hpp"

using namespace rotbox;

namespace {

bool same_estimate(const McEstimate& a, const McEstimate& b) {
  return a.mean == b.mean && a.std_err == b.std_err && a.n_samples == b.n_samples &&
         a.seed == b.seed;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("engine matches the published mt19937_64 sequence") {
  // 10000th output of the standard engine from its default seed.
  Rng r(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = r.bits();
  CHECK(v == 9981545732273789042ull);
}

TEST_CASE("uniform stays in range and reproduces per seed") {
  Rng r(123);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double v = r.uniform(-3.0, 5.0);
    CHECK(v >= -3.0);
    CHECK(v < 5.0);
  }
  Rng a(777), b(777);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("splitmix64 matches its reference vector") {
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xE220A8397B1DCDAFull);
  CHECK(splitmix64(s) == 0x6E789E6AA1B965F4ull);
}

TEST_CASE("derive_seed separates streams deterministically") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  // Streams produce unrelated engine output.
  Rng a(derive_seed(9, 0)), b(derive_seed(9, 1));
  CHECK(a.bits() != b.bits());
}

TEST_CASE("monte carlo rejects degenerate sample counts") {
  RotatedBox<double> box(0, 0, 2, 2, 0);
  CHECK_THROWS_AS(mc_intersection_area(box, box, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_intersection_area(box, box, 1, 1), std::invalid_argument);
}

TEST_CASE("monte carlo endpoints are exact") {
  RotatedBox<double> sq(0, 0, 2, 2, 0);
  // Coincident boxes: every sample in the joint AABB lands in both.
  McEstimate id = mc_intersection_area(sq, sq, 50000, 3);
  CHECK(id.mean == 4.0);
  CHECK(id.std_err == 0.0);
  CHECK(id.n_samples == 50000);
  CHECK(id.seed == 3);
  // Disjoint boxes: no sample can land in both.
  McEstimate dj = mc_intersection_area(sq, RotatedBox<double>(30, 30, 2, 2, 0.5), 50000, 3);
  CHECK(dj.mean == 0.0);
  CHECK(dj.std_err == 0.0);
}

TEST_CASE("monte carlo agrees with clipping closed forms") {
  RotatedBox<double> sq(0, 0, 2, 2, 0);
  struct Case {
    RotatedBox<double> other;
    double exact;
  };
  const Case cases[] = {
      {RotatedBox<double>(1, 0, 2, 2, 0), 2.0},
      {RotatedBox<double>(1, 1, 2, 2, 0), 1.0},
      {RotatedBox<double>(0, 0, 2, 2, std::numbers::pi / 4), 8.0 * (std::sqrt(2.0) - 1.0)},
  };
  for (const Case& c : cases) {
    McEstimate e = mc_intersection_area(sq, c.other, 200000, 7);
    CHECK(e.std_err > 0.0);
    CHECK(std::abs(e.mean - c.exact) <= 4.0 * e.std_err);
  }
}

TEST_CASE("monte carlo is bitwise deterministic and chunk-stable") {
  RotatedBox<double> a(0, 0, 2, 2, 0), b(1, 0.5, 2.5, 1.5, 0.4);
  McEstimate e1 = mc_intersection_area(a, b, 100000, 11);
  McEstimate e2 = mc_intersection_area(a, b, 100000, 11);
  CHECK(same_estimate(e1, e2));
  CHECK(same_estimate(e1, mc_intersection_area_serial(a, b, 100000, 11)));
  // A trailing partial chunk must not disturb the chunked accumulation.
  std::uint64_t n = detail::kMcChunk + 5;
  CHECK(same_estimate(mc_intersection_area(a, b, n, 11), mc_intersection_area_serial(a, b, n, 11)));
}

TEST_CASE("dense pixel iou validates its step") {
  RotatedBox<double> sq(0, 0, 2, 2, 0);
  CHECK_THROWS_AS(dense_pixel_iou(sq, sq, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dense_pixel_iou(sq, sq, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(dense_pixel_iou(sq, sq, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(dense_pixel_iou(sq, sq, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("dense pixel iou converges to the clipping ratios") {
  RotatedBox<double> sq(0, 0, 2, 2, 0);
  CHECK(dense_pixel_iou(sq, sq, 0.01) == 1.0);
  CHECK(dense_pixel_iou(sq, RotatedBox<double>(30, 30, 2, 2, 0.5), 0.01) == 0.0);

  double shifted = dense_pixel_iou(sq, RotatedBox<double>(1, 0, 2, 2, 0), 0.002);
  CHECK(std::abs(shifted - 1.0 / 3.0) < 2e-3);

  double inter = 8.0 * (std::sqrt(2.0) - 1.0);
  double rotated = dense_pixel_iou(sq, RotatedBox<double>(0, 0, 2, 2, std::numbers::pi / 4), 0.002);
  CHECK(std::abs(rotated - inter / (8.0 - inter)) < 1e-5);

  // Same lattice walked serially.
  CHECK(dense_pixel_iou_serial(sq, RotatedBox<double>(1, 0, 2, 2, 0), 0.002) == shifted);
}

TEST_CASE("worker cap does not change results") {
  RotatedBox<double> a(0, 0, 3, 2, 0.3), b(0.8, -0.4, 2, 2.5, -0.6);
  McEstimate base = mc_intersection_area(a, b, 100000, 13);
  double dense_base = dense_pixel_iou(a, b, 0.01);

  std::string saved;
  bool had = false;
  if (const char* env = std::getenv("ROTBOX_THREADS")) {
    saved = env;
    had = true;
  }
  setenv("ROTBOX_THREADS", "1", 1);
  CHECK(same_estimate(base, mc_intersection_area(a, b, 100000, 13)));
  CHECK(dense_pixel_iou(a, b, 0.01) == dense_base);
  if (had)
    setenv("ROTBOX_THREADS", saved.c_str(), 1);
  else
    unsetenv("ROTBOX_THREADS");
}

}  // TEST_SUITE
