#include "mves/errors.hpp"
#include "mves/lp.hpp"
#include "mves/purity.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace mves;

TEST_CASE("best purity and region membership", "[purity]") {
  Matrix s(3, 3);
  s << 1.0, 0.5, 1.0 / 3, 0.0, 0.5, 1.0 / 3, 0.0, 0.0, 1.0 / 3;
  CHECK(best_purity(s) == 1.0);
  CHECK(best_purity(s.rightCols(2)) == Catch::Approx(std::sqrt(0.5)));
  Vector half(2);
  half << 0.5, 0.5;
  CHECK(in_region_r(half, std::sqrt(0.5)));
  CHECK_FALSE(in_region_r(half, 0.7));
  Vector neg(2);
  neg << 1.5, -0.5;
  CHECK_FALSE(in_region_r(neg, 2.0));
}

TEST_CASE("off-simplex abundances name the worst column", "[purity]") {
  Matrix s(2, 3);
  s << 0.5, 0.7, -0.2, 0.5, 0.3, 1.2;
  try {
    require_on_unit_simplex(s);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("column 2") != std::string::npos);
  }
  Matrix loose(2, 1);
  loose << 0.5, 0.5 + 1e-7;
  CHECK_THROWS_AS(require_on_unit_simplex(loose), ValidationError);
  CHECK_NOTHROW(require_on_unit_simplex(loose, 1e-6));
}

TEST_CASE("uniform purity of pure pixels is one", "[purity]") {
  UniformPurityOptions opts;
  opts.n_samples = 2000;
  for (int n = 2; n <= 5; ++n) {
    const auto est = uniform_purity_lower_bound(Matrix::Identity(n, n), opts);
    CHECK(est.value >= 1.0 - 1e-12);
  }
}

TEST_CASE("uniform purity of a dense region cloud matches its radius", "[purity]") {
  const int n = 3;
  PurityRegionSampler sampler(n);
  Rng rng(61);
  const Matrix cloud = sampler.dense_cloud(0.8, 2000, rng);
  UniformPurityOptions opts;
  opts.n_samples = 2000;
  const auto est = uniform_purity_lower_bound(cloud, opts);
  CHECK(std::abs(est.value - 0.8) < 0.02);
  CHECK(est.samples_used > 0);
}

TEST_CASE("max abundance closed form", "[purity]") {
  for (int n = 2; n <= 6; ++n) {
    const double floor = 1.0 / std::sqrt(static_cast<double>(n));
    // At the floor r^2 - 1/n is pure rounding, amplified by the square root.
    CHECK(std::abs(max_abundance_at_purity(n, floor) - 1.0 / n) < 1e-7);
    CHECK(std::abs(max_abundance_at_purity(n, 1.0) - 1.0) < 1e-12);
    double prev = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double r = floor + (1.0 - floor) * k / 20.0;
      const double v = max_abundance_at_purity(n, r);
      CHECK(v >= prev);
      const double direct = (1.0 + std::sqrt(std::max((n - 1.0) * (n * r * r - 1.0), 0.0))) / n;
      CHECK(std::abs(v - direct) < (k == 0 ? 1e-7 : 1e-12));
      prev = v;
    }
    CHECK_THROWS_AS(max_abundance_at_purity(n, floor - 0.01), DomainError);
    CHECK_THROWS_AS(max_abundance_at_purity(n, 1.01), DomainError);
  }
  // The maximizer e.g. for n = 3: s = (a, b, b) with norm r.
  const double r = 0.8;
  const double a = max_abundance_at_purity(3, r);
  const double b = (1.0 - a) / 2.0;
  CHECK(std::abs(std::sqrt(a * a + 2 * b * b) - r) < 1e-12);
}

TEST_CASE("edge pixels", "[purity]") {
  const Matrix e = edge_pixels(EdgePixelSpec::uniform(3, 0.7));
  REQUIRE(e.cols() == 6);
  CHECK(e(0, 0) == 0.7);
  CHECK(std::abs(e(1, 0) - 0.3) < 1e-15);
  CHECK((e.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(EdgePixelSpec::uniform(3, 0.5), ValidationError);
  CHECK_THROWS_AS(EdgePixelSpec(Matrix::Constant(2, 3, 0.7)), DimensionError);
}

TEST_CASE("edge pixel purity bound values", "[purity]") {
  CHECK(std::abs(edge_pixel_purity_bound(4, 0.6) - 0.64291) < 1e-5);
  CHECK(std::abs(edge_pixel_purity_bound(3, 2.0 / 3.0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(edge_pixel_purity_bound(5, 1.0) - 1.0) < 1e-12);
  CHECK_THROWS_AS(edge_pixel_purity_bound(3, 0.5), DomainError);
}

TEST_CASE("edge pixel hull membership agrees with the LP", "[purity]") {
  const int n = 4;
  const double alpha = 0.7;
  const Matrix gens = edge_pixels(EdgePixelSpec::uniform(n, alpha));
  Rng rng(62);
  int inside = 0;
  for (int k = 0; k < 10000; ++k) {
    const Vector s = rng.dirichlet(Vector::Constant(n, 0.7));
    if (std::abs(s.maxCoeff() - alpha) < 1e-7) continue;
    const bool expected = in_convex_hull(s, gens, 1e-9);
    CHECK(in_edge_pixel_hull(s, alpha) == expected);
    inside += expected ? 1 : 0;
  }
  CHECK(inside > 100);
}

TEST_CASE("purity report ordering", "[purity]") {
  PurityRegionSampler sampler(4);
  Rng rng(63);
  const Matrix cloud = sampler.dense_cloud(0.75, 1500, rng);
  UniformPurityOptions opts;
  opts.n_samples = 1000;
  const PurityReport rep = purity_report(cloud, opts);
  CHECK(1.0 / std::sqrt(4.0) <= rep.uniform_purity_lower);
  CHECK(rep.uniform_purity_lower <= rep.best_purity + 1e-12);
  CHECK(rep.best_purity <= 1.0);
  CHECK(std::abs(rep.threshold - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(rep.necessary_ok == (rep.best_purity > rep.threshold));
  CHECK(rep.sufficient_ok == (rep.uniform_purity_lower > rep.threshold));
}

TEST_CASE("dense cloud stays in the region", "[purity]") {
  for (int n = 2; n <= 5; ++n) {
    PurityRegionSampler sampler(n);
    Rng rng(64);
    const Matrix cloud = sampler.dense_cloud(0.9, 500, rng);
    REQUIRE(cloud.cols() == 500);
    for (Eigen::Index k = 0; k < cloud.cols(); ++k) CHECK(in_region_r(cloud.col(k), 0.9 + 1e-9));
  }
  PurityRegionSampler sampler(3);
  Rng rng(65);
  CHECK_THROWS_AS(sampler.dense_cloud(0.5, 10, rng), DomainError);
}
