#include "mves/errors.hpp"
#include "mves/metrics.hpp"
#include "mves/purity.hpp"
#include "mves/random.hpp"
#include "mves/solver.hpp"
#include "mves/theorems.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace mves;

namespace {

Matrix random_abundances(Rng& rng, int n, Eigen::Index count) {
  Matrix s(n, count);
  for (Eigen::Index k = 0; k < count; ++k) s.col(k) = rng.dirichlet(Vector::Ones(n));
  return s;
}

Matrix with_pure_pixels(const Matrix& s) {
  const Eigen::Index n = s.rows();
  Matrix out(n, s.cols() + n);
  out << s, Matrix::Identity(n, n);
  return out;
}

Matrix positive_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(0.1, 1.0);
  return m;
}

}  // namespace

TEST_CASE("config validation and strategy names", "[solver]") {
  MvesConfig cfg;
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = MvesConfig{};
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  CHECK(parse_init_strategy("greedy") == InitStrategy::greedy_volume_max);
  CHECK(parse_init_strategy("regular_inflated") == InitStrategy::regular_inflated);
  CHECK(to_string(InitStrategy::regular_inflated) == "regular_inflated");
  CHECK_THROWS_AS(parse_init_strategy("bogus"), ValidationError);
}

TEST_CASE("two endmembers give the data interval exactly", "[solver]") {
  Rng rng(41);
  const Matrix a = positive_matrix(rng, 5, 2);
  Matrix s(2, 30);
  for (Eigen::Index k = 0; k < s.cols(); ++k) {
    const double t = rng.uniform(0.2, 0.7);
    s.col(k) << t, 1.0 - t;
  }
  s(0, 3) = 0.1;
  s(1, 3) = 0.9;
  s(0, 7) = 0.85;
  s(1, 7) = 0.15;
  const MvesResult r = solve_mves(a * s, 2);
  const Matrix expected_vertices = a * (Matrix(2, 2) << 0.1, 0.85, 0.9, 0.15).finished();
  const Matrix& got = r.estimated_endmembers.vertices();
  const double direct = (got - expected_vertices).cwiseAbs().maxCoeff();
  const double swapped = (got.rowwise().reverse() - expected_vertices).cwiseAbs().maxCoeff();
  CHECK(std::min(direct, swapped) < 1e-12);
  CHECK(r.all_points_enclosed);
}

TEST_CASE("pure pixels are recovered", "[solver]") {
  for (int n = 3; n <= 5; ++n) {
    Rng rng(42 + n);
    const Matrix a = positive_matrix(rng, 20, n);
    const Matrix s = with_pure_pixels(random_abundances(rng, n, 200));
    const MvesResult r = solve_mves(a * s, n);
    CHECK(r.all_points_enclosed);
    // Map the estimate back to abundances through A's pseudo-inverse.
    const Matrix est = a.completeOrthogonalDecomposition().solve(r.estimated_endmembers.vertices());
    CHECK(vertex_rms_to_unit_simplex(est) < 1e-6);
    CHECK(rms_angle_error(a, r.estimated_endmembers.vertices()).phi_degrees < 1e-4);
  }
}

TEST_CASE("dense purity-region cloud above the threshold is recovered", "[solver]") {
  const int n = 3;
  PurityRegionSampler sampler(n);
  Rng rng(45);
  const Matrix s = sampler.dense_cloud(0.8, 2000, rng);
  const MvesResult r = solve_mves(s, n);
  CHECK(vertex_rms_to_unit_simplex(r.estimated_endmembers.vertices()) < 1e-6);
}

TEST_CASE("initial simplices enclose the data", "[solver]") {
  Rng rng(46);
  for (int n = 2; n <= 5; ++n) {
    Matrix thetas(n - 1, 100);
    for (Eigen::Index i = 0; i < thetas.size(); ++i) thetas.data()[i] = rng.normal();
    for (auto strategy : {InitStrategy::greedy_volume_max, InitStrategy::regular_inflated}) {
      for (int restart = 0; restart < 3; ++restart) {
        const PolyhedralSimplex p = initialize_simplex(thetas, n, strategy, 9, restart);
        CHECK(p.slacks_points(thetas).minCoeff() >= 0.0);
      }
    }
  }
}

TEST_CASE("greedy start picks the simplex vertices when they are data points", "[solver]") {
  const int n = 4;
  Rng rng(47);
  const Matrix s = with_pure_pixels(random_abundances(rng, n, 100));
  const AffineChart chart = canonical_abundance_chart(n);
  const Matrix thetas = chart.to_chart_points(s);
  const PolyhedralSimplex p = initialize_simplex(thetas, n, InitStrategy::greedy_volume_max, 0);
  // The chosen simplex is the unit simplex dilated by 1.05 about its centroid,
  // so each vertex sits 0.05 * ||e_i - 1/n|| from its unit vector.
  const Matrix v = chart.to_ambient_points(to_vertices(p).vertices());
  const double offset = 0.05 * std::sqrt((n - 1.0) / n);
  CHECK(std::abs(vertex_rms_to_unit_simplex(v) - offset) < 1e-9);
}

TEST_CASE("regular start has the inflated ball-bound volume", "[solver]") {
  Rng rng(48);
  for (int n = 3; n <= 5; ++n) {
    Matrix thetas(n - 1, 50);
    for (Eigen::Index i = 0; i < thetas.size(); ++i) thetas.data()[i] = rng.normal();
    const Vector center = thetas.rowwise().mean();
    const double radius = (thetas.colwise() - center).colwise().norm().maxCoeff();
    const PolyhedralSimplex p = initialize_simplex(thetas, n, InitStrategy::regular_inflated, 0);
    const double inradius = 1.05 * radius;
    const double expected = std::pow(n, n / 2.0) * std::pow(n - 1, (n - 1) / 2.0) *
                            std::pow(inradius, n - 1) / linalg::factorial(n - 1);
    CHECK(std::abs(p.volume() - expected) < 1e-9 * expected);
  }
}

TEST_CASE("tangency points sit on the facets", "[solver]") {
  const int n = 3;
  const double radius = 0.4;
  const Simplex s = circumscribed_regular_simplex(n, radius, Vector::Zero(n - 1));
  const PolyhedralSimplex p = to_polyhedral(s);
  const auto pts = tangency_points(p, radius);
  REQUIRE(pts.size() == static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(std::abs(pts[i].norm() - radius) < 1e-12);
    const Vector sl = p.slacks(pts[i]);
    CHECK(std::abs(sl[static_cast<Eigen::Index>(i)]) < 1e-10);
    CHECK(sl.minCoeff() > -1e-10);
  }
  CHECK_THROWS_AS(tangency_points(p, 0.0), DomainError);
}

TEST_CASE("minimum simplex around a dense circle is tangent to it", "[solver]") {
  const int n = 3;
  const double radius = 0.5;
  const int count = 720;
  Matrix thetas(2, count);
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * M_PI * k / count;
    thetas.col(k) << radius * std::cos(t), radius * std::sin(t);
  }
  const MvesResult r = solve_mves(thetas, n);
  // Inradius of the result is the circle radius up to the polygon gap.
  const PolyhedralSimplex local = to_polyhedral(r.estimated_endmembers);
  const Vector sl = local.slacks(Vector::Zero(2));
  for (int i = 0; i < n; ++i) {
    const Vector normal = (i < n - 1) ? Vector(local.h().col(i)) : Vector(-local.h().rowwise().sum());
    CHECK(std::abs(sl[i] / normal.norm() - radius) < 1e-4);
  }
  const double regular = std::pow(3.0, 1.5) * radius * radius;
  CHECK(std::abs(r.volume - regular) < 1e-3 * regular);
}

TEST_CASE("volume never increases across cycles", "[solver]") {
  Rng rng(49);
  const int n = 4;
  const Matrix s = random_abundances(rng, n, 300);
  const MvesResult r = solve_mves(positive_matrix(rng, 10, n) * s, n);
  REQUIRE(r.det_history.size() >= 2);
  for (std::size_t i = 1; i < r.det_history.size(); ++i) {
    CHECK(r.det_history[i] >= r.det_history[i - 1] * (1.0 - 1e-12));
  }
  CHECK(r.all_points_enclosed);
  CHECK(r.cycles_used >= 1);
}

TEST_CASE("estimate is equivariant under the mixing matrix", "[solver]") {
  const int n = 3;
  PurityRegionSampler sampler(n);
  Rng rng(50);
  const Matrix s = sampler.dense_cloud(0.8, 1000, rng);
  const MvesResult base = solve_mves(s, n);
  const Matrix a = positive_matrix(rng, 8, n);
  const MvesResult mixed = solve_mves(a * s, n);
  const Matrix mapped = a * base.estimated_endmembers.vertices();
  CHECK(rms_angle_error(mapped, mixed.estimated_endmembers.vertices()).phi_degrees < 1e-4);
  const Matrix est = a.completeOrthogonalDecomposition().solve(mixed.estimated_endmembers.vertices());
  const Matrix ref = base.estimated_endmembers.vertices();
  // Column order may differ; compare by matching to the unit simplex.
  CHECK(std::abs(vertex_rms_to_unit_simplex(est) - vertex_rms_to_unit_simplex(ref)) < 1e-6);
}

TEST_CASE("low-rank data is rejected", "[solver]") {
  Rng rng(51);
  const Matrix s = random_abundances(rng, 2, 50);
  const Matrix x = positive_matrix(rng, 6, 2) * s;  // affine dimension 1
  CHECK_THROWS_AS(solve_mves(x, 3), AffineDimensionError);
  CHECK_THROWS_AS(solve_mves(Matrix::Ones(1, 10), 3), AffineDimensionError);
  CHECK_THROWS_AS(solve_mves(x, 1), DimensionError);
}
