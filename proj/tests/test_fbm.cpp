#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ggbm/errors.hpp"
#include "ggbm/fbm.hpp"
#include "ggbm/stats.hpp"

using namespace ggbm;

namespace {

double fbm_cov(double h, double t, double s) {
  return 0.5 * (std::pow(t, 2 * h) + std::pow(s, 2 * h) - std::pow(std::abs(t - s), 2 * h));
}

}  // namespace

TEST_CASE("fgn autocovariance") {
  CHECK(fgn_autocovariance(0.5, 0) == doctest::Approx(1.0));
  CHECK(std::abs(fgn_autocovariance(0.5, 3)) < 1e-15);
  CHECK(fgn_autocovariance(0.75, 1) == doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2.0)));
  CHECK(fgn_autocovariance(0.25, 1) < 0.0);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((GridSpec{0.0, 4}.validate()), DomainError);
  CHECK_THROWS_AS((GridSpec{1.0, 0}.validate()), DomainError);
  CHECK_THROWS_AS(FbmGenerator(0.0, GridSpec{1.0, 4}), DomainError);
  CHECK_THROWS_AS(FbmGenerator(1.2, GridSpec{1.0, 4}), DomainError);
}

TEST_CASE("paths start at zero and are reproducible") {
  for (auto method : {FbmMethod::CirculantEmbedding, FbmMethod::Cholesky}) {
    const GridSpec grid{2.0, 64};
    const Path a = generate_fbm(0.3, grid, 3, SeedSpec{9, 2}, method);
    const Path b = generate_fbm(0.3, grid, 3, SeedSpec{9, 2}, method);
    CHECK(a.values == b.values);
    CHECK(a.values.size() == 65u * 3u);
    for (int j = 0; j < 3; ++j) CHECK(a.at(0, j) == 0.0);
    const Path c = generate_fbm(0.3, grid, 3, SeedSpec{9, 3}, method);
    CHECK(a.values != c.values);
  }
}

TEST_CASE("covariance of both methods") {
  const GridSpec grid{1.0, 32};
  const int n = 20000;
  for (double h : {0.25, 0.5, 0.8}) {
    for (auto method : {FbmMethod::CirculantEmbedding, FbmMethod::Cholesky}) {
      FbmGenerator gen(h, grid, method);
      std::vector<double> buf(grid.n_points() * 2);
      std::vector<double> tt(n), ts(n), cross(n);
      for (int i = 0; i < n; ++i) {
        RngStream rng(SeedSpec{77, static_cast<std::uint64_t>(i)});
        gen.generate(rng, 2, buf);
        const double bt = buf[32 * 2], bs = buf[12 * 2];
        tt[i] = bt * bt;
        ts[i] = bt * bs;
        cross[i] = bt * buf[32 * 2 + 1];  // independent coordinates
      }
      const double t = 1.0, s = 12.0 / 32.0;
      auto ok = [](const std::vector<double>& v, double expected) {
        const MeanSe m = mean_and_se(v);
        return std::abs(m.mean - expected) <= 4.0 * m.std_error;
      };
      CHECK(ok(tt, fbm_cov(h, t, t)));
      CHECK(ok(ts, fbm_cov(h, t, s)));
      CHECK(ok(cross, 0.0));
    }
  }
}

TEST_CASE("circulant and cholesky agree in law") {
  const GridSpec grid{1.0, 100};
  FbmGenerator a(0.7, grid, FbmMethod::CirculantEmbedding), b(0.7, grid, FbmMethod::Cholesky);
  CHECK(a.method() == FbmMethod::CirculantEmbedding);
  CHECK(b.method() == FbmMethod::Cholesky);
  std::vector<double> xa, xb, buf(grid.n_points());
  for (int i = 0; i < 5000; ++i) {
    RngStream ra(SeedSpec{1, static_cast<std::uint64_t>(i)}), rb(SeedSpec{2, static_cast<std::uint64_t>(i)});
    a.generate(ra, 1, buf);
    xa.push_back(buf[50] - buf[30]);
    b.generate(rb, 1, buf);
    xb.push_back(buf[50] - buf[30]);
  }
  CHECK(ks_two_sample(xa, xb).p_value > 0.001);
}

TEST_CASE("hurst one is a random line") {
  const Path p = generate_fbm(1.0, GridSpec{3.0, 6}, 2, SeedSpec{4, 0});
  for (int k = 1; k <= 6; ++k)
    for (int j = 0; j < 2; ++j) CHECK(p.at(k, j) == doctest::Approx(p.at(1, j) * k).epsilon(1e-12));
}

TEST_CASE("large grid uses the circulant embedding") {
  FbmGenerator gen(0.75, GridSpec{50.0, 2048});
  CHECK(gen.method() == FbmMethod::CirculantEmbedding);
  const Path p = gen.generate(3, SeedSpec{1, 1});
  CHECK(p.values.size() == 2049u * 3u);
}

TEST_CASE("rescale path") {
  const Path p = generate_fbm(0.6, GridSpec{1.0, 8}, 1, SeedSpec{3, 0});
  const Path q = rescale_path(p, 4.0);
  CHECK(q.grid.t_max == doctest::Approx(4.0));
  CHECK(q.grid.n_steps == 8);
  for (int k = 0; k <= 8; ++k) CHECK(q.at(k, 0) == doctest::Approx(p.at(k, 0) * std::pow(4.0, 0.6)));
  CHECK_THROWS_AS(rescale_path(p, 0.0), DomainError);
}
