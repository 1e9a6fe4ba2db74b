#include <cmath>

#include "doctest.h"
#include "mgsim/fft.hpp"
#include "mgsim/spectral_ops.hpp"
#include "mgsim/symbols.hpp"

using namespace mgsim;
using namespace mgsim::velocity;

namespace {

const MgParams kRef{0.5, 1.0};

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("MG spot values at Omega = 1/2, beta^2/eta = 1") {
  const Grid g{32, 32, 32};
  const auto m = mg_symbol(kRef, g);
  CHECK(close(m.at({0, 1, 1}, 0), 2.0 / 3.0, 1e-14));
  CHECK(close(m.at({0, 1, 1}, 1), -1.0 / 3.0, 1e-14));
  CHECK(close(m.at({0, 1, 1}, 2), 1.0 / 3.0, 1e-14));
  CHECK(close(m.at({1, 0, 1}, 0), 0.0, 1e-14));
  CHECK(close(m.at({1, 0, 1}, 1), -1.0, 1e-14));
  CHECK(close(m.at({1, 0, 1}, 2), 0.0, 1e-14));
}

TEST_CASE("MG convention on the k3 = 0 plane") {
  const Grid g{32, 32, 32};
  const auto m = mg_symbol(kRef, g);
  CHECK(m.at({5, 3, 0}, 0) == Complex(0.0, 0.0));
  CHECK(m.at({5, 3, 0}, 1) == Complex(0.0, 0.0));
  CHECK(m.at({5, 3, 0}, 2) == m.at({5, 3, 1}, 2));
  const auto v = mg_symbol_at(kRef, {5, 3, 0});
  CHECK(v[2] == mg_symbol_at(kRef, {5, 3, 1})[2]);
}

TEST_CASE("MG symbol is divergence free, real and even over the grid") {
  const Grid g{32, 32, 32};
  const auto m = mg_symbol(kRef, g);
  CHECK(m.divergence_defect() <= 1e-12);
  CHECK(m.reality_defect() <= 1e-15);
  for (int i = -15; i <= 15; i += 3)
    for (int j = -15; j <= 15; j += 4)
      for (int k = -15; k <= 15; k += 5)
        for (int c = 0; c < 3; ++c) {
          CHECK(m.at({i, j, k}, c).imag() == 0.0);
          CHECK(m.at({i, j, k}, c) == m.at({-i, -j, -k}, c));
        }
  // M̂₃ carries k₂² in its numerator.
  for (int i = -10; i <= 10; ++i) CHECK(m.at({i, 0, 3}, 2) == Complex(0.0, 0.0));
}

TEST_CASE("MG rejects a 2-d grid and invalid parameters") {
  CHECK_THROWS_AS(mg_symbol(kRef, Grid{16, 16}), std::invalid_argument);
  CHECK_THROWS_AS(mg_symbol({-1.0, 1.0}, Grid{8, 8, 8}), std::invalid_argument);
  CHECK_THROWS_AS(mg_symbol({0.5, 0.0}, Grid{8, 8, 8}), std::invalid_argument);
}

TEST_CASE("perp-Riesz symbol by hand") {
  const Grid g{16, 16};
  const auto m = perp_riesz_symbol(1, g);
  CHECK(close(m.at({1, 0, 0}, 0), 0.0, 1e-15));
  CHECK(close(m.at({1, 0, 0}, 1), -1.0, 1e-15));
  CHECK(close(m.at({0, 1, 0}, 0), 0.0, 1e-15));
  CHECK(close(m.at({0, 1, 0}, 1), 0.0, 1e-15));
  CHECK(m.divergence_defect() <= 1e-15);
  CHECK(m.reality_defect() <= 1e-15);
  CHECK(measure_growth_constant(m) <= 1.0 + 1e-15);
  CHECK_THROWS_AS(perp_riesz_symbol(1, Grid{8, 8, 8}), std::invalid_argument);
  CHECK_THROWS_AS(perp_riesz_symbol(3, g), std::invalid_argument);
}

TEST_CASE("T reconstruction and double divergence") {
  const Grid g{32, 32, 32};
  const auto m = mg_symbol(kRef, g);
  const auto t = tij_from_symbol(m);
  CHECK(close(t.at({0, 1, 1}, 1, 2), Complex(0.0, -1.0 / 6.0), 1e-15));
  CHECK(tij_reconstruction_defect(m, t) <= 1e-12);
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) CHECK(t.at({0, 0, 0}, r, c) == Complex(0.0, 0.0));
  // Columns vanish where M̂ does: k = (1, 0, 1) has M̂₁ = M̂₃ = 0.
  for (int r = 0; r < 3; ++r) {
    CHECK(std::abs(t.at({1, 0, 1}, r, 0)) < 1e-15);
    CHECK(std::abs(t.at({1, 0, 1}, r, 2)) < 1e-15);
  }
  double worst = 0.0;
  for (int a = -15; a <= 16; a += 3)
    for (int b = -15; b <= 16; b += 5)
      for (int c = -15; c <= 16; c += 2) {
        const IVec k{a, b, c};
        Complex dd = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) dd += Complex(0, k[i]) * Complex(0, k[j]) * t.at(k, i, j);
        worst = std::max(worst, std::abs(dd));
      }
  CHECK(worst <= 1e-12);
  CHECK(std::isfinite(t.sup_norm()));
}

TEST_CASE("apply_velocity on a single mode gives a steady field with u . grad theta = 0") {
  const Grid g{16, 16, 16};
  const auto m = mg_symbol(kRef, g);
  const auto th = PhysicalField::from_function(g, [](const RVec& x) { return std::cos(x[1] + x[2]); });
  const auto th_hat = spectral::forward_transform(th);
  const auto u = apply_velocity(m, th_hat);
  const auto grad = spectral::gradient(th_hat);
  std::vector<PhysicalField> up, gp;
  for (int j = 0; j < 3; ++j) {
    up.push_back(spectral::inverse_transform(u[j]));
    gp.push_back(spectral::inverse_transform(grad[j]));
    CHECK(u[j].hermitian_defect() <= 1e-13);
  }
  const double expect[3] = {2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0};
  double adv = 0.0, err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double a = 0.0;
    for (int j = 0; j < 3; ++j) {
      a += up[j][i] * gp[j][i];
      err = std::max(err, std::abs(up[j][i] - expect[j] * th[i]));
    }
    adv = std::max(adv, std::abs(a));
  }
  CHECK(err < 1e-14);
  CHECK(adv < 1e-14);

  const auto zero = apply_velocity(m, SpectralField(g));
  for (const auto& c : zero) CHECK(spectral::l2_norm_sq(c) == 0.0);
}

TEST_CASE("MG velocity of a projected field independent of x3 vanishes") {
  const Grid g{16, 16, 16};
  const auto m = mg_symbol(kRef, g);
  const auto th = PhysicalField::from_function(g, [](const RVec& x) { return std::cos(x[0]) + std::sin(2 * x[1]); });
  const auto h = spectral::project_zero_vertical_mean(spectral::forward_transform(th));
  for (const auto& c : apply_velocity(m, h)) CHECK(spectral::l2_norm_sq(c) == 0.0);
}

TEST_CASE("spectral divergence of the velocity is zero") {
  const Grid g{16, 16, 16};
  const auto m = mg_symbol({1.3, 0.7}, g);
  const auto th = PhysicalField::from_function(
      g, [](const RVec& x) { return std::cos(x[0] + 2 * x[2]) * std::sin(3 * x[1] - x[2]) + std::cos(x[2]); });
  const auto h = spectral::forward_transform(th);
  const auto u = apply_velocity(m, h);
  double worst = 0.0, scale = 0.0;
  for_each_mode(g, [&](std::size_t s, const IVec& k, double) {
    Complex div = 0.0;
    for (int j = 0; j < 3; ++j) {
      div += Complex(0, k[j]) * u[j][s];
      scale = std::max(scale, std::abs(u[j][s]));
    }
    worst = std::max(worst, std::abs(div));
  });
  CHECK(worst <= 1e-12 * std::max(scale, 1.0));
}

TEST_CASE("growth constant") {
  const auto m32 = mg_symbol(kRef, Grid{32, 32, 32});
  const auto m64 = mg_symbol(kRef, Grid{64, 64, 64});
  const double c32 = measure_growth_constant(m32);
  const double c64 = measure_growth_constant(m64);
  CHECK(std::isfinite(c32));
  CHECK(c32 >= 1.0 / std::sqrt(2.0) - 1e-15);
  CHECK(std::abs(mg_symbol_at(kRef, {1, 0, 1})[1]) / std::sqrt(2.0) == doctest::Approx(0.70710678118654752));
  CHECK(std::abs(c64 - c32) < 0.2 * c32);
}

TEST_CASE("curved-region scan") {
  const auto m = mg_symbol(kRef, Grid{8, 8, 8});
  const std::vector<int> k1s{100, 400};
  const auto rows = curved_region_scan(m, 0.5, k1s);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].k2 == 10);
  CHECK(rows[0].abs_m2 == doctest::Approx(1011100.0 / 20101.0).epsilon(1e-14));
  CHECK(rows[0].m2_over_k1 == doctest::Approx(0.503).epsilon(1e-3));
  CHECK(rows[1].k2 == 20);
  CHECK(rows[1].abs_m2 == doctest::Approx(200.27).epsilon(1e-4));
  CHECK(std::abs(rows[1].m2_over_k1 - rows[0].m2_over_k1) < 0.05 * rows[0].m2_over_k1);
  const std::vector<int> bad{3};
  CHECK_THROWS_AS(curved_region_scan(m, 0.5, bad), std::invalid_argument);
  CHECK_THROWS_AS(curved_region_scan(m, 0.7, k1s), std::invalid_argument);
  CHECK_THROWS_AS(curved_region_scan(zero_symbol(Grid{8, 8, 8}), 0.5, k1s), std::invalid_argument);
}

TEST_CASE("custom symbols are validated") {
  const Grid g{8, 8};
  const auto good = perp_riesz_symbol(2, g);
  std::vector<Complex> table(good.table().begin(), good.table().end());
  CHECK_NOTHROW(custom_symbol(g, table));

  auto not_div_free = table;
  const std::size_t flat = good.full_index({1, 0, 0});
  not_div_free[flat * 2 + 0] += 0.5;
  not_div_free[good.full_index({-1, 0, 0}) * 2 + 0] += 0.5;
  CHECK_THROWS_AS(custom_symbol(g, not_div_free), std::invalid_argument);

  auto not_real = table;
  not_real[good.full_index({1, 2, 0}) * 2 + 1] += Complex(0.25, 0.0);
  not_real[good.full_index({1, 2, 0}) * 2 + 0] -= Complex(0.5, 0.0);
  CHECK_THROWS_AS(custom_symbol(g, not_real), std::invalid_argument);

  CHECK_THROWS_AS(custom_symbol(g, std::vector<Complex>(3)), std::invalid_argument);
}
