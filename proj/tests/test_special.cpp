#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "symlik/gauss.hpp"
#include "symlik/special.hpp"

using namespace symlik;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE_BEGIN("special");

TEST_CASE("normal quantile matches arbitrary-precision values") {
  // Reference values from mpmath (tests/oracle/gen_reference_values.py).
  struct Row {
    double p, z;
  };
  const Row rows[] = {
      {1e-300, -37.0470962993611992}, {1e-100, -21.2734535609653243},
      {1e-20, -9.26234008979840757},  {1e-10, -6.3613409024040562},
      {0.001, -3.09023230616781354},  {0.025, -1.95996398454005424},
      {0.1, -1.28155156554460047},    {0.3, -0.524400512708040784},
      {0.5, 0.0},                     {0.7, 0.524400512708040784},
      {0.975, 1.95996398454005424},   {0.999, 3.09023230616781354},
  };
  for (const auto& r : rows)
    CHECK(norm_quantile(r.p) == doctest::Approx(r.z).epsilon(1e-14));
  // Upper-tail arguments lose precision in the representation of p
  // itself (1 - p cancels); only ~1e-7 absolute accuracy is meaningful.
  CHECK(std::abs(norm_quantile(1.0 - 1e-10) - 6.3613409024040562) < 1e-6);
  CHECK_THROWS_AS(norm_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(norm_quantile(1.0), std::domain_error);
}

TEST_CASE("normal cdf/quantile round trip") {
  for (double x : {-8.0, -3.0, -1.0, -0.25, 0.0, 0.5}) {
    CHECK(norm_quantile(norm_cdf(x)) == doctest::Approx(x).epsilon(1e-12));
  }
  // The upper tail is representation-limited through p = cdf(x).
  for (double x : {2.0, 6.0}) {
    CHECK(std::abs(norm_quantile(norm_cdf(x)) - x) < 1e-6);
  }
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5));
  CHECK(norm_cdf(kInf) == 1.0);
  CHECK(norm_cdf(-kInf) == 0.0);
}

TEST_CASE("log normal cdf deep tail") {
  // mpmath log(Phi(x)).
  CHECK(norm_log_cdf(-10.0) == doctest::Approx(-53.2312851505124706).epsilon(1e-12));
  CHECK(norm_log_cdf(-20.0) == doctest::Approx(-203.917155371097264).epsilon(1e-12));
  CHECK(norm_log_cdf(-38.4) == doctest::Approx(-741.847673015248313).epsilon(1e-12));
  CHECK(norm_log_cdf(1.3) == doctest::Approx(std::log(norm_cdf(1.3))));
}

TEST_CASE("Owen's T matches arbitrary-precision quadrature") {
  struct Row {
    double h, a, t;
  };
  const Row rows[] = {
      {0.0625, 0.25, 0.0389119302347013669},
      {6.5, 0.4375, 2.00057730485083154e-11},
      {7, 0.96875, 6.39906271938986853e-13},
      {4.78125, 0.0625, 1.06329748046874638e-7},
      {2, 0.5, 0.00862507798552150713},
      {1, 0.9999975, 0.0667418089782285923},
      {0.5, 2.0, 0.141580603653978393},
      {0.5, 100.0, 0.154268769362993448},
      {0.25, 10.0, 0.200569982876993897},
      {3.0, -1.5, -0.000674947561524667816},
      {-2.5, 3.0, 0.00310483266288804587},
      {1.5, 1.0, 0.0311719995637401776},
  };
  for (const auto& r : rows) {
    CAPTURE(r.h);
    CAPTURE(r.a);
    CHECK(owens_t(r.h, r.a) == doctest::Approx(r.t).epsilon(1e-12));
  }
  CHECK(owens_t(1.7, 0.0) == 0.0);
  // T(0, a) = atan(a) / (2 pi).
  CHECK(owens_t(0.0, 3.0) == doctest::Approx(std::atan(3.0) / (2 * kPi)).epsilon(1e-14));
  // T(h, 1) = Phi(h) (1 - Phi(h)) / 2.
  const double h = 0.73;
  CHECK(owens_t(h, 1.0) ==
        doctest::Approx(norm_cdf(h) * (1.0 - norm_cdf(h)) / 2.0).epsilon(1e-13));
}

TEST_CASE("bivariate normal cdf matches arbitrary-precision integration") {
  struct Row {
    double x, y, rho, p;
  };
  const Row rows[] = {
      {0, 0, 0.5, 0.333333333333333333},
      {1, -0.5, 0.3, 0.283138420244480952},
      {0.5, 1.2, -0.7, 0.577918150871023538},
      {-1, -1, 0.9, 0.115490337428358302},
      {2, 0.3, 0.75, 0.617528632240017913},
      {0.3, 0.2, 0.95, 0.547222774855269685},
      {-0.5, 0.25, -0.99, 0.000815163055925887763},
      {3, 3, 0.5, 0.997382093598572003},
      {-3.5, 1, 0.35, 0.000231014619904667228},
      {0, 0, -0.5, 0.166666666666666667},
      {1.5, 1.5, 0.97, 0.920576215738417339},
  };
  for (const auto& r : rows) {
    CAPTURE(r.x);
    CAPTURE(r.y);
    CAPTURE(r.rho);
    CHECK(bvn_cdf(r.x, r.y, r.rho) == doctest::Approx(r.p).epsilon(2e-14));
  }
}

TEST_CASE("bivariate normal cdf properties") {
  // Independence factorization.
  CHECK(bvn_cdf(0.7, -0.4, 0.0) ==
        doctest::Approx(norm_cdf(0.7) * norm_cdf(-0.4)).epsilon(1e-14));
  // Symmetry in the arguments.
  CHECK(bvn_cdf(0.3, 1.1, 0.6) == doctest::Approx(bvn_cdf(1.1, 0.3, 0.6)).epsilon(1e-14));
  // Marginal limits.
  CHECK(bvn_cdf(kInf, 0.2, 0.4) == doctest::Approx(norm_cdf(0.2)));
  CHECK(bvn_cdf(0.2, kInf, 0.4) == doctest::Approx(norm_cdf(0.2)));
  CHECK(bvn_cdf(-kInf, 0.2, 0.4) == 0.0);
  CHECK(bvn_cdf(kInf, kInf, 0.4) == 1.0);
  // Perfect correlation limits.
  CHECK(bvn_cdf(0.5, 1.0, 1.0) == doctest::Approx(norm_cdf(0.5)));
  CHECK(bvn_cdf(0.5, -0.2, -1.0) ==
        doctest::Approx(std::max(0.0, norm_cdf(0.5) + norm_cdf(-0.2) - 1.0)));
}

TEST_CASE("bivariate normal cdf against direct quadrature oracle") {
  // Independent check: integrate phi(t) * Phi((y - rho t)/sqrt(1-rho^2))
  // over t < x by adaptive Simpson; agreement must be <= 1e-8 absolute.
  auto quad_cdf = [](double x, double y, double rho) {
    const double s = std::sqrt(1.0 - rho * rho);
    return adaptive_simpson(
        [=](double t) { return norm_pdf(t) * norm_cdf((y - rho * t) / s); }, -9.0,
        x, 1e-12);
  };
  for (double rho : {-0.85, -0.4, 0.0, 0.3, 0.8, 0.97}) {
    for (double x : {-1.5, 0.0, 0.8}) {
      for (double y : {-0.7, 0.4, 2.1}) {
        CAPTURE(rho);
        CAPTURE(x);
        CAPTURE(y);
        CHECK(std::abs(bvn_cdf(x, y, rho) - quad_cdf(x, y, rho)) < 1e-8);
      }
    }
  }
}

TEST_CASE("quadrature rules integrate polynomials exactly") {
  const auto& gl = gauss_legendre(12);
  double s0 = 0, s2 = 0, s8 = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    s0 += gl.weights[i];
    s2 += gl.weights[i] * gl.nodes[i] * gl.nodes[i];
    s8 += gl.weights[i] * std::pow(gl.nodes[i], 8);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(s8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));

  const auto& gh = gauss_hermite(16);
  double h0 = 0, h2 = 0, h4 = 0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    h0 += gh.weights[i];
    h2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
    h4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
  }
  const double sqrt_pi = std::sqrt(kPi);
  CHECK(h0 == doctest::Approx(sqrt_pi).epsilon(1e-13));
  CHECK(h2 == doctest::Approx(sqrt_pi / 2.0).epsilon(1e-13));
  CHECK(h4 == doctest::Approx(3.0 * sqrt_pi / 4.0).epsilon(1e-13));
}

TEST_CASE("adaptive Simpson on a smooth integrand") {
  const double v = adaptive_simpson([](double t) { return std::exp(-t * t); }, -8.0,
                                    8.0, 1e-12);
  CHECK(v == doctest::Approx(std::sqrt(kPi)).epsilon(1e-11));
}

TEST_SUITE_END();
