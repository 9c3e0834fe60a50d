#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "subnls/errors.hpp"
#include "subnls/nonlinearity.hpp"

using namespace subnls;
using std::numbers::e;

namespace {

std::vector<Nonlinearity> builtin_specs() {
  return {Nonlinearity::logarithmic(3, 1.0),     Nonlinearity::logarithmic(2, 0.7),
          Nonlinearity::log_power(3, 1.0, 0.5, 3.0), Nonlinearity::log_power(3, 1.0, -0.1, 4.0),
          Nonlinearity::log_power(2, 2.0, -3.0, 5.0), Nonlinearity::log_power(3, 1.0, -0.5, 4.0),
          Nonlinearity::saturation(3),            Nonlinearity::power_sublinear(3, 0.5)};
}

std::vector<double> sample_points() {
  std::vector<double> s;
  for (double k = -12; k <= 3; k += 0.25) {
    s.push_back(std::pow(10.0, k));
    s.push_back(-std::pow(10.0, k));
  }
  s.push_back(0.0);
  return s;
}

}  // namespace

TEST_CASE("log family primitive and positive part at s = e") {
  const auto spec = Nonlinearity::logarithmic(3, 1.0);
  const auto v = eval_split(spec, e);
  CHECK(v.G == doctest::Approx(e * e / 2).epsilon(1e-14));
  CHECK(v.G_plus == doctest::Approx(e * e / 2 + 0.5).epsilon(1e-14));
  // quadrature of max(g, 0) from 0 to e
  const double ref = oracle::simpson([&](double t) { return std::max(t * std::log(t * t), 0.0); }, 1.0, e);
  CHECK(v.G_plus == doctest::Approx(ref).epsilon(1e-10));
  CHECK(v.G_minus == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("every family vanishes at zero") {
  for (const auto& spec : builtin_specs()) {
    const auto v = eval_split(spec, 0.0);
    CHECK(v.G == 0.0);
    CHECK(v.G_plus == 0.0);
    CHECK(v.G_minus == 0.0);
    CHECK(v.g == 0.0);
    CHECK(spec.G_minus_eps(0.0, 0.3) == 0.0);
  }
}

TEST_CASE("cutoff ramp") {
  CHECK(phi_eps(0.25, 0.5) == 0.5);
  CHECK(phi_eps(0.5, 0.5) == 1.0);
  CHECK(phi_eps(-0.1, 0.4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(phi_eps(3.0, 0.4) == 1.0);
  CHECK_THROWS_AS(phi_eps(0.1, 0.0), DomainError);
  CHECK_THROWS_AS(phi_eps(0.1, 1.0), DomainError);
  CHECK_THROWS_AS(phi_eps(0.1, -0.2), DomainError);
  for (double s = -2; s <= 2; s += 0.01) {
    CHECK(phi_eps(s, 0.3) == phi_eps(-s, 0.3));
    CHECK(phi_eps(s, 0.3) >= 0.0);
    CHECK(phi_eps(s, 0.3) <= 1.0);
  }
}

TEST_CASE("cutoff primitive: sublinear power closed value") {
  const auto spec = Nonlinearity::power_sublinear(3, 0.5);
  CHECK(spec.G_minus_eps(0.25, 0.25) == doctest::Approx(0.05).epsilon(1e-13));
  CHECK(G_minus_eps(spec, -0.25, 0.25) == doctest::Approx(0.05).epsilon(1e-13));
}

TEST_CASE("cutoff primitive against direct quadrature") {
  for (const auto& spec : builtin_specs()) {
    for (double eps : {0.3, 0.05, 1e-3}) {
      for (double s : {0.7 * eps, eps, 2.0 * eps, 0.9, 2.5}) {
        auto integrand = [&](double t) { return phi_eps(t, eps) * spec.g_minus(t); };
        // split at eps so each Simpson panel sees a smooth integrand
        double ref = oracle::simpson(integrand, 0.0, std::min(s, eps));
        if (s > eps) ref += oracle::simpson(integrand, eps, s);
        const double got = spec.G_minus_eps(s, eps);
        CHECK(got == doctest::Approx(ref).epsilon(1e-7).scale(1e-5));
      }
    }
  }
}

TEST_CASE("cutoff primitive tends to G_minus as eps shrinks") {
  const auto spec = Nonlinearity::logarithmic(3, 1.0);
  for (double s : {0.05, 0.3, 0.8, 2.0}) {
    double prev_gap = INFINITY;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const double gap = spec.G_minus(s) - spec.G_minus_eps(s, eps);
      CHECK(gap >= -1e-15);
      CHECK(gap <= prev_gap + 1e-15);
      prev_gap = gap;
    }
    CHECK(prev_gap < 1e-10);
  }
}

TEST_CASE("splitting invariants on all builtin families") {
  for (const auto& spec : builtin_specs()) {
    for (double s : sample_points()) {
      const auto v = eval_split(spec, s);
      CHECK(v.G_plus >= std::max(v.G, 0.0) - 1e-14 * std::abs(v.G));
      CHECK(v.G_minus >= 0.0);
      const double scale = std::max({std::abs(v.G), v.G_plus, v.G_minus, 1e-300});
      CHECK(std::abs(v.G_plus - v.G_minus - v.G) <= 1e-10 * scale);
      CHECK(v.g_plus - v.g_minus == doctest::Approx(v.g).epsilon(1e-12).scale(1e-300));
      CHECK(v.g_plus * s >= 0.0);
      CHECK(v.g_minus * s >= 0.0);
    }
  }
}

TEST_CASE("custom family reproduces the closed forms to quadrature tolerance") {
  const auto ref = Nonlinearity::log_power(3, 1.0, -0.1, 4.0);
  const auto custom =
      Nonlinearity::custom(3, [](double s) { return s * std::log(s * s) - 0.1 * s * s * s; });
  for (double s : {1e-3, 0.2, 0.9, 1.7, 5.0, 12.0, -0.4, -3.0}) {
    const auto a = eval_split(ref, s);
    const auto b = eval_split(custom, s);
    const double tol = 1e-8 * (1.0 + std::abs(a.G_plus) + std::abs(a.G_minus));
    CHECK(std::abs(a.G - b.G) <= tol);
    CHECK(std::abs(a.G_plus - b.G_plus) <= tol);
    CHECK(std::abs(a.G_minus - b.G_minus) <= tol);
    CHECK(std::abs(ref.G_minus_eps(s, 0.05) - custom.G_minus_eps(s, 0.05)) <= tol);
  }
}

TEST_CASE("regularized derivative equals g off the cutoff region") {
  for (const auto& spec : builtin_specs()) {
    for (double s : {0.2, 0.5, 1.3, -0.7, 4.0}) {
      CHECK(spec.g_eps(s, 0.1) == doctest::Approx(spec.g(s)).epsilon(1e-14));
      CHECK(spec.g_eps(s, 0.0) == spec.g(s));
    }
    const double s = 0.03, eps = 0.1;
    CHECK(spec.g_eps(s, eps) ==
          doctest::Approx(spec.g_plus(s) - phi_eps(s, eps) * spec.g_minus(s)).epsilon(1e-14));
  }
}

TEST_CASE("cutoff primitive is monotone in eps and quadratically bounded near zero") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> us(-3.0, 3.0);
  for (const auto& spec : builtin_specs()) {
    for (int k = 0; k < 200; ++k) {
      const double s = us(rng);
      double prev = 0.0;
      for (double eps : {0.9, 0.5, 0.1, 0.03, 0.01, 1e-3}) {
        const double v = spec.G_minus_eps(s, eps);
        CHECK(v >= prev - 1e-15 * std::abs(v));
        prev = v;
      }
    }
    for (double eps : {0.1, 1e-3}) {
      double c = 0.0;
      for (double k = -10; k <= 0; k += 0.05) {
        const double s = std::pow(10.0, k);
        c = std::max(c, spec.G_minus_eps(s, eps) / (s * s));
      }
      CHECK(std::isfinite(c));
      // near zero the cutoff primitive behaves like |g_-(s)| s / (3 eps) at most
      CHECK(c < 1e6);
    }
  }
}

TEST_CASE("threshold formula examples") {
  CHECK(mu_threshold(1.0, 4.0) == doctest::Approx(-2.0 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(mu_threshold(1.0, 4.0) == doctest::Approx(-0.270671).epsilon(1e-6));
  CHECK(mu_threshold(2.0, 4.0) == doctest::Approx(-4.0 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(mu_threshold(1.0, 3.0) == doctest::Approx(-0.669390).epsilon(1e-6));
  CHECK_THROWS_AS(mu_threshold(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(mu_threshold(0.0, 3.0), DomainError);
}

TEST_CASE("gtilde_max against a one-dimensional maximization") {
  auto gtilde = [](double a, double m, double p) {
    return [=](double x) {
      const double s = std::exp(x);
      return 0.5 * a * (2.0 * x - 1.0) + m / p * std::pow(s, p - 2.0);
    };
  };
  CHECK(std::abs(gtilde_max(1.0, mu_threshold(1.0, 4.0), 4.0)) < 1e-10);
  const double pos = gtilde_max(1.0, -0.1, 4.0);
  const double neg = gtilde_max(1.0, -0.5, 4.0);
  CHECK(pos > 0.0);
  CHECK(neg < 0.0);
  CHECK(pos == doctest::Approx(oracle::golden_max(gtilde(1.0, -0.1, 4.0), -5.0, 5.0)).epsilon(1e-9));
  CHECK(neg == doctest::Approx(oracle::golden_max(gtilde(1.0, -0.5, 4.0), -5.0, 5.0)).epsilon(1e-9));
  CHECK_THROWS_AS(gtilde_max(1.0, 0.1, 4.0), DomainError);
}

TEST_CASE("threshold and maximum agree on a parameter grid") {
  for (double a : {0.1, 0.5, 1.0, 2.0, 7.5}) {
    for (double p : {2.2, 3.0, 4.0, 5.5, 6.0}) {
      CHECK(std::abs(gtilde_max(a, mu_threshold(a, p), p)) <= 1e-10 * std::max(1.0, a));
    }
  }
}

TEST_CASE("assumption checks on the documented examples") {
  const auto below = check_assumptions(Nonlinearity::log_power(3, 1.0, -0.5, 4.0));
  CHECK(below["g4"].verdict == Verdict::Fails);
  CHECK_FALSE(below.xi0.has_value());
  CHECK(below.any_fails());

  const auto spec = Nonlinearity::log_power(3, 1.0, 0.0, 4.0);
  const auto pure = check_assumptions(spec);
  CHECK(pure["g4"].verdict == Verdict::Holds);
  REQUIRE(pure.xi0.has_value());
  CHECK(spec.G(*pure.xi0) > 0.0);
  CHECK(spec.G(e) > 0.0);

  const auto sat = check_assumptions(Nonlinearity::saturation(3));
  for (const auto& c : sat.checks) CHECK_MESSAGE(c.verdict == Verdict::Holds, c.name << ": " << c.detail);
}

TEST_CASE("assumption (g4) verdict matches the analytic criterion around the threshold") {
  for (double a : {0.5, 1.0, 2.0}) {
    for (double p : {3.0, 4.0}) {
      const double mu_star = mu_threshold(a, p);
      for (double d : {-0.5, -0.1, -1e-3, 1e-3, 0.05}) {
        const double mu = mu_star + d * std::abs(mu_star);
        const auto r = check_assumptions(Nonlinearity::log_power(3, a, mu, p));
        const bool analytic = mu > mu_star;
        CHECK_MESSAGE((r["g4"].verdict == Verdict::Holds) == analytic, "a=" << a << " p=" << p << " mu=" << mu);
        const auto t = threshold_report(Nonlinearity::log_power(3, a, mu, p));
        CHECK(t.g4_holds == analytic);
        CHECK(t.g4_holds == (t.xi0.has_value()));
      }
    }
  }
}

TEST_CASE("mass-critical coefficient") {
  const auto crit = Nonlinearity::log_power(3, 1.0, 0.7, 2.0 + 4.0 / 3.0);
  CHECK(eta_coefficient(crit).value == doctest::Approx(0.7 / (2.0 + 4.0 / 3.0)).epsilon(1e-14));
  CHECK_FALSE(eta_coefficient(crit).sampled);
  CHECK(eta_coefficient(Nonlinearity::log_power(3, 1.0, 0.7, 3.0)).value == 0.0);
  CHECK(eta_coefficient(Nonlinearity::logarithmic(2, 1.0)).value == 0.0);
  const auto custom = Nonlinearity::custom(2, [](double s) { return 0.4 * s * s * s; });
  const auto est = eta_coefficient(custom);
  CHECK(est.sampled);
  CHECK(est.value == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(Nonlinearity::log_power(3, -1.0, 0.0, 4.0), DomainError);
  CHECK_THROWS_AS(Nonlinearity::log_power(3, 1.0, 0.0, 2.0), DomainError);
  CHECK_THROWS_AS(Nonlinearity::log_power(3, 1.0, 0.0, 7.0), DomainError);
  CHECK_NOTHROW(Nonlinearity::log_power(2, 1.0, 0.0, 7.0));
  CHECK_THROWS_AS(Nonlinearity::power_sublinear(3, 1.0), DomainError);
  CHECK_THROWS_AS(Nonlinearity::saturation(1), DomainError);
}
