#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "hqmap/curve_geometry.hpp"
#include "hqmap/curve_spec.hpp"
#include "hqmap/errors.hpp"

using namespace hqmap;
using std::numbers::pi;

TEST_SUITE("curve_geometry") {
  TEST_CASE("unit circle length and unit tangents") {
    const auto c = arc_length_reparametrize(make_circle(1.0), 256);
    CHECK(c.length() == doctest::Approx(2 * pi).epsilon(1e-12));
    CHECK(c.enclosed_area() == doctest::Approx(pi).epsilon(1e-10));
    for (auto t : c.tangents()) CHECK(std::abs(t) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(std::abs(c.samples()[i] - std::polar(1.0, c.node(i))) < 1e-10);
    }
  }

  TEST_CASE("ellipse perimeter against elliptic integral") {
    // 4 a E(1 - b^2/a^2) for a = 2, b = 1
    const double oracle = 9.688448220547676;
    const auto c = arc_length_reparametrize(make_ellipse(2.0, 1.0), 512);
    CHECK(std::abs(c.length() - oracle) < 1e-10);
    CHECK(c.enclosed_area() == doctest::Approx(2 * pi).epsilon(1e-9));
  }

  TEST_CASE("arclength sampling is uniform") {
    const auto c = arc_length_reparametrize(make_ellipse(3.0, 1.0), 128);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double s = c.arclength_at(c.parameter_at(c.node(i)));
      CHECK(std::abs(s - c.node(i)) < 1e-10);
    }
  }

  TEST_CASE("clockwise input is reoriented") {
    const auto c = arc_length_reparametrize(make_reversed(make_ellipse(2.0, 1.0)), 64);
    CHECK(c.enclosed_area() > 0.0);
  }

  TEST_CASE("arc distance") {
    const auto c = arc_length_reparametrize(make_circle(1.0), 64);
    const double l = c.length();
    CHECK(arc_distance(c, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(arc_distance(c, 0.1, l - 0.1) == doctest::Approx(0.2));
    CHECK(arc_distance(c, 0.0, l / 2) == doctest::Approx(pi));
    CHECK_THROWS_AS(arc_distance(c, -1.0, 0.0), InputError);
    CHECK_THROWS_AS(arc_distance(c, 0.0, l + 1.0), InputError);
  }

  TEST_CASE("arc distance is a metric bounded by chord-arc") {
    const auto c = arc_length_reparametrize(make_ellipse(2.0, 1.0), 256);
    const double b = chord_arc_constant(c);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, c.length());
    for (int k = 0; k < 500; ++k) {
      const double s1 = u(rng), s2 = u(rng), s3 = u(rng);
      const double d12 = arc_distance(c, s1, s2);
      CHECK(arc_distance(c, s2, s1) == d12);
      CHECK(d12 <= arc_distance(c, s1, s3) + arc_distance(c, s3, s2) + 1e-12);
      const double chord = std::abs(c.point_at(s1) - c.point_at(s2));
      CHECK(chord <= d12 + 1e-12);
      CHECK(d12 <= b * chord * (1 + 1e-3) + 1e-12);
    }
  }

  TEST_CASE("chord-arc constant") {
    const auto circle = arc_length_reparametrize(make_circle(1.0), 256);
    CHECK(std::abs(chord_arc_constant(circle) - pi / 2) < 1e-3);
    const auto e1 = arc_length_reparametrize(make_ellipse(2.0, 1.0), 256);
    const auto e2 = arc_length_reparametrize(make_ellipse(2.0, 1.0), 1024);
    CHECK(chord_arc_constant(e1) >= pi / 2 - 1e-3);
    CHECK(std::abs(chord_arc_constant(e1) - chord_arc_constant(e2)) < 1e-3);
  }

  TEST_CASE("self-intersecting and degenerate input") {
    std::vector<Complex> eight;
    for (int i = 0; i < 64; ++i) {
      const double t = 2 * pi * i / 64;
      eight.emplace_back(std::sin(t), std::sin(t) * std::cos(t));
    }
    CHECK_THROWS_AS(arc_length_reparametrize(eight, 64, true), InvalidCurveError);
    const std::vector<Complex> two{{0, 0}, {1, 0}, {0, 0}};
    CHECK_THROWS_AS(arc_length_reparametrize(two, 64, true), InputError);
    CHECK_THROWS_AS(arc_length_reparametrize(make_circle(1.0), 8), InputError);
  }

  TEST_CASE("modulus of continuity of sampled functions") {
    const std::size_t n = 1001;
    std::vector<Complex> line(n), flat(n, Complex(3.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) line[i] = static_cast<double>(i) / (n - 1);
    const std::vector<double> ts{0.01, 0.1, 0.5, 1.0};
    const auto w = modulus_of_continuity(line, 1.0 / (n - 1), false, ts);
    for (double t : ts) CHECK(w(t) == doctest::Approx(t).epsilon(1e-9));
    const auto z = modulus_of_continuity(flat, 1.0 / (n - 1), false, ts);
    for (double t : ts) CHECK(z(t) == 0.0);

    const std::size_t m = 1024;
    std::vector<Complex> cosv(m);
    const double h = 2 * pi / m;
    for (std::size_t i = 0; i < m; ++i) cosv[i] = std::cos(h * i);
    const std::vector<double> lags{8 * h, 64 * h, 256 * h};
    const auto wc = modulus_of_continuity(cosv, h, true, lags);
    for (double t : lags) CHECK(std::abs(wc(t) - 2 * std::sin(t / 2)) < 1e-3);
    CHECK_THROWS_AS(modulus_of_continuity(cosv, h, true, std::vector<double>{}), InputError);
  }

  TEST_CASE("modulus is nondecreasing and at most twice the sup") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<Complex> v(512);
    double sup = 0.0;
    for (auto& x : v) {
      x = Complex(g(rng), g(rng));
      sup = std::max(sup, std::abs(x));
    }
    std::vector<double> ts;
    for (int k = 1; k <= 256; ++k) ts.push_back(k / 512.0);
    const auto w = modulus_of_continuity(v, 1.0 / 512, true, ts);
    double prev = 0.0;
    for (double t : ts) {
      CHECK(w(t) >= prev);
      CHECK(w(t) <= 2 * sup + 1e-12);
      prev = w(t);
    }
  }

  TEST_CASE("Dini integrals") {
    const auto root = ModulusOfContinuity::power(1.0, 0.5);
    const auto r = dini_integral(root, 1.0);
    CHECK(r.is_dini);
    CHECK(std::abs(r.value - 2.0) < 1e-8);
    const auto lin = dini_integral(ModulusOfContinuity::power(1.0, 1.0), 1.0);
    CHECK(lin.value == doctest::Approx(1.0).epsilon(1e-10));
    const auto slow = ModulusOfContinuity::closed_form(
        [](double t) { return t > 0 ? 1.0 / std::log(std::numbers::e / t) : 0.0; }, 1.0, "1/log(e/t)");
    CHECK_FALSE(dini_integral(slow, 1.0).is_dini);
  }

  TEST_CASE("tangent modulus of the circle and a square") {
    const auto c = arc_length_reparametrize(make_circle(1.0), 512);
    const auto w = tangent_modulus(c);
    const double h = c.spacing();
    for (int k : {1, 16, 128}) CHECK(std::abs(w(k * h) - 2 * std::sin(k * h / 2)) < 1e-6);
    CHECK(dini_integral(w, c.length()).is_dini);

    const std::vector<Complex> sq{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    const auto s = arc_length_reparametrize(sq, 512, true);
    CHECK(s.length() == doctest::Approx(8.0).epsilon(1e-12));
    CHECK_FALSE(dini_integral(tangent_modulus(s), s.length()).is_dini);
  }

  TEST_CASE("convexity and distance") {
    CHECK(is_convex(arc_length_reparametrize(make_ellipse(2.0, 1.0), 128)));
    CHECK_FALSE(is_convex(arc_length_reparametrize(make_star(5, 0.3, 2.0), 256)));
    const auto c = arc_length_reparametrize(make_circle(1.0), 64);
    CHECK(distance_to_curve(c, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(distance_to_curve(c, Complex(0.0, 0.5)) == doctest::Approx(0.5).epsilon(1e-9));
  }

  TEST_CASE("curve specs") {
    const auto c = curve_from_json(nlohmann::json::parse(R"({"type":"circle","r":2})"), 64);
    CHECK(c.length() == doctest::Approx(4 * pi));
    const auto f = curve_from_json(nlohmann::json::parse(R"({"type":"fourier","coeffs":[[0,0],[0,0],[1,0]]})"), 64);
    CHECK(f.length() == doctest::Approx(2 * pi));
    CHECK_THROWS_AS(curve_from_json(nlohmann::json::parse(R"({"type":"blob"})"), 64), InputError);
  }
}
