#include <doctest.h>

#include <cmath>

#include "cloakbound/errors.hpp"
#include "cloakbound/herglotz.hpp"
#include "cloakbound/rng.hpp"

using namespace cloakbound;

TEST_CASE("representation evaluation") {
  SUBCASE("pure linear term: h(z) = z") {
    HerglotzRepresentation rep;
    rep.alpha = 1.0;
    CHECK(eval_herglotz(rep, Complex(0.0, 1.0)) == Complex(0.0, 1.0));
  }
  SUBCASE("single atom at the origin: h(i) = 1/(0 - i) = i") {
    HerglotzRepresentation rep;
    rep.atoms = {{0.0, 1.0}};
    CHECK(std::abs(eval_herglotz(rep, Complex(0.0, 1.0)) - Complex(0.0, 1.0)) <= 1e-15);
  }
  SUBCASE("Im h > 0 on C+ for a nontrivial measure") {
    HerglotzRepresentation rep;
    rep.atoms = {{-1.0, 0.5}, {2.0, 1.5}};
    rep.beta = 0.3;
    Rng rng(41);
    for (int k = 0; k < 100; ++k) {
      const Complex z(rng.uniform(-5.0, 5.0), rng.uniform(1e-2, 5.0));
      CHECK(eval_herglotz(rep, z).imag() > 0.0);
    }
  }
  SUBCASE("evaluation on an atom is a pole error") {
    HerglotzRepresentation rep;
    rep.atoms = {{1.0, 1.0}};
    CHECK_THROWS_AS(eval_herglotz(rep, Complex(1.0, 0.0)), PoleError);
  }
}

TEST_CASE("alpha extraction") {
  const auto ys = geometric_sequence(1e3, 2.0, 12);
  SUBCASE("h(z) = 2z + 1/(1-z) has alpha = 2") {
    SampledFunction f;
    f.eval = [](Complex z) { return 2.0 * z + 1.0 / (1.0 - z); };
    const LimitResult r = extract_alpha(f, ys);
    CHECK(std::abs(r.value - 2.0) <= 1e-8);
  }
  SUBCASE("h(z) = z has alpha = 1") {
    SampledFunction f;
    f.eval = [](Complex z) { return z; };
    CHECK(std::abs(extract_alpha(f, ys).value - 1.0) <= 1e-12);
  }
  SUBCASE("bounded h has alpha = 0") {
    SampledFunction f;
    f.eval = [](Complex z) { return 3.0 + 1.0 / (2.0 - z); };
    CHECK(std::abs(extract_alpha(f, ys).value) <= 1e-10);
  }
}

TEST_CASE("round trip: build, sample, re-extract alpha") {
  HerglotzRepresentation rep;
  rep.alpha = 0.7;
  rep.beta = -0.2;
  rep.atoms = {{-1.0, 0.4}, {0.5, 1.1}, {3.0, 0.8}};
  SampledFunction f;
  f.eval = [rep](Complex z) { return eval_herglotz(rep, z); };
  const LimitResult r = extract_alpha(f, geometric_sequence(1e3, 2.0, 12));
  CHECK(std::abs(r.value - rep.alpha) <= 1e-6);
}

TEST_CASE("atom masses") {
  const auto ys = geometric_sequence(1e-2, 0.5, 12);
  HerglotzRepresentation rep;
  rep.alpha = 0.5;
  rep.atoms = {{1.0, 2.0}};
  SampledFunction f;
  f.eval = [rep](Complex z) { return eval_herglotz(rep, z); };

  CHECK(std::abs(atom_mass(f, 1.0, ys).value - 2.0) <= 1e-6);
  CHECK(std::abs(atom_mass(f, 0.0, ys).value) <= 1e-8);

  SampledFunction linear;
  linear.eval = [](Complex z) { return z; };
  CHECK(std::abs(atom_mass(linear, 0.7, ys).value) <= 1e-12);
}

TEST_CASE("Stieltjes to Herglotz transfer") {
  SUBCASE("s = 1 maps to H(z) = z") {
    SampledFunction s;
    s.eval = [](Complex) { return Complex(1.0, 0.0); };
    const SampledFunction h = stieltjes_to_herglotz(s);
    CHECK(h.eval(Complex(2.0, 1.0)) == Complex(2.0, 1.0));
  }
  SUBCASE("s(z) = 1/(1+z): H(z) = z/(1-z), negative at z = -1") {
    SampledFunction s;
    s.eval = [](Complex z) { return 1.0 / (1.0 + z); };
    const SampledFunction h = stieltjes_to_herglotz(s);
    CHECK(std::abs(h.eval(Complex(-1.0, 0.0)) - Complex(-0.5, 0.0)) <= 1e-15);
    CHECK(h.eval(Complex(-1.0, 0.0)).real() < 0.0);
  }
  SUBCASE("Schwarz symmetry at random points") {
    SampledFunction s;
    s.eval = [](Complex z) { return 0.3 + 1.0 / (2.0 + z); };
    const SampledFunction h = stieltjes_to_herglotz(s);
    Rng rng(42);
    for (int k = 0; k < 50; ++k) {
      const Complex z(rng.uniform(-4.0, -0.1), rng.uniform(0.1, 4.0));
      const Complex a = h.eval(std::conj(z));
      const Complex b = std::conj(h.eval(z));
      CHECK(std::abs(a - b) <= 1e-13 * (std::abs(b) + 1.0));
    }
  }
}

TEST_CASE("square root with the positive-axis cut") {
  CHECK(sqrt_cut_positive(Complex(4.0, 0.0)) == Complex(2.0, 0.0));
  CHECK(std::abs(sqrt_cut_positive(Complex(-1.0, 0.0)) - Complex(0.0, 1.0)) <= 1e-15);
  // z -> sqrt(-z) maps C \ R- into the closed upper half-plane
  Rng rng(43);
  for (int k = 0; k < 100; ++k) {
    Complex z(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    if (z.real() <= 0.0 && std::abs(z.imag()) < 1e-6) z += Complex(0.0, 0.5);
    CHECK(sqrt_cut_positive(-z).imag() >= -1e-15);
  }
}

TEST_CASE("uniform-measure composition") {
  const double delta = 0.8;
  SUBCASE("H = i delta gives i pi / (4 delta)") {
    const Complex got = compose_uniform_value(Complex(0.0, delta), delta);
    CHECK(std::abs(got - Complex(0.0, M_PI / (4.0 * delta))) <= 1e-15);
  }
  SUBCASE("|H| >> delta on the positive axis: value small, Im -> 0") {
    const Complex got = compose_uniform_value(Complex(100.0, 0.0), delta);
    CHECK(got.real() < 0.0);
    CHECK(std::abs(got.real()) < 0.05);
    CHECK(std::abs(got.imag()) <= 1e-15);
  }
  SUBCASE("Heaviside lower bound for Im on C+") {
    SampledFunction h;
    h.eval = [](Complex z) { return z + 1.0 / (1.0 - z); };  // Herglotz
    Rng rng(44);
    for (int k = 0; k < 100; ++k) {
      const Complex z(rng.uniform(-3.0, 3.0), rng.uniform(1e-2, 3.0));
      const Complex hz = h.eval(z);
      const double im = compose_uniform_value(hz, delta).imag();
      CHECK(im >= -1e-12);
      if (std::abs(hz) <= delta) CHECK(im >= M_PI / (4.0 * delta) - 1e-12);
    }
  }
}

TEST_CASE("sum-rule integral against Poisson closed forms") {
  const auto ys = geometric_sequence(1e-2, 0.5, 8);
  SUBCASE("atom inside the window integrates to its mass") {
    SampledFunction f;
    f.eval = [](Complex z) { return 1.0 / (1.0 - z); };
    const IntegralResult r = sumrule_integral(f, 0.25, 4.0, ys);
    CHECK(std::abs(r.value - 1.0) <= 1e-4);
  }
  SUBCASE("atom outside the window leaves only kernel tails") {
    SampledFunction f;
    f.eval = [](Complex z) { return 1.0 / (10.0 - z); };
    const IntegralResult r = sumrule_integral(f, 0.25, 4.0, ys);
    CHECK(std::abs(r.value) <= 1e-3);
  }
  SUBCASE("affine lossless benchmark saturates the sum-rule budget") {
    const double delta = 0.4, f_inf = 1.0;
    SampledFunction hmu;
    hmu.eval = [delta](Complex z) {
      return compose_uniform_value(z - 2.0, delta);
    };
    const IntegralResult r = sumrule_integral(hmu, 0.25, 4.0, ys);
    CHECK(r.value <= 1.0 / f_inf + 1e-6);
    CHECK(r.value >= 1.0 / f_inf - 1e-3);  // sharp for the affine family
  }
}

TEST_CASE("Herglotz closure under the uniform composition") {
  SampledFunction h;
  h.eval = [](Complex z) { return 2.0 * z + 1.0 / (1.0 - z); };
  Rng rng(45);
  for (int k = 0; k < 100; ++k) {
    const Complex z(rng.uniform(-3.0, 3.0), rng.uniform(1e-2, 3.0));
    CHECK(compose_uniform(h, 0.7, z).imag() >= -1e-12);
  }
}

TEST_CASE("high- and low-frequency asymptotics of the composition") {
  // H affine with slope F_inf: z H_mu(z) -> -1/F_inf along the imaginary axis
  const double f_inf = 2.0, delta = 0.5;
  SampledFunction hmu;
  hmu.eval = [=](Complex z) { return compose_uniform_value(f_inf * z - 1.0, delta); };
  const Complex big(0.0, 1e5);
  const Complex slope = big * hmu.eval(big);
  CHECK(std::abs(slope - Complex(-1.0 / f_inf, 0.0)) <= 1e-4);

  // low-frequency: z H_mu(z) -> -mass({0}) <= 0
  const Complex small(0.0, 1e-6);
  const Complex low = small * hmu.eval(small);
  CHECK(low.real() <= 1e-9);
}

TEST_CASE("Heaviside length with linear crossing interpolation") {
  std::vector<double> xs, ah;
  for (int k = 0; k <= 4096; ++k) {
    const double x = 0.25 + (4.0 - 0.25) * k / 4096.0;
    xs.push_back(x);
    ah.push_back(std::abs(x - 1.0));
  }
  SUBCASE("|x-1| <= 0.2 has length 0.4, below the 4D/F budget") {
    const double len = heaviside_length(xs, ah, 0.2);
    CHECK(len == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(len <= 4.0 * 0.2 / 1.0);
  }
  SUBCASE("delta above the max captures the whole window") {
    const double len = heaviside_length(xs, ah, 10.0);
    CHECK(len == doctest::Approx(4.0 - 0.25).epsilon(1e-12));
  }
  SUBCASE("delta -> 0 collapses isolated zeros") {
    CHECK(heaviside_length(xs, ah, 1e-9) <= 1e-5);
  }
}

TEST_CASE("Dirac scan finds the measure that saturates the budget") {
  const auto ys = geometric_sequence(1e-2, 0.5, 6);
  SampledFunction h;
  h.eval = [](Complex z) { return z - 2.0; };  // affine, F_inf = 1, zero at 2

  SUBCASE("xi = 0 recovers ~1/F_inf when H crosses zero inside the window") {
    const DiracScanResult at_zero = dirac_scan(h, {0.0}, 0.25, 4.0, ys);
    CHECK(std::abs(at_zero.value - 1.0) <= 1e-3);
    // every xi whose level set H = xi falls inside the window ties at ~1/F_inf
    const DiracScanResult r = dirac_scan(h, {-5.0, -1.0, 0.0, 1.0, 5.0}, 0.25, 4.0, ys);
    CHECK(std::abs(r.xi) <= 1.0);
    CHECK(std::abs(r.value - 1.0) <= 1e-3);
  }
  SUBCASE("xi far outside the range of H contributes nothing") {
    SampledFunction composed;
    composed.eval = [&](Complex z) { return 1.0 / (100.0 - h.eval(z)); };
    const IntegralResult r = sumrule_integral(composed, 0.25, 4.0, ys);
    CHECK(std::abs(r.value) <= 1e-4);
  }
  SUBCASE("scan max dominates the uniform-measure value on the same window") {
    const DiracScanResult best =
        dirac_scan(h, {-1.0, -0.5, 0.0, 0.5, 1.0}, 0.25, 4.0, ys);
    SampledFunction hmu;
    hmu.eval = [&](Complex z) { return compose_uniform(h, 0.4, z); };
    const IntegralResult uniform = sumrule_integral(hmu, 0.25, 4.0, ys);
    CHECK(best.value >= uniform.value - 1e-6);
  }
}
