#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "vmlab/fft3.hpp"
#include "vmlab/kinetic_core.hpp"

using namespace vml;

TEST_CASE("FFT agrees with the naive DFT for mixed radix-2/3 lengths") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (std::size_t n : {2u, 3u, 4u, 6u, 8u, 9u, 12u, 27u, 36u, 54u}) {
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx(U(rng), U(rng));
    std::vector<cplx> ref(n);
    for (std::size_t k = 0; k < n; ++k) {
      cplx acc(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        double ang = -2.0 * 3.14159265358979323846 * double(k * j % n) / double(n);
        acc += x[j] * cplx(std::cos(ang), std::sin(ang));
      }
      ref[k] = acc;
    }
    std::vector<cplx> y = x;
    Fft fft(n);
    fft.forward(y.data());
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - ref[k]) <= 1e-12 * n);
    fft.inverse(y.data());
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(y[k] / double(n) - x[k]) <= 1e-12 * n);
  }
}

TEST_CASE("good_size returns admissible lengths") {
  for (std::size_t n : {5u, 17u, 25u, 33u, 49u, 65u}) {
    std::size_t g = Fft::good_size(n);
    CHECK(g >= n);
    std::size_t m = g;
    while (m % 2 == 0) m /= 2;
    while (m % 3 == 0) m /= 3;
    CHECK(m == 1);
  }
  CHECK(Fft::good_size(33) <= 36);
  CHECK(Fft::good_size(65) <= 72);
}

TEST_CASE("velocity grid geometry") {
  VelocityGrid g(9, 4.5);
  CHECK(g.h() == doctest::Approx(9.0 / 8.0));
  CHECK(g.coord(4) == 0.0);  // origin is a node
  // symmetric node set
  for (int i = 0; i < 9; ++i) CHECK(g.coord(i) == -g.coord(8 - i));
  CHECK_THROWS_AS(VelocityGrid(8, 4.0), domain_error);
  CHECK_THROWS_AS(VelocityGrid(7, 4.0), domain_error);
}

TEST_CASE("maxwellian values and quadrature mass") {
  GasState s(1.0, 0.0, 1.5);
  VelocityGrid g(33, VelocityGrid::default_v_max(0.0, 1.5));
  KineticField M = maxwellian(s, g);
  std::size_t origin = g.index(16, 16, 16);
  CHECK(M[origin] == doctest::Approx(std::pow(2.0 * 3.14159265358979323846, -1.5))
                         .epsilon(1e-13));
  // even in v - u
  CHECK(M[g.index(20, 16, 16)] == M[g.index(12, 16, 16)]);
  Moments m = moments(M);
  CHECK(std::abs(m.rho - 1.0) <= 1e-8);

  GasState s2(1.7, Vec3{0.5, -0.2, 0.1}, 1.2);
  VelocityGrid g2(33, VelocityGrid::default_v_max(std::sqrt(0.3), 1.2));
  Moments m2 = moments(maxwellian(s2, g2));
  GasState rec = m2.recovered();
  CHECK(vmltest::rel_diff(rec.rho, s2.rho) <= 1e-7);
  CHECK(vmltest::rel_diff(rec.theta, s2.theta) <= 1e-7);
  CHECK(std::abs(rec.u[0] - s2.u[0]) <= 1e-7);
  CHECK(std::abs(rec.u[1] - s2.u[1]) <= 1e-7);
}

TEST_CASE("moments homogeneity and translation") {
  GasState s(1.0, 0.0, 1.5);
  VelocityGrid g(33, 8.0);
  KineticField M = maxwellian(s, g);
  KineticField cM = M;
  for (auto& v : cM.values) v *= 2.5;
  Moments m = moments(cM);
  GasState rec = m.recovered();
  CHECK(vmltest::rel_diff(rec.rho, 2.5) <= 1e-8);
  CHECK(vmltest::rel_diff(rec.theta, 1.5) <= 1e-8);
  CHECK(std::abs(rec.u[0]) <= 1e-10);

  // shift by one grid spacing: u moves by h
  GasState sh(1.0, g.h(), 1.5);
  Moments m2 = moments(maxwellian(sh, g));
  CHECK(std::abs(m2.recovered().u[0] - g.h()) <= 1e-7);
}

TEST_CASE("moments quadrature converges superalgebraically for Maxwellians") {
  GasState s(1.0, Vec3{0.3, 0.0, 0.0}, 1.4);
  double prev = 1e300;
  for (int n : {17, 25, 33}) {
    VelocityGrid g(n, VelocityGrid::default_v_max(0.3, 1.4));
    Moments m = moments(maxwellian(s, g));
    double err = std::abs(m.rho - 1.0) + std::abs(m.recovered().theta - 1.4);
    bool improves = err < prev || err < 1e-12;
    CHECK(improves);
    prev = err;
  }
  CHECK(prev <= 1e-9);
}

TEST_CASE("degenerate moments raise") {
  VelocityGrid g(9, 4.0);
  KineticField f(g);
  for (auto& v : f.values) v = -1.0;
  CHECK_THROWS_AS(moments(f).recovered(), domain_error);
}

TEST_CASE("hydro basis: raw Gram near identity, exact projection algebra") {
  GasState s(1.2, Vec3{0.2, -0.1, 0.05}, 1.4);
  VelocityGrid g(33, VelocityGrid::default_v_max(0.3, 1.4));
  HydroBasis basis(s, g);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      CHECK(std::abs(basis.raw_gram()[a][b] - (a == b ? 1.0 : 0.0)) <= 1e-6);

  vmltest::FieldGen gen(11);
  KineticField f = vmltest::sample(g, gen.smooth_signed());
  // multiply by a Maxwellian-ish decay so the field is integrable
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= basis.maxwell()[i];

  KineticField p0 = basis.project_hydro(f);
  KineticField p1 = basis.project_micro(f);
  KineticField p00 = basis.project_hydro(p0);
  double scale = field_l2(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(std::abs(p0[i] + p1[i] - f[i]) <= 1e-14 * (1.0 + std::abs(f[i])));
  }
  CHECK(field_l2(p00) == doctest::Approx(field_l2(p0)).epsilon(1e-12));
  KineticField p0p1 = basis.project_hydro(p1);
  CHECK(field_l2(p0p1) <= 1e-12 * scale);

  // M projects to itself
  KineticField m1 = basis.project_micro(basis.maxwell());
  CHECK(field_l2(m1) <= 1e-8 * field_l2(basis.maxwell()));

  // charge projection: Pd of c*M is c*M; Pr integrates to zero; Pd idempotent
  KineticField cM = basis.maxwell();
  for (auto& v : cM.values) v *= 0.37;
  KineticField pd = basis.project_charge(cM);
  for (std::size_t i = 0; i < cM.size(); ++i)
    CHECK(std::abs(pd[i] - cM[i]) <= 1e-8 * (std::abs(cM[i]) + 1e-300));
  KineticField pr = basis.project_charge_rest(f);
  CHECK(std::abs(moments(pr).rho) <= 1e-10 * std::max(1.0, std::abs(moments(f).rho)));
  KineticField pdd = basis.project_charge(basis.project_charge(f));
  KineticField pd1 = basis.project_charge(f);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(pdd[i] - pd1[i]) <= 1e-12 * (1.0 + std::abs(pd1[i])));
}

TEST_CASE("coarse grids are rejected by the Gram guard") {
  GasState s(1.0, 0.0, 1.5);
  VelocityGrid g(9, 24.0);  // h = 6: hopeless resolution
  CHECK_THROWS_AS(HydroBasis(s, g), domain_error);
}

TEST_CASE("weight function: values, monotonicity, domain errors") {
  WeightSpec w;
  w.l = 2;
  w.q1 = 0.5;
  w.q2 = 0.25;
  w.alpha_order = 1;
  w.beta_order = 1;
  // v = 0 and l = |alpha|+|beta|: omega = e^{q(t)/2}
  CHECK(weight_omega(w, 0.0, {0, 0, 0}) == doctest::Approx(std::exp(0.125)).epsilon(1e-14));
  // decreasing in t
  Vec3 v{1.0, -2.0, 0.5};
  CHECK(weight_omega(w, 2.0, v) < weight_omega(w, 1.0, v));
  CHECK(weight_omega(w, 1.0, v) < weight_omega(w, 0.0, v));
  // omega >= 1 when l >= |alpha|+|beta|
  for (double t : {0.0, 3.0, 100.0}) CHECK(weight_omega(w, t, v) >= 1.0);
  WeightSpec bad = w;
  bad.q2 = 0.7;
  CHECK_THROWS_AS(weight_omega(bad, 0.0, v), domain_error);
  WeightSpec bad2 = w;
  bad2.l = 1;
  CHECK_THROWS_AS(weight_omega(bad2, 0.0, v), domain_error);
}

TEST_CASE("weight integrability guard is finite and vmax-stable when q2 admits it") {
  WeightSpec w;
  w.l = 2;
  w.q1 = 0.5;
  w.q2 = 0.25;
  for (double theta : {1.2, 1.5}) {
    GasState s(1.0, 0.0, theta);
    double eps0 = 0.01;
    // q2 < 1/(R theta) - 1/2 - eps0/(R theta) must hold for these states
    CHECK(w.q2 < 1.0 / (kGasR * theta) - 0.5 - eps0 / (kGasR * theta));
    VelocityGrid g1(25, VelocityGrid::default_v_max(0.0, theta));
    VelocityGrid g2(49, 2.0 * VelocityGrid::default_v_max(0.0, theta));
    double i1 = weight_integrability(w, 0.0, s, g1, eps0);
    double i2 = weight_integrability(w, 0.0, s, g2, eps0);
    CHECK(std::isfinite(i1));
    CHECK(vmltest::rel_diff(i1, i2) <= 0.01);
  }
}

TEST_CASE("velocity derivative: exact on quadratics, transpose adjoint identity") {
  VelocityGrid g(13, 3.0);
  KineticField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 v = g.node(i);
    f[i] = 1.7 + 0.3 * v[0] - 0.8 * v[1] + 0.25 * v[2] + 0.5 * v[0] * v[0] +
           0.1 * v[1] * v[2];
  }
  KineticField d0 = velocity_derivative(f, 0);
  KineticField d1 = velocity_derivative(f, 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 v = g.node(i);
    CHECK(std::abs(d0[i] - (0.3 + 1.0 * v[0])) <= 1e-12);
    CHECK(std::abs(d1[i] - (-0.8 + 0.1 * v[2])) <= 1e-12);
  }
  // adjoint: <D f, g> = <f, D^T g> exactly
  vmltest::FieldGen gen(3);
  KineticField x = vmltest::sample(g, gen.smooth_signed());
  KineticField y = vmltest::sample(g, gen.smooth_signed());
  for (int ax = 0; ax < 3; ++ax) {
    double lhs = field_dot(velocity_derivative(x, ax), y);
    double rhs = field_dot(x, velocity_derivative_transpose(y, ax));
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (std::abs(lhs) + 1.0));
  }
}

TEST_CASE("field dumps are written in v1-fastest order") {
  VelocityGrid g(9, 2.0);
  KineticField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i);
  write_field_csv(f, "/tmp/vmlab_field.csv");
  std::ifstream is("/tmp/vmlab_field.csv");
  std::string header, first, second;
  std::getline(is, header);
  std::getline(is, first);
  std::getline(is, second);
  CHECK(header == "i1,i2,i3,v1,v2,v3,value");
  CHECK(first.substr(0, 6) == "0,0,0,");
  CHECK(second.substr(0, 6) == "1,0,0,");
}
