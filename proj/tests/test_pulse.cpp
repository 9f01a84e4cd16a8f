#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cavgrover/pulse.hpp"

using namespace cavgrover;

namespace {

SystemParams<double> params(int n) {
  SystemParams<double> p;
  p.n_atoms = n;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("Gaussian pulse area") {
  const GaussianPulse g{2.5, 0.7, 1.0, 4.0};
  CHECK(cumulative_area(g, g.t_start()) == 0.0);
  const double full = 2.5 * 0.7 * std::sqrt(M_PI) * std::erf(4.0);
  CHECK(cumulative_area(g, g.center) == doctest::Approx(0.5 * full).epsilon(1e-12));
  CHECK(cumulative_area(g, g.t_end()) == doctest::Approx(full).epsilon(1e-12));
  for (double t : {-1.0, 0.3, 1.4, 3.2})
    CHECK(cumulative_area(g, t) == doctest::Approx(g.exact_area(t)).epsilon(1e-11));
  CHECK_THROWS_AS(cumulative_area(g, 10.0), DomainError);
  CHECK_THROWS_AS(g.exact_area(-5.0), DomainError);
  CHECK_THROWS_AS(cumulative_area(GaussianPulse{1.0, 0.0, 0.0, 4.0}, 0.0), InvalidParameter);
  CHECK_THROWS_AS(cumulative_area(GaussianPulse{1.0, 1.0, 0.0, 2.0}, 0.0), InvalidParameter);
}

TEST_CASE("base pulse area") {
  const auto b = to_base_pulse(GaussianPulse{1.0, 2.0, 0.0, 4.0});
  CHECK(b.t_start == -8.0);
  CHECK(b.t_end == 8.0);
  CHECK(b.value(0.0) == 1.0);
  CHECK(b.value(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(cumulative_area(b, 3.0, 8.0) == doctest::Approx(3.0 * 2.0 * std::sqrt(M_PI) * std::erf(4.0)).epsilon(1e-12));
}

TEST_CASE("ratio law") {
  CHECK(ratio_from_rho(5, 0.05, 0.0).ratio == 1.0);
  CHECK_FALSE(ratio_from_rho(5, 0.05, 0.0).completed);
  const auto done = ratio_from_rho(5, 0.05, 2.0 / 0.05);
  CHECK(done.ratio == 0.0);
  CHECK(done.completed);
  CHECK(ratio_from_rho(5, 0.05, 100.0).ratio == 0.0);
  CHECK(ratio_from_rho(2, 0.1, 5.0).ratio == doctest::Approx(0.5 / std::sqrt(1.75)).epsilon(1e-14));
  CHECK(ratio_from_rho(2, 0.1, 5.0).ratio == doctest::Approx(0.37796).epsilon(1e-5));
  CHECK_THROWS_AS(ratio_from_rho(5, 0.05, -1.0), DomainError);
}

TEST_CASE("ratio law keeps theta_dot = epsilon * Lambda") {
  // d(theta)/dA = epsilon follows from the law; check it by differencing the angle.
  for (int n : {2, 8, 100}) {
    const double eps = 0.05, s = std::sqrt(n - 1.0);
    for (double x : {0.1, 0.5, 0.9}) {
      const double a = x * s / eps, h = 1e-4;
      const auto theta = [&](double area) { return std::atan(-s * ratio_from_rho(n, eps, area).ratio); };
      const double dtheta_da = (theta(a + h) - theta(a - h)) / (2 * h);
      const double ratio = ratio_from_rho(n, eps, a).ratio;
      // Lambda / Omega for the given ratio.
      const double lambda_over_omega = std::sqrt((n - 1.0) * ratio * ratio + 1.0) / std::sqrt(double(n));
      CHECK(dtheta_da == doctest::Approx(eps * lambda_over_omega).epsilon(1e-7));
    }
  }
}

TEST_CASE("designed Gaussian for the N = 8 run") {
  const GaussianPulse g{1.0, 1.0, 0.0, 4.0};
  const double peak = designed_gaussian_peak(8, 0.05, g);
  CHECK(peak == doctest::Approx(std::sqrt(7.0) / (0.05 * std::sqrt(M_PI))).epsilon(1e-7));
  CHECK(peak == doctest::Approx(29.854).epsilon(1e-4));
  const auto s = design_schedule(8, 0.05, g, 4000);
  CHECK(s.size() == 4000);
  CHECK(s.t_start() == -4.0);
  CHECK(s.t_end() == 4.0);
  CHECK(s.peak == doctest::Approx(peak).epsilon(1e-6));
  CHECK(s.width == 1.0);
  CHECK(s.cutoff == 4.0);
  CHECK(s.pulse_name == "gaussian");
  CHECK(s.omega_prime.front() == s.omega.front());
  CHECK(s.omega_prime.back() == 0.0);
  CHECK(s.omega.back() > 0.0);
  CHECK(rel(0.05 * s.total_area(), std::sqrt(7.0)) < 1e-9);
  CHECK(rel(0.05 * s.omega_prime_area(), (std::sqrt(8.0) - 1.0) / std::sqrt(7.0)) < 1e-4);
  CHECK(0.05 * s.omega_prime_area() == doctest::Approx(0.6911).epsilon(1e-4));
  const auto theta = s.theta();
  CHECK(theta.front() == doctest::Approx(-std::atan(std::sqrt(7.0))).epsilon(1e-12));
  CHECK(theta.back() == 0.0);
  for (std::size_t k = 1; k < theta.size(); ++k) CHECK(theta[k] >= theta[k - 1]);
}

TEST_CASE("designed schedules close the area law for every N") {
  for (int n : {2, 3, 8, 101, 2048}) {
    const double eps = 0.07;
    const auto s = design_schedule(n, eps, GaussianPulse{}, 2000);
    CHECK(rel(s.total_area(), std::sqrt(n - 1.0) / eps) < 1e-6);
    CHECK(rel(eps * s.omega_prime_area(), (std::sqrt(double(n)) - 1.0) / std::sqrt(n - 1.0)) < 1e-4);
  }
  const auto two = design_schedule(2, 0.1, GaussianPulse{}, 500);
  CHECK(two.total_area() == doctest::Approx(10.0).epsilon(1e-9));
  const auto many = design_schedule(101, 0.1, GaussianPulse{}, 500);
  CHECK(many.total_area() == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("other base shapes") {
  const PulseShape sech{"sech", [](double tau) { return 1.0 / std::cosh(3.0 * tau); }, 0.0};
  const BasePulse b{sech, 0.0, 30.0};
  const auto s = design_schedule(16, 0.05, b, 4000);
  CHECK(rel(0.05 * s.total_area(), std::sqrt(15.0)) < 1e-9);
  CHECK(s.width == 0.0);
  CHECK(s.pulse_name == "sech");
  const auto rep = verify_adiabaticity(s, params(16));
  CHECK(rep.max_deviation <= 0.01 * 0.05);
  CHECK(rel(0.05 * s.omega_prime_area(), (4.0 - 1.0) / std::sqrt(15.0)) < 1e-4);
}

TEST_CASE("design preconditions") {
  CHECK_THROWS_AS(design_schedule(1, 0.05, GaussianPulse{}, 1000), InvalidParameter);
  CHECK_THROWS_AS(design_schedule(8, 0.5, GaussianPulse{}, 1000), InvalidParameter);
  CHECK_THROWS_AS(design_schedule(8, 0.0, GaussianPulse{}, 1000), InvalidParameter);
  CHECK_THROWS_AS(design_schedule(8, 0.05, GaussianPulse{}, 50), InvalidParameter);
  CHECK_NOTHROW(design_schedule(8, 0.2, GaussianPulse{}, 100));
}

TEST_CASE("adiabaticity check") {
  const auto s = design_schedule(8, 0.05, GaussianPulse{}, 4000);
  const auto r = verify_adiabaticity(s, params(8));
  CHECK(r.epsilon == 0.05);
  CHECK(r.max_deviation <= 0.01 * 0.05);

  SUBCASE("second-order decay under refinement") {
    const auto coarse = verify_adiabaticity(design_schedule(8, 0.05, GaussianPulse{}, 1000), params(8));
    const auto fine = verify_adiabaticity(design_schedule(8, 0.05, GaussianPulse{}, 2000), params(8));
    CHECK(coarse.max_deviation / fine.max_deviation >= 3.5);
  }
  SUBCASE("frozen angle violates the law by epsilon") {
    auto frozen = PulseSchedule::from_samples(8, 0.05, s.grid, s.omega, s.omega);
    const auto f = verify_adiabaticity(frozen, params(8));
    CHECK(f.max_deviation == doctest::Approx(0.05).epsilon(1e-12));
  }
  CHECK_THROWS_AS(verify_adiabaticity(s, params(4)), InvalidArgument);
}

TEST_CASE("schedule from samples") {
  std::vector<double> t, om, omp;
  for (int k = 0; k <= 200; ++k) {
    t.push_back(0.01 * k);
    om.push_back(std::sin(0.01 * k));
    omp.push_back(0.0);
  }
  const auto s = PulseSchedule::from_samples(4, 0.05, t, om, omp);
  CHECK(std::abs(s.total_area() - (1.0 - std::cos(2.0))) < 1e-6);
  const auto mid = s.at(0.005);
  CHECK(mid.omega == doctest::Approx(0.5 * std::sin(0.01)).epsilon(1e-12));
  CHECK(mid.omega_dot == doctest::Approx(std::sin(0.01) / 0.01).epsilon(1e-12));
  CHECK(s.at(2.0).omega == doctest::Approx(std::sin(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(s.at(2.5), DomainError);
  CHECK(std::isnan(s.theta().front()));

  std::vector<double> bad = t;
  bad[3] = bad[2];
  CHECK_THROWS_AS(PulseSchedule::from_samples(4, 0.05, bad, om, omp), InvalidArgument);
  om[5] = -1.0;
  CHECK_THROWS_AS(PulseSchedule::from_samples(4, 0.05, t, om, omp), InvalidArgument);
}

TEST_CASE("Simpson rule") {
  std::vector<double> f;
  for (int k = 0; k <= 10; ++k) f.push_back(std::pow(0.1 * k, 3));
  CHECK(simpson(f, 0.1) == doctest::Approx(0.25).epsilon(1e-14));
  f.push_back(std::pow(1.1, 3));  // odd interval count
  CHECK(simpson(f, 0.1) == doctest::Approx(std::pow(1.1, 4) / 4).epsilon(1e-14));
  CHECK(simpson({1.0, 3.0}, 2.0) == 4.0);
}

TEST_CASE("schedule text format") {
  const auto s = design_schedule(3, 0.1, GaussianPulse{}, 100);
  std::ostringstream os;
  write_schedule(os, s, {"note = x"});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# cavgrover schedule");
  std::getline(in, line);
  CHECK(line == "# N = 3");
  int data = 0;
  bool saw_note = false, saw_columns = false;
  while (std::getline(in, line)) {
    if (line == "# note = x") saw_note = true;
    if (line == "# t omega omega_prime area theta") saw_columns = true;
    if (line[0] != '#') ++data;
  }
  CHECK(saw_note);
  CHECK(saw_columns);
  CHECK(data == 100);
}
