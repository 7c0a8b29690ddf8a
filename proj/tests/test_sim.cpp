#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "ptstab/error.hpp"
#include "ptstab/sim.hpp"

using namespace ptstab;

namespace {

Trajectory synthetic(const std::vector<double>& x1, double dt) {
  Trajectory t;
  t.dt = dt;
  for (std::size_t i = 0; i < x1.size(); ++i) t.rows.push_back(Sample{dt * i, x1[i], 0, x1[i]});
  return t;
}

const Regulator kSigmoid{kind::SigmoidRatio{1, 3, 1}, 0.051};

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("sim config validation and default threshold") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.x1_threshold(SurfaceParams{}) == doctest::Approx(std::sqrt(2e-4)).epsilon(1e-15));
  c.settle_threshold_x1 = 0.5;
  CHECK(c.x1_threshold(SurfaceParams{}) == 0.5);
  SimConfig bad;
  bad.record_stride = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = SimConfig{};
  bad.dt = 2.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = SimConfig{};
  bad.dt = -1e-5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("closed loop from the origin stays settled") {
  const SimConfig cfg;
  const Trajectory t = integrate_closed_loop(benchmark_plant(), SurfaceParams{}, kSigmoid, kSigmoid, {0, 0}, cfg);
  CHECK_FALSE(t.terminated_early);
  CHECK(t.rows.size() == 1501);
  const double thr = cfg.x1_threshold(SurfaceParams{});
  for (const Sample& r : t.rows) {
    REQUIRE(std::abs(r.x1) < thr);
    REQUIRE(std::abs(r.x2) < 1e-2);
  }
  CHECK(settling_time(t, thr, SettleSignal::X1) == 0.0);
}

TEST_CASE("extreme corners settle before T1 + T2") {
  const SimConfig cfg;
  const double thr = cfg.x1_threshold(SurfaceParams{});
  for (State2 x0 : {State2{1200, 100}, State2{-1200, -100}}) {
    const Trajectory t = integrate_closed_loop(benchmark_plant(), SurfaceParams{}, kSigmoid, kSigmoid, x0, cfg);
    REQUIRE_FALSE(t.terminated_early);
    CHECK(t.rows.size() == 1501);
    CHECK(t.dt == doctest::Approx(1e-3).epsilon(1e-12));
    for (const Sample& r : t.rows) {
      REQUIRE(std::isfinite(r.x1));
      REQUIRE(std::isfinite(r.u));
      if (r.t >= 1.0) REQUIRE(std::abs(r.x1) < thr);
    }
    const auto ts = settling_time(t, thr, SettleSignal::X1);
    REQUIRE(ts.has_value());
    CHECK(*ts <= 1.0);
  }
}

TEST_CASE("recorded rows are uniform and consistent") {
  SimConfig cfg;
  cfg.horizon = 0.2;
  const Trajectory t = integrate_closed_loop(benchmark_plant(), SurfaceParams{}, kSigmoid, kSigmoid, {3, -2}, cfg);
  REQUIRE(t.rows.size() == 201);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const Sample& r = t.rows[i];
    CHECK(r.t == doctest::Approx(i * 1e-3).epsilon(1e-12));
    CHECK(r.v1 == 0.5 * r.x1 * r.x1);
    CHECK(r.v2 == 0.5 * r.s * r.s);
  }
}

TEST_CASE("integration is deterministic bit for bit") {
  SimConfig cfg;
  cfg.horizon = 0.3;
  const Trajectory a = integrate_closed_loop(benchmark_plant(), SurfaceParams{}, kSigmoid, kSigmoid, {700, -40}, cfg);
  const Trajectory b = integrate_closed_loop(benchmark_plant(), SurfaceParams{}, kSigmoid, kSigmoid, {700, -40}, cfg);
  std::ostringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("halving dt moves the settling time by less than 2 dt stride") {
  SimConfig coarse;
  SimConfig fine;
  fine.dt = coarse.dt / 2;
  fine.record_stride = coarse.record_stride * 2;
  const double thr = coarse.x1_threshold(SurfaceParams{});
  for (State2 x0 : {State2{1200, 100}, State2{-300, 60}}) {
    const Trajectory a = integrate_closed_loop(benchmark_plant(), SurfaceParams{}, kSigmoid, kSigmoid, x0, coarse);
    const Trajectory b = integrate_closed_loop(benchmark_plant(), SurfaceParams{}, kSigmoid, kSigmoid, x0, fine);
    const double tol = 2 * coarse.dt * coarse.record_stride;
    for (SettleSignal sig : {SettleSignal::X1, SettleSignal::S}) {
      const double threshold = sig == SettleSignal::X1 ? thr : coarse.settle_threshold_s;
      const auto ta = settling_time(a, threshold, sig);
      const auto tb = settling_time(b, threshold, sig);
      REQUIRE(ta.has_value());
      REQUIRE(tb.has_value());
      CHECK(std::abs(*ta - *tb) < tol);
    }
  }
}

TEST_CASE("numerical failure ends the run early with a reason") {
  SurfaceParams s;
  s.t1 = 0.01;
  s.t2 = 0.01;
  SimConfig cfg;
  cfg.dt = 1e-3;
  const Trajectory t = integrate_closed_loop(benchmark_plant(), s, kSigmoid, kSigmoid, {1200, 100}, cfg);
  CHECK(t.terminated_early);
  CHECK_FALSE(t.reason.empty());
  for (const Sample& r : t.rows) REQUIRE(std::isfinite(r.x1));
}

TEST_CASE("settling_time examples") {
  CHECK(settling_time(synthetic(std::vector<double>(50, 0.0), 0.01), 1e-3, SettleSignal::X1) == 0.0);

  std::vector<double> x(100);
  for (int i = 0; i < 100; ++i) x[i] = i < 40 ? 1.0 - 0.02 * i : 0.01 * std::sin(i);
  x[25] = 0.0;  // a brief early dip does not count
  const auto t = settling_time(synthetic(x, 0.01), 0.05, SettleSignal::X1);
  REQUIRE(t.has_value());
  CHECK(std::abs(*t - 0.4) <= 0.01);

  std::vector<double> grow(100);
  for (int i = 0; i < 100; ++i) grow[i] = 0.001 * std::exp(0.1 * i);
  CHECK_FALSE(settling_time(synthetic(grow, 0.01), 0.05, SettleSignal::X1).has_value());
  CHECK(settling_time(synthetic(grow, 0.01), 1e9, SettleSignal::S) == 0.0);
}

TEST_CASE("motivating example matches the closed form") {
  const MotivatingResult m = integrate_motivating(0.5, 1.0, std::sqrt(2.0), 1e-6, 1e-5);
  const double exact = motivating_exact_time(1.0, 1e-6, 0.5, 1.0);
  CHECK(exact == doctest::Approx(0.6311210586619327).epsilon(1e-14));
  CHECK(oracle::rel_err(m.hit_time, exact) < 1e-2);
  CHECK(m.hit_time < 1.0);
  CHECK(m.trajectory.rows.front().v1 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("property: motivating hit time within 1% over the (V0, p, Tc) grid") {
  for (double v0 : {1.0, 100.0}) {
    for (double p : {0.3, 0.5}) {
      for (double tc : {0.5, 1.0, 2.0}) {
        const MotivatingResult m = integrate_motivating(p, tc, std::sqrt(2 * v0), 1e-6, 1e-5);
        const double exact = motivating_exact_time(v0, 1e-6, p, tc);
        CAPTURE(v0);
        CAPTURE(p);
        CAPTURE(tc);
        CHECK(oracle::rel_err(m.hit_time, exact) < 1e-2);
        CHECK(m.hit_time < tc);
      }
    }
  }
}

TEST_CASE("motivating edge cases") {
  CHECK(integrate_motivating(0.5, 1.0, 2.0, 2.0, 1e-5).hit_time == 0.0);
  CHECK(integrate_motivating(0.5, 1.0, -std::sqrt(2.0), 1e-6, 1e-5).hit_time ==
        integrate_motivating(0.5, 1.0, std::sqrt(2.0), 1e-6, 1e-5).hit_time);
  CHECK(motivating_exact_time(3.0, 3.0, 0.5, 1.0) == 0.0);
  CHECK(motivating_exact_time(1e300, 1e-300, 0.5, 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(integrate_motivating(0.5, 1.0, 0.0, 1e-6, 1e-5), DomainError);
  CHECK_THROWS_AS(integrate_motivating(0.5, 1.0, 1.0, 0.0, 1e-5), DomainError);
  CHECK_THROWS_AS(integrate_motivating(0.5, 0.01, std::sqrt(2.0), 1e-6, 0.5), NumericalError);
}

TEST_CASE("trajectory CSV format") {
  Trajectory t;
  t.dt = 0.1;
  t.rows.push_back(Sample{0.1, 1.0 / 3.0, -2, 0, 0, 0, 0});
  std::ostringstream out;
  write_csv(out, t);
  CHECK(out.str() == "t,x1,x2,s,u,v1,v2\n0.10000000000000001,0.33333333333333331,-2,0,0,0,0\n");
  CHECK(std::stod(format_double(0.1)) == 0.1);
}

}
