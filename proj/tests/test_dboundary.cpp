#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracstab/boundary.hpp"
#include "fracstab/errors.hpp"
#include "fracstab/stability.hpp"
#include "support.hpp"

using namespace fracstab;

namespace {

const Plane kAC{"a", "c"};

std::vector<double> log_grid(double lo, double hi, int n) { return OmegaGrid{lo, hi, n}.values(); }

double rel(double x, double y) { return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)}); }

}  // namespace

TEST_CASE("unit_phase is exact at multiples of pi/4") {
  CHECK(unit_phase(FracOrder(0, 1)) == std::make_pair(1.0, 0.0));
  CHECK(unit_phase(FracOrder(1, 1)) == std::make_pair(0.0, 1.0));
  CHECK(unit_phase(FracOrder(2, 1)) == std::make_pair(-1.0, 0.0));
  CHECK(unit_phase(FracOrder(3, 1)) == std::make_pair(0.0, -1.0));
  CHECK(unit_phase(FracOrder(4, 1)) == std::make_pair(1.0, 0.0));
  CHECK(unit_phase(FracOrder(1, 2)).first == unit_phase(FracOrder(1, 2)).second);
  CHECK(unit_phase(FracOrder(1, 2)).first == doctest::Approx(std::sqrt(0.5)));
  const auto [c, s] = unit_phase(FracOrder(131, 100));
  CHECK(c == doctest::Approx(std::cos(1.31 * std::numbers::pi / 2)));
  CHECK(s == doctest::Approx(std::sin(1.31 * std::numbers::pi / 2)));
}

TEST_CASE("eval_boundary_parts for the Basset template") {
  const BoundaryParts p = eval_boundary_parts(test::basset_template(), 1.0, {{"b", -2}});
  const double h = std::sqrt(0.5);
  CHECK(p.real.coefficient("a") == doctest::Approx(0.0));
  CHECK(p.real.coefficient("c") == 1.0);
  CHECK(p.real.constant == doctest::Approx(-2 * h));
  CHECK(p.imag.coefficient("a") == 1.0);
  CHECK(p.imag.coefficient("c") == 0.0);
  CHECK(p.imag.constant == doctest::Approx(-2 * h));
}

TEST_CASE("eval_boundary_parts for a fully bound polynomial matches evaluate") {
  const QuasiPolynomial qp = test::three_term(2, -1.5, 0.7, "0.37", "1.6");
  for (double w : {0.01, 0.5, 1.0, 7.0}) {
    const BoundaryParts p = eval_boundary_parts(qp, w, {});
    const auto d = qp.evaluate({0.0, w});
    CHECK(p.real.slope.empty());
    CHECK(p.real.constant == doctest::Approx(d.real()).epsilon(1e-12));
    CHECK(p.imag.constant == doctest::Approx(d.imag()).epsilon(1e-12));
  }
}

TEST_CASE("eval_boundary_parts edge cases") {
  const QuasiPolynomial constant({{Coefficient::unknown("c"), FracOrder(0, 1)}});
  const BoundaryParts p = eval_boundary_parts(constant, 3.0, {});
  CHECK(p.imag.coefficient("c") == 0.0);
  CHECK(p.imag.constant == 0.0);
  CHECK_THROWS_AS(eval_boundary_parts(test::basset_template(), 0.0, {}), ValidationError);
  CHECK_THROWS_AS(eval_boundary_parts(test::basset_template(), -1.0, {{"b", 1}}), ValidationError);
  CHECK_THROWS_AS(eval_boundary_parts(test::basset_template(), 1.0, {}), ValidationError);
}

TEST_CASE("crb_general for Basset at omega = 1") {
  const std::vector<double> w{1.0};
  const CrbBranch br = crb_general(test::basset_template(), kAC, {{"b", -2}}, w);
  REQUIRE(br.samples.size() == 1);
  CHECK(br.samples[0].point.p1 == doctest::Approx(std::numbers::sqrt2));
  CHECK(br.samples[0].point.p2 == doctest::Approx(std::numbers::sqrt2));
  CHECK(br.fixed.at("b") == -2);
  CHECK(br.orders.size() == 3);
}

TEST_CASE("crb_general for the furnace at omega = 1") {
  const std::vector<double> w{1.0};
  const CrbBranch br = crb_general(test::furnace_template(), kAC, {{"b", 6009.5}}, w);
  REQUIRE(br.samples.size() == 1);
  const double a = br.samples[0].point.p1, c = br.samples[0].point.p2;
  // a = -b sin(0.485 pi) / sin(0.655 pi), c = -a cos(0.655 pi) - b cos(0.485 pi)
  CHECK(a == doctest::Approx(-6792.331019912512).epsilon(1e-10));
  CHECK(c == doctest::Approx(-3461.420408083589).epsilon(1e-10));
  CHECK(std::abs(a / -6009.5 - 1.1303) <= 5e-4);
  CHECK(std::abs(c / -6009.5 - 0.576) <= 5e-4);
}

TEST_CASE("crb_general samples solve both boundary equations") {
  const auto omegas = log_grid(1e-3, 1e3, 400);
  for (const auto& [qp, b] : {std::pair{test::basset_template(), -2.0}, std::pair{test::furnace_template(), 6009.5},
                               std::pair{test::three_term_template("0.3", "0.6"), 3.0}}) {
    const CrbBranch br = crb_general(qp, kAC, {{"b", b}}, omegas);
    CHECK(br.samples.size() == omegas.size());
    for (std::size_t i = 0; i < br.samples.size(); ++i) {
      const auto& s = br.samples[i];
      if (i > 0) CHECK(s.omega > br.samples[i - 1].omega);
      const QuasiPolynomial bound = substitute(qp, {{"a", s.point.p1}, {"b", b}, {"c", s.point.p2}});
      double scale = 0.0;
      for (const auto& t : bound.terms()) scale += std::abs(t.coeff.value()) * std::pow(s.omega, t.order.value());
      CHECK(std::abs(bound.evaluate({0.0, s.omega})) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("crb_general structural errors and gaps") {
  // a and c at orders 2 and 0: columns are parallel at every omega.
  const QuasiPolynomial even({{Coefficient::unknown("a"), FracOrder(2, 1)},
                              {Coefficient::known(1), FracOrder(1, 2)},
                              {Coefficient::unknown("c"), FracOrder(0, 1)}});
  const std::vector<double> w{1.0, 2.0};
  CHECK_THROWS_AS(crb_general(even, kAC, {}, w), ValidationError);
  CHECK_THROWS_AS(crb_general(test::basset_template(), kAC, {}, w), ValidationError);  // b unbound
  CHECK_THROWS_AS(crb_general(test::basset_template(), {"a", "z"}, {{"b", 1}}, w), ValidationError);
  CHECK_THROWS_AS(crb_general(test::basset_template(), {"a", "a"}, {{"b", 1}}, w), ValidationError);

  // b = 0 leaves a homogeneous system: every sample is a gap.
  const CrbBranch zero = crb_general(test::basset_template(), kAC, {{"b", 0}}, w);
  CHECK(zero.samples.empty());
  CHECK(zero.gaps.size() == 2);
  CHECK_FALSE(zero.diagnostic.empty());
}

TEST_CASE("crb_general: orders four apart are singular for every omega") {
  // Each parameter column is a fixed phase times a power of omega, so a
  // singular pair is singular everywhere.
  const QuasiPolynomial qp({{Coefficient::unknown("a"), FracOrder(4, 1)},
                            {Coefficient::known(1), FracOrder(1, 2)},
                            {Coefficient::unknown("c"), FracOrder(0, 1)}});
  const std::vector<double> w{1.0};
  CHECK_THROWS_WITH_AS(crb_general(qp, kAC, {}, w), doctest::Contains("singular"), ValidationError);
}

TEST_CASE("crb_three_term closed form") {
  const std::vector<double> w{4.0};
  const CrbBranch br = crb_three_term(-2, FracOrder(1, 2), FracOrder(1, 1), w);
  REQUIRE(br.samples.size() == 1);
  CHECK(br.samples[0].point.p1 == doctest::Approx(std::sqrt(0.5)));
  CHECK(br.samples[0].point.p2 == doctest::Approx(2 * std::numbers::sqrt2));
  CHECK(br.samples[0].point.p1 * br.samples[0].point.p2 == doctest::Approx(2.0));

  const CrbBranch zero = crb_three_term(0, FracOrder(1, 2), FracOrder(1, 1), w);
  CHECK(zero.samples.empty());
  CHECK_FALSE(zero.diagnostic.empty());
  CHECK_THROWS_AS(crb_three_term(1, FracOrder(1, 1), FracOrder(1, 2), w), ValidationError);
  CHECK_THROWS_AS(crb_three_term(1, FracOrder(0, 1), FracOrder(1, 2), w), ValidationError);
  CHECK_THROWS_AS(crb_three_term(1, FracOrder(1, 2), FracOrder(2, 1), w), ValidationError);
}

TEST_CASE("crb_three_term generalised Basset form") {
  const auto omegas = log_grid(1e-2, 1e2, 50);
  for (const char* alpha : {"0.1", "0.3", "0.5", "0.77"}) {
    const FracOrder a1 = FracOrder::parse(alpha);
    const double x = a1.value();
    const CrbBranch br = crb_three_term(-2, a1, FracOrder(1, 1), omegas);
    for (const auto& s : br.samples) {
      CHECK(rel(s.point.p1, 2 * std::pow(s.omega, x - 1) * std::sin(x * std::numbers::pi / 2)) <= 1e-12);
      CHECK(rel(s.point.p2, 2 * std::pow(s.omega, x) * std::cos(x * std::numbers::pi / 2)) <= 1e-12);
    }
  }
}

TEST_CASE("crb_three_term agrees with crb_general") {
  const auto omegas = log_grid(1e-3, 1e3, 500);
  const struct {
    const char* a1;
    const char* a2;
    double b;
  } cases[] = {{"0.5", "1", -2}, {"0.97", "1.31", 6009.5}, {"0.2", "0.4", -2}, {"0.3", "1.7", 5}, {"1/3", "1", -1}};
  for (const auto& c : cases) {
    const CrbBranch closed = crb_three_term(c.b, FracOrder::parse(c.a1), FracOrder::parse(c.a2), omegas);
    const CrbBranch general = crb_general(test::three_term_template(c.a1, c.a2), kAC, {{"b", c.b}}, omegas);
    REQUIRE(closed.samples.size() == general.samples.size());
    for (std::size_t i = 0; i < closed.samples.size(); ++i) {
      CHECK(rel(closed.samples[i].point.p1, general.samples[i].point.p1) <= 1e-9);
      CHECK(rel(closed.samples[i].point.p2, general.samples[i].point.p2) <= 1e-9);
    }
  }
}

TEST_CASE("crb_commensurate_pair product law and agreement") {
  const auto omegas = log_grid(1e-3, 1e3, 300);
  for (double b : {-2.0, 3.0, 0.5}) {
    for (const char* alpha : {"0.05", "0.2", "0.5", "0.8", "0.95"}) {
      const FracOrder a = FracOrder::parse(alpha);
      const CrbBranch pair = crb_commensurate_pair(b, a, omegas);
      const CrbBranch three = crb_three_term(b, a, a * 2, omegas);
      const double law = b * b / (2 * (1 + std::cos(a.value() * std::numbers::pi)));
      for (std::size_t i = 0; i < pair.samples.size(); ++i) {
        const auto& p = pair.samples[i].point;
        CHECK(std::abs(p.p1 * p.p2 - law) <= 1e-9 * law);
        CHECK(rel(p.p1, three.samples[i].point.p1) <= 1e-9);
        CHECK(rel(p.p2, three.samples[i].point.p2) <= 1e-9);
        if (b == 3.0 && std::string(alpha) == "0.8") CHECK(p.p1 < 0);
      }
    }
  }
  CHECK_THROWS_AS(crb_commensurate_pair(1, FracOrder(1, 1), omegas), ValidationError);
  CHECK_THROWS_AS(crb_commensurate_pair(1, FracOrder(0, 1), omegas), ValidationError);
}

TEST_CASE("real and infinite root boundaries") {
  const auto rrb = real_root_boundary(test::basset_template(), kAC, {{"b", -2}});
  const auto irb = infinite_root_boundary(test::basset_template(), kAC, {{"b", -2}});
  REQUIRE(rrb);
  REQUIRE(irb);
  CHECK(rrb->n1 == 0.0);
  CHECK(rrb->n2 == 1.0);
  CHECK(rrb->offset == 0.0);
  CHECK(irb->n1 == 1.0);
  CHECK(irb->n2 == 0.0);

  // (b, c) plane with a bound: no infinite root boundary.
  CHECK_FALSE(infinite_root_boundary(test::basset_template(), {"b", "c"}, {{"a", 1}}).has_value());
  CHECK(real_root_boundary(test::basset_template(), {"b", "c"}, {{"a", 1}}).has_value());
  // (a, b) plane with c bound: no real root boundary.
  CHECK_FALSE(real_root_boundary(test::basset_template(), {"a", "b"}, {{"c", 1}}).has_value());
}

TEST_CASE("points on the real root boundary put a root at the origin") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> v(-10, 10);
  for (int i = 0; i < 50; ++i) {
    const QuasiPolynomial qp = substitute(test::basset_template(), {{"a", v(rng)}, {"b", v(rng)}, {"c", 0.0}});
    const StabilityVerdict sv = matignon_check(qp);
    bool origin = false;
    for (const auto& w : sv.witnesses) origin = origin || w.at_origin;
    CHECK(origin);
    CHECK(sv.verdict != Verdict::Stable);
  }
}

TEST_CASE("Line::clip") {
  const Window w;
  const auto seg = Line{0.0, 1.0, 0.0}.clip(w);
  REQUIRE(seg);
  CHECK(seg->first.p1 == -10);
  CHECK(seg->second.p1 == 10);
  CHECK_FALSE(Line{0.0, 1.0, -20.0}.clip(w).has_value());
  const auto diag = Line{std::sqrt(0.5), -std::sqrt(0.5), 0.0}.clip(w);
  REQUIRE(diag);
  CHECK(std::abs(diag->first.p1) == doctest::Approx(10));
}

TEST_CASE("OmegaGrid") {
  const auto v = OmegaGrid{}.values();
  CHECK(v.size() == 2000);
  CHECK(v.front() == 1e-4);
  CHECK(v.back() == 1e4);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
  CHECK_THROWS_AS((OmegaGrid{0.0, 1.0, 10}.values()), ValidationError);
  CHECK_THROWS_AS((OmegaGrid{1.0, 1.0, 10}.values()), ValidationError);
  CHECK_THROWS_AS((OmegaGrid{1.0, 2.0, 1}.values()), ValidationError);
}

TEST_CASE("Window validation") {
  CHECK_NOTHROW(Window{}.validate());
  CHECK_THROWS_AS((Window{1, 1, 0, 1}.validate()), ValidationError);
  CHECK_THROWS_AS((Window{0, INFINITY, 0, 1}.validate()), ValidationError);
  const Window s = Window{}.scaled(3.0);
  CHECK(s.p1_min == -30);
  CHECK(s.p2_max == 30);
}

TEST_CASE("compute_boundaries for Basset") {
  const BoundarySet set = compute_boundaries(test::basset_template(), kAC, {{"b", -2}}, Window{});
  CHECK(set.rrb.has_value());
  CHECK(set.irb.has_value());
  REQUIRE(set.crb.size() == 1);
  const Window keep = Window{}.scaled(3.0);
  const auto& s = set.crb[0].samples;
  CHECK(s.size() > 100);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(keep.contains(s[i].point));
    CHECK(std::abs(s[i].point.p1 * s[i].point.p2 - 2.0) <= 1e-6);
    if (i > 0) CHECK(s[i].omega > s[i - 1].omega);
  }
  CHECK(set.warnings.empty());
}

TEST_CASE("compute_boundaries refines sparse stretches") {
  // Very coarse grid: refinement must insert extra samples.
  const BoundarySet set = compute_boundaries(test::basset_template(), kAC, {{"b", -2}}, Window{}, OmegaGrid{1e-4, 1e4, 20});
  REQUIRE_FALSE(set.crb.empty());
  std::size_t total = 0;
  for (const auto& br : set.crb) total += br.samples.size();
  CHECK(total > 20 / 2);
  for (const auto& br : set.crb)
    for (const auto& s : br.samples) CHECK(std::abs(s.point.p1 * s.point.p2 - 2.0) <= 1e-6);
}

TEST_CASE("compute_boundaries with b = 0 warns and emits only the axes") {
  const BoundarySet set = compute_boundaries(test::basset_template(), kAC, {{"b", 0}}, Window{});
  CHECK(set.crb.empty());
  CHECK(set.rrb.has_value());
  CHECK(set.irb.has_value());
  REQUIRE_FALSE(set.warnings.empty());
}

TEST_CASE("classical Basset boundary is symmetric under swapping a and c") {
  for (double b : {-2.0, -0.5, 1.0, 3.0}) {
    const BoundarySet set = compute_boundaries(test::basset_template(), kAC, {{"b", b}}, Window{});
    std::vector<ParamPoint> pts;
    for (const auto& br : set.crb)
      for (const auto& s : br.samples) pts.push_back(s.point);
    REQUIRE_FALSE(pts.empty());
    // Swapped points lie on the same curve ac = b^2/2.
    for (const auto& p : pts) CHECK(std::abs(p.p2 * p.p1 - b * b / 2) <= 1e-9 * b * b);
  }
}

TEST_CASE("boundary samples are marginal") {
  const auto omegas = log_grid(1e-2, 1e2, 60);
  for (const auto& [qp, b] : {std::pair{test::basset_template(), -2.0}, std::pair{test::three_term_template("0.2", "0.4"), -2.0},
                               std::pair{test::furnace_template(), 6009.5}}) {
    const CrbBranch br = crb_general(qp, kAC, {{"b", b}}, omegas);
    for (const auto& s : br.samples) {
      const StabilityVerdict v = matignon_check(substitute(qp, {{"a", s.point.p1}, {"b", b}, {"c", s.point.p2}}));
      CHECK(std::abs(v.margin) <= 1e-6);
    }
  }
}
