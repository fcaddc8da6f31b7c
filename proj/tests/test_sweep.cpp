#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "binexp/sweep.hpp"

using namespace binexp;

#ifndef BINEXP_GOLDEN_DIR
#define BINEXP_GOLDEN_DIR "golden"
#endif

TEST_CASE("grid specs parse as lists and linspaces") {
    CHECK(parse_grid("0.5") == std::vector<double>{0.5});
    CHECK(parse_grid("0.1,0.25,2") == std::vector<double>{0.1, 0.25, 2.0});
    const auto lin = parse_grid("0:0.5:6");
    REQUIRE(lin.size() == 6);
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 0.5);
    CHECK(lin[1] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(parse_grid("2:2:1") == std::vector<double>{2.0});

    CHECK_THROWS_AS(parse_grid(""), UsageError);
    CHECK_THROWS_AS(parse_grid("1,x,3"), UsageError);
    CHECK_THROWS_AS(parse_grid("0:1"), UsageError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), UsageError);
    CHECK_THROWS_AS(parse_grid("1,"), UsageError);
}

TEST_CASE("default grids match the reported experiments") {
    const auto alpha = default_beta_grid();
    REQUIRE(alpha.size() == 23);
    CHECK(alpha[0] == 0.1);
    CHECK(alpha[1] == 0.25);
    CHECK(alpha[2] == 0.75);
    CHECK(alpha[3] == 1.0);
    CHECK(alpha[4] == 2.0);
    CHECK(alpha.back() == 20.0);

    const auto delta = default_trapezoid_delta_grid();
    REQUIRE(delta.size() == 10);
    CHECK(delta.front() == 0.0);
    CHECK(delta.back() == 0.5);

    const auto cgrid = default_trapezoid_c_grid();
    CHECK(cgrid.front() == 0.0);
    CHECK(cgrid.back() == 0.75);
}

TEST_CASE("family names round-trip") {
    for (auto f : {SweepFamily::BetaSymmetric, SweepFamily::TrapezoidSymmetric,
                   SweepFamily::TrapezoidC, SweepFamily::Custom})
        CHECK(sweep_family_from_name(sweep_family_name(f)) == f);
    CHECK_THROWS_AS(sweep_family_from_name("gamma"), UsageError);
}

TEST_CASE("sweep validates its configuration") {
    SweepConfig cfg;
    cfg.bits = 1;
    CHECK_THROWS_AS(run_sweep(cfg), UsageError);
    cfg.bits = 3;
    cfg.samples = 1;
    CHECK_THROWS_AS(run_sweep(cfg), UsageError);
    cfg.samples = 100;
    cfg.grid = {-1.0};  // invalid alpha
    CHECK_THROWS_AS(run_sweep(cfg), UsageError);

    SweepConfig custom;
    custom.family = SweepFamily::Custom;
    custom.grid = {0.5};
    custom.custom_template = "kind=beta alpha=2 beta=2";  // missing {param}
    CHECK_THROWS_AS(run_sweep(custom), UsageError);
    custom.custom_template = "kind=nope alpha={param}";
    CHECK_THROWS_AS(run_sweep(custom), UsageError);
    SweepConfig no_grid;
    no_grid.family = SweepFamily::Custom;
    no_grid.custom_template = "kind=beta alpha={param} beta=2";
    CHECK_THROWS_AS(run_sweep(no_grid), UsageError);
}

TEST_CASE("small sweep carries exact and empirical columns") {
    SweepConfig cfg;
    cfg.family = SweepFamily::BetaSymmetric;
    cfg.grid = {1.0, 2.0};
    cfg.samples = 5000;
    cfg.seed = 7;
    const SweepResult result = run_sweep(cfg);
    REQUIRE(result.points.size() == 2);
    REQUIRE(result.pairs.size() == 3);
    CHECK(result.pairs[0] == std::pair{1, 2});
    CHECK(result.pairs[1] == std::pair{1, 3});
    CHECK(result.pairs[2] == std::pair{2, 3});

    // alpha = 1 is the uniform: all three exact correlations vanish
    for (double r : result.points[0].rho_theory) CHECK(r == doctest::Approx(0.0).epsilon(1e-11));
    // alpha = 2 oracle values
    CHECK(result.points[1].rho_theory[0] == doctest::Approx(-0.375).epsilon(1e-9));
    CHECK(result.points[1].rho_theory[1] == doctest::Approx(-0.1875).epsilon(1e-9));
    CHECK(result.points[1].rho_theory[2] == doctest::Approx(-0.09375).epsilon(1e-9));
    // empirical columns land near theory at this sample size
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(result.points[1].rho_emp[k] - result.points[1].rho_theory[k]) < 0.05);
    CHECK(result.points[0].marginals[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("theory columns do not depend on the seed, empirical columns do") {
    SweepConfig cfg;
    cfg.family = SweepFamily::TrapezoidSymmetric;
    cfg.grid = {0.2};
    cfg.samples = 2000;
    cfg.seed = 1;
    const auto a = run_sweep(cfg);
    cfg.seed = 2;
    const auto b = run_sweep(cfg);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(a.points[0].rho_theory[k] == b.points[0].rho_theory[k]);
        CHECK(a.points[0].rho_emp[k] != b.points[0].rho_emp[k]);
    }
    cfg.seed = 1;
    const auto c = run_sweep(cfg);
    for (std::size_t k = 0; k < 3; ++k) CHECK(a.points[0].rho_emp[k] == c.points[0].rho_emp[k]);
}

TEST_CASE("custom family substitutes the parameter into the template") {
    SweepConfig cfg;
    cfg.family = SweepFamily::Custom;
    cfg.custom_template = "kind=beta alpha={param} beta=2";
    cfg.grid = {2.0};
    cfg.samples = 100;
    const auto result = run_sweep(cfg);
    // must equal the beta(2,2) fixed point
    CHECK(result.points[0].rho_theory[0] == doctest::Approx(-0.375).epsilon(1e-9));
}

TEST_CASE("combined CSV has the pinned header and 9-significant-digit cells") {
    SweepConfig cfg;
    cfg.family = SweepFamily::BetaSymmetric;
    cfg.grid = {2.0};
    cfg.samples = 100;
    cfg.seed = 3;
    const auto result = run_sweep(cfg);
    std::ostringstream os;
    write_sweep_csv(result, os);
    std::istringstream is(os.str());
    std::string header, row;
    REQUIRE(std::getline(is, header));
    CHECK(header ==
          "param,rho12_theory,rho13_theory,rho23_theory,"
          "rho12_emp,rho13_emp,rho23_emp,p1,p2,p3");
    REQUIRE(std::getline(is, row));
    CHECK(row.substr(0, 2) == "2,");
    CHECK(row.find("-0.375,") != std::string::npos);
    CHECK(row.find("0.1875") != std::string::npos);

    // a value with more than 9 significant digits is rounded to 9
    SweepResult fake;
    fake.bits = 2;
    fake.pairs = {{1, 2}};
    fake.points.push_back({0.123456789123, {1.0 / 3.0}, {0.5}, {0.5, 0.5}});
    std::ostringstream os2;
    write_sweep_csv(fake, os2);
    CHECK(os2.str().find("0.123456789,") != std::string::npos);
    CHECK(os2.str().find("0.333333333,") != std::string::npos);
}

TEST_CASE("theory CSV matches the golden beta file") {
    SweepConfig cfg;
    cfg.family = SweepFamily::BetaSymmetric;
    cfg.samples = 2;  // theory columns do not depend on sampling
    const auto result = run_sweep(cfg);
    std::ostringstream os;
    write_theory_csv(result, os);

    std::ifstream golden(std::string(BINEXP_GOLDEN_DIR) + "/beta_theory_n3.csv");
    REQUIRE(golden.good());
    std::stringstream want;
    want << golden.rdbuf();
    CHECK(os.str() == want.str());
}

TEST_CASE("golden beta curves have the documented shape") {
    std::ifstream golden(std::string(BINEXP_GOLDEN_DIR) + "/beta_theory_n3.csv");
    REQUIRE(golden.good());
    std::string line;
    REQUIRE(std::getline(golden, line));  // header
    double prev_rho12 = 1.1;
    while (std::getline(golden, line)) {
        std::istringstream is(line);
        double alpha, r12, r13, r23;
        char comma;
        is >> alpha >> comma >> r12 >> comma >> r13 >> comma >> r23;
        REQUIRE(is.good());
        if (alpha < 1.0) {
            CHECK(r12 > 0.0);  // clustered mass at both ends: positive dependence
            CHECK(r13 > 0.0);
            CHECK(r23 > 0.0);
            CHECK(r12 > r13);
            CHECK(r13 > r23);
        } else if (alpha == 1.0) {
            CHECK(std::abs(r12) < 1e-11);
            CHECK(std::abs(r13) < 1e-11);
            CHECK(std::abs(r23) < 1e-11);
        } else {
            CHECK(r12 < 0.0);  // concentration at 1/2 makes adjacent bits disagree
            CHECK(r13 < 0.0);
        }
        CHECK(r12 < prev_rho12);  // rho12 falls monotonically in alpha
        prev_rho12 = r12;
    }
}

TEST_CASE("equicorrelation spread") {
    SweepPoint pt;
    pt.rho_theory = {0.30, 0.25, 0.28};
    CHECK(correlation_spread(pt) == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("sliding trapezoid probability curve") {
    const auto points = run_example1({0.0, 0.375, 0.75});
    REQUIRE(points.size() == 3);
    // plateau at the left end: mass sits low, so both bits lean toward 0
    CHECK(points[0].p1 == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
    CHECK(points[0].p1 < 0.5);
    CHECK(points[0].p2 < 0.5);
    // centered plateau: both bits equiprobable
    CHECK(points[1].p1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(points[1].p2 == doctest::Approx(0.5).epsilon(1e-12));
    // reflected model flips the first-bit probability
    CHECK(points[2].p1 == doctest::Approx(1.0 - points[0].p1).epsilon(1e-12));
    CHECK(points[2].p2 == doctest::Approx(1.0 - points[0].p2).epsilon(1e-12));

    CHECK_THROWS_AS(run_example1({0.8}), UsageError);
    CHECK_THROWS_AS(run_example1({}), UsageError);

    std::ostringstream os;
    write_example1_csv(points, os);
    std::istringstream is(os.str());
    std::string header;
    REQUIRE(std::getline(is, header));
    CHECK(header == "c,p1,p2");
}

TEST_CASE("probability curves cross one half at the symmetric plateau") {
    CHECK(find_marginal_crossing(1) == doctest::Approx(0.375).epsilon(1e-10));
    CHECK(find_marginal_crossing(2) == doctest::Approx(0.375).epsilon(1e-10));
}

TEST_CASE("numerical failures carry the offending grid point") {
    SweepConfig cfg;
    cfg.family = SweepFamily::Custom;
    // a shape so concentrated that its density underflows every quadrature
    // panel; the model constructor detects the lost mass
    cfg.custom_template = "kind=beta alpha={param} beta=3";
    cfg.grid = {1e15};
    cfg.samples = 2;
    try {
        run_sweep(cfg);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("param=1e+15") != std::string::npos);
    }
}
