#include <doctest.h>

#include <cstdio>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "hankelid/system.hpp"

using namespace hankelid;

TEST_CASE("shape validation") {
    Mat A = Mat::Zero(2, 2);
    CHECK_THROWS_AS(IsoSystem(A, Mat::Zero(3, 1), Mat::Zero(1, 2), Mat::Zero(1, 1)),
                    InvalidShape);
    CHECK_THROWS_AS(IsoSystem(A, Mat::Zero(2, 1), Mat::Zero(1, 2), Mat::Zero(2, 1)),
                    InvalidShape);
    IsoSystem memless = IsoSystem::memoryless(Mat::Ones(2, 3));
    CHECK(memless.n() == 0);
    CHECK(memless.m() == 3);
    CHECK(memless.p() == 2);
}

TEST_CASE("observability and controllability of the shift-register fixture") {
    IsoSystem sys = fixtures::true_system();
    CHECK(observability_matrix(sys, -1).rows() == 0);
    CHECK(observability_matrix(sys, 1).rows() == 4);
    CHECK(controllability_matrix(sys, -1).cols() == 0);
    CHECK(is_observable(sys));
    CHECK(is_controllable(sys));
    CHECK(lag(sys) == 2);
}

TEST_CASE("lag structure increments sum to n") {
    IsoSystem sys = fixtures::true_system();
    LagStructure ls = lag_structure(sys);
    CHECK(ls.rho[0] == 2);  // rho_{-1} = p
    CHECK(ls.rho[1] == 2);  // rho_0
    CHECK(ls.rho[2] == 1);  // rho_1
    CHECK(ls.rho[3] == 0);  // rho_2
    Eigen::Index total = 0;
    for (std::size_t i = 1; i < ls.rho.size(); ++i) total += ls.rho[i];
    CHECK(total == sys.n());
    // Increments never grow.
    for (std::size_t i = 2; i < ls.rho.size(); ++i) CHECK(ls.rho[i] <= ls.rho[i - 1]);
}

TEST_CASE("memoryless systems have lag zero") {
    IsoSystem sys = IsoSystem::memoryless(Mat::Ones(1, 1));
    CHECK(lag(sys) == 0);
    CHECK(is_observable(sys));
    CHECK(is_controllable(sys));
}

TEST_CASE("structured matrices compose consistently") {
    IsoSystem sys = fixtures::true_system();
    for (Eigen::Index k = 0; k <= 3; ++k) {
        StructuredMatrices sm = structured_matrices(sys, k);
        CHECK(sm.Omega.rows() == (k + 1) * 2);
        CHECK(sm.Gamma.cols() == (k + 1) * 2);
        CHECK(sm.Theta.rows() == (k + 1) * 2);
        CHECK(sm.Phi.rows() == (k + 1) * 4);
        CHECK(sm.Phi.cols() == 3 + (k + 1) * 2);
        CHECK(sm.Psi.rows() == (k + 1) * 2 + k * 2);
        // A window of a simulated run lies in the column span relation:
        // [u-window; y-window] = Phi [x(t); u-window].
        SimulationResult sim = simulate(sys, fixtures::x0(), fixtures::input14());
        for (Eigen::Index t = 0; t + k < 14; ++t) {
            Vec uw((k + 1) * 2), yw((k + 1) * 2);
            for (Eigen::Index i = 0; i <= k; ++i) {
                uw.segment(2 * i, 2) = fixtures::input14().col(t + i);
                yw.segment(2 * i, 2) = sim.y.col(t + i);
            }
            Vec zx(3 + (k + 1) * 2);
            zx << sim.x.col(t), uw;
            Vec window((k + 1) * 4);
            window << uw, yw;
            CHECK((sm.Phi * zx - window).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("simulation matches the golden record") {
    SimulationResult sim =
        simulate(fixtures::true_system(), fixtures::x0(), fixtures::input14());
    CHECK((sim.y - fixtures::output14()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sim.x - fixtures::state15()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(simulate(fixtures::true_system(), Vec::Zero(2), fixtures::input14()),
                    InvalidShape);
}

TEST_CASE("zero input and zero initial state give zero output") {
    IsoSystem sys = fixtures::true_system();
    SimulationResult sim = simulate(sys, Vec::Zero(3), Mat::Zero(2, 6));
    CHECK(sim.y.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("explains accepts the generating system and rejects a corrupted one") {
    IOTrajectory traj = fixtures::record14();
    IsoSystem sys = fixtures::true_system();
    ExplainsResult ok = explains(sys, traj);
    CHECK(ok.explains);
    CHECK(ok.residual <= 1e-9);
    REQUIRE(ok.witness.has_value());
    CHECK((ok.witness->x - fixtures::state15()).cwiseAbs().maxCoeff() < 1e-8);

    Mat D = sys.D();
    D(0, 0) += 0.5;
    IsoSystem wrong(sys.A(), sys.B(), sys.C(), D);
    CHECK_FALSE(explains(wrong, traj).explains);
}

TEST_CASE("explains for memoryless systems") {
    Mat u(1, 3), y(1, 3);
    u << 1, 2, 3;
    y << 2, 4, 6;
    IOTrajectory traj(u, y);
    CHECK(explains(IsoSystem::memoryless(Mat::Constant(1, 1, 2.0)), traj).explains);
    CHECK_FALSE(explains(IsoSystem::memoryless(Mat::Constant(1, 1, 3.0)), traj).explains);
}

TEST_CASE("isomorphism under a coordinate change") {
    IsoSystem sys = fixtures::true_system();
    IsomorphismResult self = is_isomorphic(sys, sys);
    CHECK(self.isomorphic);
    CHECK((*self.S - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);

    Mat S(3, 3);
    S << 1, 2, 0,
         0, 1, 1,
         1, 0, 3;
    Mat Sinv = S.inverse();
    IsoSystem other(Sinv * sys.A() * S, Sinv * sys.B(), sys.C() * S, sys.D());
    IsomorphismResult res = is_isomorphic(sys, other);
    CHECK(res.isomorphic);
    CHECK((*res.S - S).cwiseAbs().maxCoeff() < 1e-8);
    // Symmetric verdict with the inverse map.
    IsomorphismResult rev = is_isomorphic(other, sys);
    CHECK(rev.isomorphic);
    CHECK((*rev.S - Sinv).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("isomorphism rejects mismatches") {
    IsoSystem sys = fixtures::true_system();
    IsoSystem two = fixtures::short_record_system();
    CHECK_FALSE(is_isomorphic(sys, two).isomorphic);  // different n
    Mat D = sys.D();
    D(1, 1) = 7;
    CHECK_FALSE(is_isomorphic(sys, IsoSystem(sys.A(), sys.B(), sys.C(), D)).isomorphic);

    IsoSystem unobservable(Mat::Zero(2, 2), Mat::Ones(2, 2), Mat::Zero(2, 2),
                           Mat::Zero(2, 2));
    CHECK_THROWS_AS(is_isomorphic(sys, unobservable), NotObservable);
}

TEST_CASE("perturbation reproduces the hand-worked second system") {
    IOTrajectory traj = fixtures::record(5);
    IsoSystem base = fixtures::short_record_system();
    StateTrajectory x{fixtures::short_record_state()};
    IsoSystem hat = perturb_explaining(base, x, fixtures::perturbation_T5(), traj);
    IsoSystem expected = fixtures::perturbed_system();
    CHECK(fixtures::max_abs_diff(hat.A(), expected.A()) < 1e-12);
    CHECK(fixtures::max_abs_diff(hat.B(), expected.B()) < 1e-12);
    CHECK(fixtures::max_abs_diff(hat.C(), expected.C()) < 1e-12);
    CHECK(fixtures::max_abs_diff(hat.D(), expected.D()) < 1e-12);
    CHECK(explains(hat, traj).explains);
    CHECK(lag(hat) == lag(base));
}

TEST_CASE("perturbation validates its inputs") {
    IOTrajectory traj = fixtures::record(5);
    IsoSystem base = fixtures::short_record_system();
    StateTrajectory x{fixtures::short_record_state()};

    PerturbationSpec bad = fixtures::perturbation_T5();
    bad.zeta = Vec::Zero(2);
    CHECK_THROWS_AS(perturb_explaining(base, x, bad, traj), InvalidPerturbation);

    bad = fixtures::perturbation_T5();
    bad.etas.pop_back();
    CHECK_THROWS_AS(perturb_explaining(base, x, bad, traj), InvalidPerturbation);

    bad = fixtures::perturbation_T5();
    bad.xi(0) += 1.0;  // no longer annihilates J_d(x)
    CHECK_THROWS_AS(perturb_explaining(base, x, bad, traj), InvalidPerturbation);

    StateTrajectory wrong{fixtures::short_record_state() * 2.0};
    CHECK_THROWS_AS(perturb_explaining(base, wrong, fixtures::perturbation_T5(), traj),
                    InvalidPerturbation);
}

TEST_CASE("system json round trip") {
    const std::string path = "hankelid_test_sys.json";
    IsoSystem sys = fixtures::true_system();
    save_system(sys, path);
    IsoSystem back = load_system(path);
    CHECK(fixtures::max_abs_diff(back.A(), sys.A()) == 0.0);
    CHECK(fixtures::max_abs_diff(back.B(), sys.B()) == 0.0);
    CHECK(fixtures::max_abs_diff(back.C(), sys.C()) == 0.0);
    CHECK(fixtures::max_abs_diff(back.D(), sys.D()) == 0.0);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_system("missing_system.json"), FormatError);
}
