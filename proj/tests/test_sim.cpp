#include "confound/controller.hpp"
#include "confound/integrate.hpp"
#include "confound/signal.hpp"
#include "confound/system.hpp"
#include "test_util.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace confound;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd m1(double v) { return MatrixXd::Constant(1, 1, v); }
VectorXd v1(double v) { return VectorXd::Constant(1, v); }

Trajectory hold(double u, double w, double x0, double t_end, double dt) {
    return integrate(make_example_system(), OpenLoop{Constant{u}}, Constant{w}, Constant{0.0},
                     v1(x0), t_end, dt);
}

}  // namespace

TEST_SUITE("system") {
    TEST_CASE("example system matrices") {
        auto s = make_example_system();
        CHECK(s.A()(0, 0) == -3.0);
        CHECK(s.B()(0, 0) == 1.0);
        CHECK(s.E()(0, 0) == 1.0);
        CHECK(s.C()(0, 0) == 2.0);
        CHECK(s.is_siso());
    }

    TEST_CASE("steady-state map examples") {
        auto s = make_example_system();
        auto a = steady_state_map(s, v1(0), v1(0));
        CHECK(a.x(0) == 0.0);
        CHECK(a.y(0) == 0.0);
        auto b = steady_state_map(s, v1(2), v1(1));
        CHECK(b.x(0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(b.y(0) == doctest::Approx(2.0).epsilon(1e-14));
        auto c = steady_state_map(s, v1(1), v1(0));
        CHECK(c.x(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(c.y(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(steady_state_gain(s) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    }

    TEST_CASE("two-state system equilibrium") {
        MatrixXd A(2, 2);
        A << -1, 0.5, 0, -2;
        MatrixXd B(2, 1), E(2, 1), C(1, 2);
        B << 1, 0;
        E << 0, 1;
        C << 1, 1;
        LinearSystem s(A, B, E, C);
        auto ss = steady_state_map(s, v1(1.0), v1(2.0));
        CHECK((A * ss.x + B * 1.0 + E * 2.0).norm() < 1e-12);
    }

    TEST_CASE("construction errors") {
        CHECK_ERROR_CODE(LinearSystem(m1(1.0), m1(1), m1(1), m1(1)), ErrorCode::NotHurwitz);
        CHECK_ERROR_CODE(LinearSystem(m1(0.0), m1(1), m1(1), m1(1)), ErrorCode::NotHurwitz);
        CHECK_ERROR_CODE(LinearSystem(m1(-1), MatrixXd::Ones(2, 1), m1(1), m1(1)),
                         ErrorCode::DimensionMismatch);
        CHECK_ERROR_CODE(LinearSystem(MatrixXd::Identity(2, 3), m1(1), m1(1), m1(1)),
                         ErrorCode::DimensionMismatch);
        CHECK_ERROR_CODE(LinearSystem(m1(-1), m1(std::nan("")), m1(1), m1(1)),
                         ErrorCode::NonFinite);
        auto s = make_example_system();
        CHECK_ERROR_CODE(steady_state_map(s, VectorXd::Zero(2), v1(0)),
                         ErrorCode::DimensionMismatch);
    }
}

TEST_SUITE("signal") {
    TEST_CASE("sinusoid examples") {
        Sinusoid g{2.0, 0.001, 0.0};
        CHECK(eval_signal(g, 0.0) == 0.0);
        CHECK(eval_signal(g, std::numbers::pi / 0.002) == doctest::Approx(2.0).epsilon(1e-12));
    }

    TEST_CASE("piecewise constant holds within an interval") {
        PiecewiseConstant g{7, 50.0, -1.0, 1.0};
        CHECK(eval_signal(g, 10.0) == eval_signal(g, 49.9));
        CHECK(eval_signal(g, 10.0) == piecewise_level(g, 0));
        CHECK(eval_signal(g, 60.0) == piecewise_level(g, 1));
        CHECK(eval_signal(g, 50.0) == piecewise_level(g, 1));
    }

    TEST_CASE("piecewise levels are in range and roughly uniform") {
        PiecewiseConstant g{123, 1.0, 0.5, 1.5};
        double sum = 0.0;
        const int n = 20000;
        for (int k = 0; k < n; ++k) {
            double v = piecewise_level(g, k);
            REQUIRE(v >= 0.5);
            REQUIRE(v < 1.5);
            sum += v;
        }
        CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
    }

    TEST_CASE("different seeds and streams give different levels") {
        PiecewiseConstant a{1, 1.0, 0.0, 1.0}, b{2, 1.0, 0.0, 1.0};
        CHECK(piecewise_level(a, 0) != piecewise_level(b, 0));
        CHECK(derive_seed(42, 1) != derive_seed(42, 2));
        CHECK(derive_seed(42, 1) == derive_seed(42, 1));
    }

    TEST_CASE("generator validation") {
        CHECK_ERROR_CODE(validate(PiecewiseConstant{0, 0.0, 0.0, 1.0}), ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(validate(PiecewiseConstant{0, 1.0, 2.0, 1.0}), ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(validate(Sinusoid{-1.0, 1.0, 0.0}), ErrorCode::InvalidArgument);
        CHECK_NOTHROW(validate(Constant{3.0}));
    }
}

TEST_SUITE("controller") {
    TEST_CASE("feedforward law") {
        Controller c = Feedforward{1.5, 1.0, 0.0};
        double u = eval_controller(c, 0.0, 1.0, 0.0, 123.0);
        CHECK(u == 1.5);
        CHECK(steady_state_output(make_example_system(), u, 0.0) == doctest::Approx(1.0));
        CHECK(eval_controller(Feedforward{1.5, 1.0, 0.3}, 0.0, 1.0, 2.0, 0.0) ==
              doctest::Approx(1.5 - 2.0 + 0.3));
    }

    TEST_CASE("proportional feedback law") {
        CHECK(eval_controller(PFeedback{2.0}, 0.0, 1.0, 0.0, 1.0) == 0.0);
        CHECK(eval_controller(PFeedback{2.0}, 0.0, 1.0, 5.0, 0.25) == 1.5);
    }

    TEST_CASE("open loop ignores everything but time") {
        Controller c = OpenLoop{PiecewiseConstant{3, 10.0, -1.0, 1.0}};
        CHECK(eval_controller(c, 4.0, 0.0, 0.0, 0.0) == eval_controller(c, 4.0, 9.0, -9.0, 7.0));
    }

    TEST_CASE("controller is stateless") {
        Controller c = PFeedback{2.0};
        double first = eval_controller(c, 1.0, 1.0, 0.0, 0.3);
        for (int i = 0; i < 5; ++i) eval_controller(c, i, 10.0 * i, 1.0, -3.0);
        CHECK(eval_controller(c, 1.0, 1.0, 0.0, 0.3) == first);
    }
}

TEST_SUITE("integrate") {
    TEST_CASE("free decay matches exp(-3t)") {
        auto tr = hold(0.0, 0.0, 1.0, 1.0, 0.01);
        REQUIRE(tr.size() == 101);
        CHECK(tr.t.back() == doctest::Approx(1.0));
        CHECK(std::abs(tr.x.back() - std::exp(-3.0)) < 1e-6);
        tr.check_invariants();
    }

    TEST_CASE("constant inputs settle at the equilibrium") {
        for (double x0 : {-5.0, 0.0, 0.4, 3.0}) {
            auto tr = hold(1.0, 1.0, x0, 10.0, 0.05);
            CHECK(std::abs(tr.x.back() - 2.0 / 3.0) < 1e-6);
        }
    }

    TEST_CASE("zero equilibrium stays at zero under feedback") {
        auto tr = integrate(make_example_system(), PFeedback{2.0}, Constant{0.0}, Constant{0.0},
                            v1(0.0), 5.0, 0.05);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            CHECK(tr.x[i] == 0.0);
            CHECK(tr.u[i] == 0.0);
            CHECK(tr.y[i] == 0.0);
        }
    }

    TEST_CASE("proportional loop settles at 4/7") {
        auto tr = integrate(make_example_system(), PFeedback{2.0}, Constant{0.0}, Constant{1.0},
                            v1(0.0), 20.0, 0.05);
        CHECK(tr.y.back() == doctest::Approx(4.0 / 7.0).epsilon(1e-9));
        CHECK(tr.u.back() == doctest::Approx(2.0 * (1.0 - 4.0 / 7.0)).epsilon(1e-9));
    }

    TEST_CASE("feedforward loop settles at y = 1") {
        auto tr = integrate(make_example_system(), Feedforward{1.5, 1.0, 0.0}, Constant{0.0},
                            Constant{1.0}, v1(0.0), 20.0, 0.05);
        CHECK(tr.y.back() == doctest::Approx(1.0).epsilon(1e-9));
    }

    TEST_CASE("random constant pairs converge from random x0") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        auto sys = make_example_system();
        for (int i = 0; i < 25; ++i) {
            double u = d(rng), w = d(rng), x0 = d(rng);
            auto tr = hold(u, w, x0, 10.0, 0.05);
            double xss = steady_state_map(sys, v1(u), v1(w)).x(0);
            CHECK(std::abs(tr.x.back() - xss) < 1e-6);
        }
    }

    TEST_CASE("fourth-order convergence") {
        const double T = 2.0;
        double prev = std::abs(hold(0, 0, 1.0, T, 0.2).x.back() - std::exp(-3.0 * T));
        for (double dt : {0.1, 0.05, 0.025}) {
            double err = std::abs(hold(0, 0, 1.0, T, dt).x.back() - std::exp(-3.0 * T));
            CHECK(prev / err >= 8.0);
            prev = err;
        }
    }

    TEST_CASE("bit-identical reruns") {
        auto run = [] {
            return integrate(make_example_system(), PFeedback{2.0}, Sinusoid{2.0, 0.001, 0.0},
                             PiecewiseConstant{derive_seed(5, 2), 50.0, 0.5, 1.5}, v1(0.0), 400.0,
                             0.05);
        };
        auto a = run();
        auto b = run();
        CHECK(a.x == b.x);
        CHECK(a.u == b.u);
        CHECK(a.y == b.y);
        CHECK(a.y_r == b.y_r);
    }

    TEST_CASE("recorded channels are consistent") {
        auto tr = integrate(make_example_system(), PFeedback{2.0}, Sinusoid{2.0, 0.1, 0.0},
                            Constant{1.0}, v1(0.2), 10.0, 0.05);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            CHECK(tr.y[i] == doctest::Approx(2.0 * tr.x[i]));
            CHECK(tr.u[i] == doctest::Approx(2.0 * (tr.y_r[i] - tr.y[i])));
            CHECK(tr.w[i] == doctest::Approx(2.0 * std::sin(0.1 * tr.t[i])));
        }
    }

    TEST_CASE("integration errors") {
        auto sys = make_example_system();
        CHECK_ERROR_CODE(integrate(sys, PFeedback{-2.0}, Constant{0.0}, Constant{0.0}, v1(0), 1, 0.05),
                         ErrorCode::StabilityCheckFailed);
        CHECK_ERROR_CODE(integrate(sys, PFeedback{2.0}, Constant{0.0}, Constant{0.0}, v1(0), 1, 0.0),
                         ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(integrate(sys, PFeedback{2.0}, Constant{0.0}, Constant{0.0},
                                   VectorXd::Zero(2), 1, 0.05),
                         ErrorCode::DimensionMismatch);
        CHECK_ERROR_CODE(integrate(sys, OpenLoop{Constant{0.0}},
                                   Constant{std::numeric_limits<double>::max()}, Constant{0.0},
                                   v1(0), 1.0, 0.05),
                         ErrorCode::NonFinite);
    }

    TEST_CASE("step count") {
        CHECK(step_count(1.0, 0.01) == 100);
        CHECK(step_count(12566.0, 0.05) == 251320);
        CHECK(step_count(1.0, 0.3) == 4);
    }
}
