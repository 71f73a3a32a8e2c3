#include <cmath>
#include <complex>
#include <stdexcept>

#include <doctest.h>

#include "oracles.hpp"
#include "specavg/jacobi.hpp"
#include "specavg/tridiag.hpp"

using namespace specavg;

TEST_SUITE_BEGIN("jacobi");

TEST_CASE("free Dirichlet matrices match their closed forms") {
    const Eigen::MatrixXd h2 = build_finite_operator(JacobiSpec::free_laplacian(2));
    CHECK(h2(0, 0) == doctest::Approx(0.0));
    CHECK(h2(0, 1) == doctest::Approx(1.0));
    CHECK(h2(1, 0) == doctest::Approx(1.0));
    CHECK(h2(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("boundary angles fold into the endpoint diagonal entries") {
    const JacobiSpec spec({0.3, -0.7, 1.1}, {0.8, 1.4}, 0.3, 1.1);
    const Eigen::MatrixXd h = build_finite_operator(spec);
    CHECK(h(0, 0) == doctest::Approx(0.3 + std::tan(0.3)).epsilon(1e-14));
    CHECK(h(1, 1) == doctest::Approx(-0.7).epsilon(1e-14));
    CHECK(h(2, 2) == doctest::Approx(1.1 + 1.0 / std::tan(1.1)).epsilon(1e-14));
    CHECK(h(0, 1) == doctest::Approx(0.8));
    CHECK(h(1, 2) == doctest::Approx(1.4));

    // one site: both angles land on the single diagonal entry
    const Eigen::MatrixXd h1 = build_finite_operator(JacobiSpec({0.5}, {}, 0.2, 0.9));
    CHECK(h1(0, 0) ==
          doctest::Approx(0.5 + std::tan(0.2) + 1.0 / std::tan(0.9)).epsilon(1e-14));
}

TEST_CASE("matrix assembly is refused near the angle poles, mod pi") {
    const JacobiSpec base({0.0, 0.0}, {1.0});
    CHECK_THROWS_AS((void)build_finite_operator(base.with_boundary(kHalfPi + 1e-9, kHalfPi)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_finite_operator(base.with_boundary(kHalfPi + kPi, kHalfPi)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_finite_operator(base.with_boundary(0.0, 1e-9)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_finite_operator(base.with_boundary(0.0, kPi - 1e-9)),
                    std::invalid_argument);
    CHECK_NOTHROW((void)build_finite_operator(base.with_boundary(kHalfPi - 1e-3, 1e-3)));
}

TEST_CASE("spec validation rejects malformed windows") {
    CHECK_THROWS_AS(JacobiSpec({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(JacobiSpec({0.0, 0.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(JacobiSpec({0.0, 0.0}, {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(JacobiSpec({0.0, 0.0}, {0.0}), std::invalid_argument);
    const JacobiSpec spec({1.0, 2.0}, {1.5});
    CHECK_THROWS_AS((void)spec.with_potential(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)spec.with_potential(3, 1.0), std::invalid_argument);
    CHECK(spec.with_potential(2, -1.0).potential(2) == doctest::Approx(-1.0));
}

TEST_CASE("tail descriptors supply coefficients beyond the window") {
    const JacobiSpec spec({0.1, 0.2}, {1.3}, 0.0, kHalfPi,
                          TailDescriptor::periodic({0.7, 0.9}, {5.0, 6.0, 7.0}));
    CHECK(spec.hopping(1) == doctest::Approx(1.0)); // convention t_1 = 1
    CHECK(spec.hopping(2) == doctest::Approx(1.3));
    CHECK(spec.hopping(3) == doctest::Approx(0.7)); // first tail hopping
    CHECK(spec.hopping(4) == doctest::Approx(0.9));
    CHECK(spec.hopping(5) == doctest::Approx(0.7));
    CHECK(spec.potential(3) == doctest::Approx(5.0));
    CHECK(spec.potential(5) == doctest::Approx(7.0));
    CHECK(spec.potential(6) == doctest::Approx(5.0)); // cell of three repeats


    CHECK_THROWS_AS(TailDescriptor::periodic({}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(TailDescriptor::periodic({0.0}, {0.0}), std::invalid_argument);

    const TailDescriptor cb = TailDescriptor::callback(
        [](int offset) { return 1.0 + 0.1 * offset; }, [](int offset) { return -1.0 * offset; });
    const JacobiSpec with_cb = spec.with_tail(cb);
    CHECK(with_cb.hopping(4) == doctest::Approx(1.2));
    CHECK(with_cb.potential(5) == doctest::Approx(-3.0));
}

TEST_CASE("single-site transfer matrix entries and determinant") {
    const Complex z(0.7, 0.4);
    const TransferMatrix t = transfer_matrix(1.6, -0.3, z);
    CHECK(std::abs(t.a - (z + 0.3) / 1.6) < 1e-15);
    CHECK(std::abs(t.b - Complex(-1.6)) < 1e-15);
    CHECK(std::abs(t.c - Complex(1.0 / 1.6)) < 1e-15);
    CHECK(std::abs(t.d) == 0.0);
    CHECK(std::abs(t.det() - 1.0) < 1e-15);
}

TEST_CASE("transfer products compose and keep determinant one") {
    SplitMix64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const JacobiSpec spec = oracle::random_spec(rng, 10);
        const Complex z(oracle::uniform_in(rng, -2.0, 2.0), oracle::uniform_in(rng, 0.2, 1.5));
        const int n = spec.size();
        const int mid = n / 2;
        const TransferMatrix whole = transfer_product(spec, z, n, 0);
        const TransferMatrix split =
            transfer_product(spec, z, n, mid) * transfer_product(spec, z, mid, 0);
        CHECK(std::abs(whole.a - split.a) < 1e-12 * std::abs(whole.a) + 1e-13);
        CHECK(std::abs(whole.d - split.d) < 1e-12 * std::abs(whole.a) + 1e-13);
        // det cancels products of entries, so its rounding floor scales with them
        const double det_scale = std::abs(whole.a * whole.d) + std::abs(whole.b * whole.c);
        CHECK(std::abs(whole.det() - 1.0) < 1e-13 * (det_scale + 1.0));
        const TransferMatrix empty = transfer_product(spec, z, mid, mid);
        CHECK(std::abs(empty.a - 1.0) == 0.0);
        CHECK(std::abs(empty.b) == 0.0);

        // real-arithmetic route agrees at real energy
        const double e = oracle::uniform_in(rng, -3.0, 3.0);
        const TransferMatrix tc = transfer_product(spec, Complex(e, 0.0), n, 0);
        const Mat2 tr = transfer_product_real(spec, e, n, 0);
        CHECK(std::abs(tc.a - tr.a) < 1e-12 * (std::abs(tr.a) + 1.0));
        CHECK(std::abs(tc.c - tr.c) < 1e-12 * (std::abs(tr.c) + 1.0));
    }
}

TEST_CASE("solutions of the recurrence match the transfer description") {
    SplitMix64 rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const JacobiSpec spec = oracle::random_spec(rng, 8).with_boundary(0.4, kHalfPi);
        const Complex z(oracle::uniform_in(rng, -2.0, 2.0), oracle::uniform_in(rng, 0.2, 1.0));
        const int top = spec.size() + 3; // runs into the tail
        const Wavefunction psi = solve_schrodinger(spec, z, top);
        CHECK(psi.top_site() == top);
        CHECK(std::abs(psi.phi(0) - std::sin(0.4)) < 1e-15);
        CHECK(std::abs(psi.phi(1) - std::cos(0.4)) < 1e-15);
        for (int n = 1; n <= top; ++n) {
            const TransferMatrix t = transfer_product(spec, z, n, 0);
            const Complex head = t.a * std::cos(0.4) + t.b * std::sin(0.4);
            const Complex tail_cmp = t.c * std::cos(0.4) + t.d * std::sin(0.4);
            CHECK(std::abs(spec.hopping(n + 1) * psi.phi(n + 1) - head) <
                  1e-11 * (std::abs(head) + 1.0));
            CHECK(std::abs(psi.phi(n) - tail_cmp) < 1e-11 * (std::abs(tail_cmp) + 1.0));
        }
    }
}

TEST_CASE("window eigenvalues: closed forms and dense oracle") {
    const std::vector<double> two = eigenvalues(JacobiSpec::free_laplacian(2));
    REQUIRE(two.size() == 2);
    CHECK(two[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(two[1] == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> three = eigenvalues(JacobiSpec::free_laplacian(3));
    REQUIRE(three.size() == 3);
    CHECK(three[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(three[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(three[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // free N-site spectrum is 2 cos(j pi / (N+1))
    const int n = 10;
    const std::vector<double> ev = eigenvalues(JacobiSpec::free_laplacian(n));
    for (int j = 1; j <= n; ++j)
        CHECK(ev[static_cast<std::size_t>(n - j)] ==
              doctest::Approx(2.0 * std::cos(j * kPi / (n + 1))).epsilon(1e-12));

    SplitMix64 rng(13);
    for (int rep = 0; rep < 25; ++rep) {
        const JacobiSpec spec =
            oracle::random_spec(rng, 12).with_boundary(oracle::uniform_in(rng, -1.0, 1.0),
                                                       oracle::uniform_in(rng, 0.5, 2.5));
        const std::vector<double> got = eigenvalues(spec);
        const std::vector<double> want = oracle::dense_eigenvalues(spec);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(std::abs(got[i] - want[i]) < 1e-11 * (std::abs(want[i]) + 1.0));
        for (std::size_t i = 1; i < got.size(); ++i)
            CHECK(got[i - 1] < got[i]); // positive couplings keep the spectrum simple
    }
}

TEST_CASE("tridiagonal solver agrees with the dense oracle at larger sizes") {
    SplitMix64 rng(14);
    const int n = 40;
    std::vector<double> diag, off;
    for (int i = 0; i < n; ++i)
        diag.push_back(oracle::uniform_in(rng, -2.0, 2.0));
    for (int i = 1; i < n; ++i)
        off.push_back(oracle::uniform_in(rng, 0.3, 1.8));
    const std::vector<double> got = tridiag_eigenvalues(diag, off);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        h(i, i) = diag[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < n; ++i)
        h(i, i + 1) = h(i + 1, i) = off[static_cast<std::size_t>(i)];
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(got[static_cast<std::size_t>(i)] - solver.eigenvalues()(i)) < 1e-10);
}

TEST_SUITE_END();
