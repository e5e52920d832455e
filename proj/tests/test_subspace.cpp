#include <doctest.h>

#include "hankelid/subspace.hpp"

using namespace hankelid;

namespace {

// Small deterministic generator for reproducible random matrices.
struct TestRng {
    std::uint64_t s = 0x243f6a8885a308d3ULL;
    double operator()() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
    Mat mat(Eigen::Index r, Eigen::Index c) {
        Mat M(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) M(i, j) = (*this)();
        return M;
    }
};

}  // namespace

TEST_CASE("rank of plain and void matrices") {
    Mat M(2, 3);
    M << 1, 2, 3, 2, 4, 6;
    CHECK(rank(M) == 1);
    CHECK(rank(Mat::Identity(4, 4)) == 4);
    CHECK(rank(Mat(0, 5)) == 0);
    CHECK(rank(Mat(5, 0)) == 0);
    CHECK(rank(Mat::Zero(3, 3)) == 0);
}

TEST_CASE("left kernel dimension complements the rank") {
    TestRng rng;
    for (int i = 0; i < 20; ++i) {
        Mat M = rng.mat(2 + i % 5, 2 + (i * 3) % 6);
        RowSubspace K = left_kernel(M);
        CHECK(K.dim() + rank(M) == M.rows());
        if (K.dim() > 0) {
            CHECK((K.basis * M).cwiseAbs().maxCoeff() < 1e-9);
            // Orthonormal rows.
            Mat G = K.basis * K.basis.transpose();
            CHECK((G - Mat::Identity(K.dim(), K.dim())).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("left kernel of a zero-column matrix is everything") {
    RowSubspace K = left_kernel(Mat(3, 0));
    CHECK(K.dim() == 3);
    CHECK(K.ambient_dim == 3);
}

TEST_CASE("left kernel is deterministic and sign-canonical") {
    TestRng rng;
    Mat M = rng.mat(6, 3);
    RowSubspace a = left_kernel(M);
    RowSubspace b = left_kernel(M);
    CHECK((a.basis - b.basis).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index r = 0; r < a.dim(); ++r) {
        Eigen::Index c = 0;
        while (c < a.ambient_dim && std::abs(a.basis(r, c)) <= 1e-10) ++c;
        REQUIRE(c < a.ambient_dim);
        CHECK(a.basis(r, c) > 0.0);
    }
}

TEST_CASE("complement reconstructs the outer space") {
    TestRng rng;
    for (int i = 0; i < 10; ++i) {
        Mat big = rng.mat(5, 8);
        RowSubspace outer{8, orthonormal_rows(big)};
        RowSubspace inner{8, outer.basis.topRows(2)};
        RowSubspace C = complement_in(inner, outer);
        CHECK(C.dim() == outer.dim() - inner.dim());
        Mat stacked(inner.dim() + C.dim(), 8);
        stacked << inner.basis, C.basis;
        CHECK(rank(stacked) == outer.dim());
        // Complement is orthogonal to the inner space.
        if (C.dim() > 0) {
            CHECK((C.basis * inner.basis.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("complement rejects a non-contained inner space") {
    Mat outer(1, 3), inner(1, 3);
    outer << 1, 0, 0;
    inner << 0, 1, 0;
    CHECK_THROWS_AS(complement_in(RowSubspace{3, inner}, RowSubspace{3, outer}),
                    NotContained);
}

TEST_CASE("sigma shift pads block positions with zeros") {
    // v = [v1 | v2], v1 of width k*m -> [0_m | v1 | 0_p | v2].
    Mat basis(1, 3);  // k = 1, m = 1, p = 2 -> widths 1 and 2
    basis << 5, 6, 7;
    RowSubspace V{3, basis};
    RowSubspace W = sigma_shift(V, 1, 2);
    CHECK(W.ambient_dim == 6);
    Mat expected(1, 6);
    expected << 0, 5, 0, 0, 6, 7;
    CHECK((W.basis - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sigma shift preserves dimension") {
    TestRng rng;
    Mat basis = orthonormal_rows(rng.mat(3, 10));  // k = 2, m = 3, p = 2
    RowSubspace V{10, basis};
    RowSubspace W = sigma_shift(V, 3, 2);
    CHECK(W.ambient_dim == 15);
    CHECK(W.dim() == V.dim());
    CHECK(rank(W.basis) == V.dim());
}

TEST_CASE("subspace sum spans both operands") {
    Mat a(1, 4), b(1, 4);
    a << 1, 0, 0, 0;
    b << 1, 1, 0, 0;
    RowSubspace S = subspace_sum(RowSubspace{4, a}, RowSubspace{4, b});
    CHECK(S.dim() == 2);
    CHECK(contains_rows(S, a));
    CHECK(contains_rows(S, b));
}

TEST_CASE("least squares is exact on row-space inclusions") {
    TestRng rng;
    Mat regressor = rng.mat(3, 12);
    Mat coeff = rng.mat(2, 3);
    Mat target = coeff * regressor;
    auto [sol, residual] = lstsq_rows(target, regressor);
    CHECK(residual < 1e-9);
    CHECK((sol * regressor - target).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("least squares flags rows outside the row space") {
    Mat regressor(1, 3), target(1, 3);
    regressor << 1, 0, 0;
    target << 0, 1, 0;
    auto [sol, residual] = lstsq_rows(target, regressor);
    (void)sol;
    CHECK(residual > 0.5);
}

TEST_CASE("pseudoinverse satisfies the Penrose identity") {
    TestRng rng;
    Mat M = rng.mat(4, 6);
    Mat P = pinv(M);
    CHECK((M * P * M - M).cwiseAbs().maxCoeff() < 1e-9);
    Mat V(0, 3);
    CHECK(pinv(V).rows() == 3);
    CHECK(pinv(V).cols() == 0);
}

TEST_CASE("orthonormal_rows drops dependent rows") {
    Mat B(3, 4);
    B << 1, 0, 0, 0,
         2, 0, 0, 0,
         0, 1, 0, 0;
    Mat O = orthonormal_rows(B);
    CHECK(O.rows() == 2);
    CHECK((O * O.transpose() - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
}
