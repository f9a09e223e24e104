#include "catch_amalgamated.hpp"

#include <random>

#include "gldual/errors.hpp"
#include "gldual/exact_linalg.hpp"
#include "gldual/lattice.hpp"
#include "../oracles/linalg_oracle.hpp"

using namespace gldual;

namespace {

exact_matrix from_ints(std::vector<std::vector<long>> const & rows, std::size_t cols)
{
    std::vector<rational_vector> r;
    for (auto const & row : rows)
        r.emplace_back(row.begin(), row.end());
    return exact_matrix::from_rows(cols, r);
}

/* edges -> vertices of a triangle: columns are edges 01, 02, 12 */
exact_matrix triangle_boundary()
{
    return from_ints({{-1, -1, 0}, {1, 0, -1}, {0, 1, 1}}, 3);
}

exact_matrix random_matrix(std::mt19937 & rng, std::size_t r, std::size_t c, double density)
{
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<int> val(-3, 3);
    std::vector<matrix_entry> e;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (coin(rng) < density) {
                rational v(val(rng), 1 + (val(rng) + 3) % 2);
                v.canonicalize();
                e.push_back({i, j, v});
            }
    return exact_matrix::from_entries(r, c, e);
}

linalg_oracle::dense dense_of(exact_matrix const & m) { return m.to_dense(); }

} // namespace

TEST_CASE("matrix construction rejects malformed entries")
{
    CHECK_THROWS_AS(exact_matrix::from_entries(2, 2, {{0, 0, 1}, {0, 0, 2}}), input_error);
    CHECK_THROWS_AS(exact_matrix::from_entries(2, 2, {{2, 0, 1}}), input_error);
    auto m = exact_matrix::from_entries(2, 2, {{0, 0, 0}, {1, 1, 5}});
    CHECK(m.nonzeros() == 1);
    CHECK(m.at(1, 1) == 5);
}

TEST_CASE("rank examples")
{
    CHECK(rank(exact_matrix::identity(3)) == 3);
    CHECK(rank(exact_matrix(4, 7)) == 0);
    CHECK(rank(exact_matrix(0, 5)) == 0);
    CHECK(rank(exact_matrix(5, 0)) == 0);
    auto t = triangle_boundary();
    CHECK(rank(t) == 2);
    CHECK(linalg_oracle::rank_by_minors(dense_of(t), 3) == 2);
}

TEST_CASE("kernel basis examples")
{
    CHECK(kernel_basis(exact_matrix::identity(2)).empty());

    auto k = kernel_basis(from_ints({{1, -1}}, 2));
    REQUIRE(k.size() == 1);
    CHECK(k[0][0] == k[0][1]);
    CHECK(k[0][0] != 0);

    /* the 3-cycle graph: same incidence as the triangle's edges */
    auto t = triangle_boundary();
    auto cyc = kernel_basis(t);
    REQUIRE(cyc.size() == 1);
    CHECK(linalg_oracle::null_space_dim_by_box(dense_of(t), 3, 1) == 1);
    for (auto const & x : t.apply(cyc[0]))
        CHECK(x == 0);
}

TEST_CASE("kernel coordinates are values at free columns")
{
    auto m = from_ints({{1, 2, 0, 3}, {0, 0, 1, 1}}, 4);
    auto basis = kernel_basis(m);
    auto free = kernel_free_columns(m);
    REQUIRE(basis.size() == free.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < free.size(); ++j)
            CHECK(basis[i][free[j]] == (i == j ? 1 : 0));
}

TEST_CASE("smith normal form examples")
{
    auto s = smith_normal_form(from_ints({{2, 0}, {0, 3}}, 2));
    CHECK(s == std::vector<integer>{1, 6});
    CHECK(smith_normal_form(exact_matrix::identity(4)) == std::vector<integer>(4, 1));
    CHECK(smith_normal_form(exact_matrix(3, 3)).empty());
    CHECK_THROWS_AS(smith_normal_form(exact_matrix::from_entries(1, 1, {{0, 0, rational(1, 2)}})),
                    input_error);
    /* 2x2 gcd oracle: d1 = gcd of entries, d1 d2 = |det| */
    auto g = smith_normal_form(from_ints({{4, 6}, {10, 14}}, 2));
    CHECK(g == std::vector<integer>{2, 2});
}

TEST_CASE("quotient_dim examples")
{
    std::vector<rational_vector> e3{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(quotient_dim(e3, {}) == 3);
    CHECK(quotient_dim(e3, e3) == 0);
    std::vector<rational_vector> e2{{1, 0}, {0, 1}};
    CHECK(quotient_dim(e2, {{1, -1}}) == 1);
    CHECK_THROWS_AS(quotient_dim({{1, 0}}, {{0, 1}}), input_error);
    CHECK_THROWS_AS(quotient_dim({{1, 0}}, {{0, 1, 2}}), input_error);
}

TEST_CASE("randomized rank, kernel and transpose properties")
{
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t const r = 1 + trial % 5, c = 1 + (trial * 7) % 5;
        auto m = random_matrix(rng, r, c, 0.5);
        std::size_t const rk = rank(m);
        CHECK(rk == rank(m.transpose()));
        CHECK(rk == linalg_oracle::rank_by_minors(dense_of(m), c));
        auto k = kernel_basis(m);
        CHECK(k.size() + rk == c);
        for (auto const & v : k)
            for (auto const & x : m.apply(v))
                CHECK(x == 0);
    }
}

TEST_CASE("dense fallback agrees with sparse elimination")
{
    std::mt19937 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        auto m = random_matrix(rng, 20, 18, 0.8);
        auto k = kernel_basis(m);
        CHECK(k.size() + rank(m) == 18);
        CHECK(rank(m) == rank(m.transpose()));
        for (auto const & v : k)
            for (auto const & x : m.apply(v))
                CHECK(x == 0);
    }
}

TEST_CASE("invariant factors divide in sequence")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> val(-9, 9);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<matrix_entry> e;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                e.push_back({i, j, rational(val(rng))});
        auto m = exact_matrix::from_entries(4, 3, e);
        auto f = smith_normal_form(m);
        CHECK(f.size() == rank(m));
        for (std::size_t i = 0; i + 1 < f.size(); ++i)
            CHECK(f[i + 1] % f[i] == 0);
    }
}

TEST_CASE("results are deterministic")
{
    std::mt19937 rng(5);
    auto m = random_matrix(rng, 9, 11, 0.4);
    auto a = kernel_basis(m), b = kernel_basis(m);
    CHECK(a == b);
    CHECK(to_json(m) == to_json(matrix_from_json(to_json(m))));
}

TEST_CASE("json exchange keeps exact rationals")
{
    auto m = exact_matrix::from_entries(2, 3, {{0, 2, rational(-7, 3)}, {1, 0, rational(5)}});
    auto j = to_json(m);
    CHECK(j["entries"][0][2] == "-7/3");
    CHECK(matrix_from_json(j) == m);
    CHECK(parse_rational("4/6") == rational(2, 3));
    CHECK_THROWS_AS(parse_rational("1/0"), input_error);
}

TEST_CASE("determinant and solve")
{
    CHECK(determinant(from_ints({{2, 1}, {7, 4}}, 2)) == 1);
    auto x = solve(from_ints({{1, 1}, {1, -1}}, 2), {3, 1});
    REQUIRE(x);
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 1);
    CHECK(!solve(from_ints({{1, 1}, {2, 2}}, 2), {1, 3}));
}

TEST_CASE("unimodular completion")
{
    auto e = unimodular_completion({{1, 2}}, 2);
    REQUIRE(e);
    integer_matrix full{{1, 2}, (*e)[0]};
    CHECK(is_unimodular(full));
    CHECK(!unimodular_completion({{2, 4}}, 2));
    CHECK(spans_direct_summand({{1, 2, 3}}, 3));
    CHECK(!spans_direct_summand({{2, 0, 0}}, 3));
}
