#include "catch_amalgamated.hpp"

#include <random>

#include "gldual/complexes.hpp"
#include "gldual/errors.hpp"
#include "../oracles/linalg_oracle.hpp"

using namespace gldual;

namespace {

semisimplicial_set points(std::size_t k)
{
    std::vector<semisimplicial_set::simplex> v;
    for (std::size_t i = 0; i < k; ++i)
        v.push_back({i});
    return semisimplicial_set::from_ordered_simplices({v});
}

std::size_t ipow(std::size_t b, std::size_t e)
{
    std::size_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

/* (line, plane) incidences in F_p^3 counted over explicit vector sets */
std::size_t incidence_count(unsigned p)
{
    finite_field f(p);
    auto lines = all_subspaces(f, 3, 1);
    auto planes = all_subspaces(f, 3, 2);
    std::size_t count = 0;
    for (auto const & l : lines)
        for (auto const & h : planes) {
            std::vector<fq_vector> vs{basis_vector(h, 0), basis_vector(h, 1), basis_vector(l, 0)};
            count += span(f, 3, vs).dim == 2;
        }
    return count;
}

fq_matrix matrix_of(std::vector<std::vector<finite_field::element>> rows)
{
    fq_matrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j)
            m(i, j) = rows[i][j];
    return m;
}

} // namespace

TEST_CASE("building vertex and edge counts")
{
    auto b22 = make_tits_building(2, 2);
    CHECK(b22.complex.count(0) == 3);
    CHECK(b22.complex.count(1) == 0);

    auto b32 = make_tits_building(3, 2);
    CHECK(b32.complex.count(0) == 14);
    CHECK(b32.complex.count(1) == 21);
    CHECK(b32.complex.count(1) == incidence_count(2));

    auto b23 = make_tits_building(2, 3);
    CHECK(b23.complex.count(0) == 4);
    CHECK(make_tits_building(3, 3).complex.count(1) == incidence_count(3));
}

TEST_CASE("vertex counts agree with explicit subspace enumeration")
{
    for (unsigned p : {2u, 3u}) {
        for (unsigned n = 2; n <= 3; ++n) {
            auto b = make_tits_building(n, p);
            std::size_t expected = 0;
            for (unsigned k = 1; k < n; ++k)
                expected += linalg_oracle::count_subspaces(n, k, p);
            CHECK(b.complex.count(0) == expected);
        }
    }
    CHECK(gaussian_binomial(4, 2, 2) == linalg_oracle::count_subspaces(4, 2, 2));
}

TEST_CASE("flags are listed with increasing dimension")
{
    auto b = make_tits_building(4, 2);
    for (std::size_t k = 0; k < b.complex.count(2); ++k) {
        auto const & s = b.complex.vertices(2, k);
        CHECK(b.vertices[s[0]].dim == 1);
        CHECK(b.vertices[s[1]].dim == 2);
        CHECK(b.vertices[s[2]].dim == 3);
        finite_field const & f = b.field;
        CHECK(contains(f, b.vertices[s[1]], b.vertices[s[0]]));
        CHECK(contains(f, b.vertices[s[2]], b.vertices[s[1]]));
    }
}

TEST_CASE("building budget is enforced")
{
    CHECK_THROWS_AS(make_tits_building(3, 2, 20), budget_error);
    CHECK_THROWS_AS(make_tits_building(1, 2), input_error);
    CHECK_THROWS_AS(make_tits_building(2, 6), input_error);
}

TEST_CASE("homology of small complexes")
{
    auto one = reduced_homology_ranks(points(1));
    for (int k = one.lowest_degree; k <= one.top_degree(); ++k)
        CHECK(one.at(k) == 0);

    auto two = reduced_homology_ranks(points(2));
    CHECK(two.at(0) == 1);
    CHECK(two.at(-1) == 0);

    auto empty = reduced_homology_ranks(semisimplicial_set::from_ordered_simplices({}));
    CHECK(empty.at(-1) == 1);

    auto unreduced = homology(make_chain_complex(points(2), false));
    CHECK(unreduced.at(0) == 2);
}

TEST_CASE("building homology examples")
{
    auto h22 = reduced_homology_ranks(make_tits_building(2, 2).complex);
    CHECK(h22.at(0) == 2);
    CHECK(h22.at(-1) == 0);
    CHECK(h22.at(1) == 0);

    auto h32 = reduced_homology_ranks(make_tits_building(3, 2).complex);
    CHECK(h32.at(1) == 8);
    CHECK(h32.at(0) == 0);
    CHECK(h32.at(-1) == 0);

    CHECK(reduced_homology_ranks(make_tits_building(2, 3).complex).at(0) == 3);
}

TEST_CASE("Euler characteristic cross-check")
{
    for (auto [n, q] : {std::pair{3u, 2u}, {3u, 3u}, {4u, 2u}, {2u, 4u}}) {
        auto b = make_tits_building(n, q);
        long chi_reduced = -1;
        for (std::size_t k = 0; k < n - 1; ++k)
            chi_reduced += (k % 2 == 0 ? 1 : -1) * static_cast<long>(b.complex.count(k));
        auto h = reduced_homology_ranks(b.complex);
        long top = static_cast<long>(h.at(static_cast<int>(n) - 2));
        CHECK(chi_reduced == ((n - 2) % 2 == 0 ? top : -top));
        CHECK(h.at(static_cast<int>(n) - 2) == ipow(q, n * (n - 1) / 2));
        for (int k = -1; k < static_cast<int>(n) - 2; ++k)
            CHECK(h.at(k) == 0);
    }
}

TEST_CASE("boundary matrix shapes and entries")
{
    auto c = make_chain_complex(make_tits_building(3, 2).complex, true);
    auto const & d1 = c.boundary(1);
    CHECK(d1.rows() == 14);
    CHECK(d1.cols() == 21);
    for (std::size_t j = 0; j < d1.cols(); ++j) {
        int plus = 0, minus = 0;
        for (std::size_t i = 0; i < d1.rows(); ++i) {
            auto const x = d1.at(i, j);
            CHECK((x == 0 || x == 1 || x == -1));
            plus += x == 1;
            minus += x == -1;
        }
        CHECK(plus == 1);
        CHECK(minus == 1);
    }
    auto const & aug = c.boundary(0);
    CHECK(aug.rows() == 1);
    CHECK(aug.cols() == 14);
    CHECK(c.boundary(-1).rows() == 0);
    CHECK(c.boundary_squares_to_zero());
}

TEST_CASE("malformed semisimplicial input is rejected")
{
    using S = semisimplicial_set::simplex;
    CHECK_THROWS_AS(semisimplicial_set::from_ordered_simplices({{S{0}, S{1}}, {S{0, 2}}}), input_error);
    CHECK_THROWS_AS(semisimplicial_set::from_ordered_simplices({{S{0}, S{1}}, {S{0, 1}, S{0, 1}}}),
                    input_error);
    CHECK_THROWS_AS(semisimplicial_set::from_ordered_simplices({{S{1}}}), input_error);
    auto ok = semisimplicial_set::from_ordered_simplices({{S{0}, S{1}}, {S{0, 1}, S{1, 0}}});
    CHECK(ok.face_identities_hold());
    CHECK(reduced_homology_ranks(ok).at(1) == 1);
}

TEST_CASE("identity acts trivially")
{
    auto b = make_tits_building(3, 2);
    auto acts = group_action(b, {fq_matrix::identity(3)});
    REQUIRE(acts.size() == 1);
    for (std::size_t k = 0; k < acts[0].perms.size(); ++k)
        for (std::size_t i = 0; i < acts[0].perms[k].size(); ++i)
            CHECK(acts[0].perms[k][i] == i);
}

TEST_CASE("coordinate swap on the lines of F_2^2")
{
    auto b = make_tits_building(2, 2);
    finite_field const & f = b.field;
    auto e1 = *b.vertex_of(span(f, 2, {{1, 0}}));
    auto e2 = *b.vertex_of(span(f, 2, {{0, 1}}));
    auto e12 = *b.vertex_of(span(f, 2, {{1, 1}}));
    auto acts = group_action(b, {matrix_of({{0, 1}, {1, 0}})});
    auto const & p = acts[0].perms[0];
    CHECK(p[e1] == e2);
    CHECK(p[e2] == e1);
    CHECK(p[e12] == e12);
    CHECK(permutation_sign(p) == -1);
}

TEST_CASE("actions preserve type and commute with faces")
{
    auto b = make_tits_building(3, 2);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<fq_matrix> gens;
    while (gens.size() < 8) {
        fq_matrix g(3, 3);
        for (auto & x : g.data)
            x = static_cast<finite_field::element>(bit(rng));
        if (is_invertible(b.field, g))
            gens.push_back(g);
    }
    auto acts = group_action(b, gens);
    for (auto const & a : acts) {
        for (std::size_t v = 0; v < b.vertices.size(); ++v)
            CHECK(b.vertices[a.perms[0][v]].dim == b.vertices[v].dim);
        CHECK(commutes_with_faces(b.complex, a));
        for (auto const & p : a.perms) {
            int s = permutation_sign(p);
            CHECK((s == 1 || s == -1));
        }
    }
    fq_matrix singular(3, 3);
    singular(0, 0) = 1;
    CHECK_THROWS_AS(group_action(b, {singular}), input_error);
}

TEST_CASE("permutation sign matches the determinant of the permutation matrix")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::size_t> p(5);
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        std::vector<matrix_entry> e;
        for (std::size_t i = 0; i < p.size(); ++i)
            e.push_back({p[i], i, rational(1)});
        auto m = exact_matrix::from_entries(5, 5, e);
        CHECK(determinant(m) == permutation_sign(p));
        CHECK(linalg_oracle::laplace_det(m.to_dense()) == permutation_sign(p));
    }
}

TEST_CASE("face identities hold on buildings")
{
    for (auto [n, q] : {std::pair{2u, 2u}, {3u, 2u}, {3u, 3u}, {4u, 2u}}) {
        auto b = make_tits_building(n, q);
        CHECK(b.complex.face_identities_hold());
        CHECK(make_chain_complex(b.complex, true).boundary_squares_to_zero());
    }
}

TEST_CASE("vertex maps that break simplices are rejected")
{
    using S = semisimplicial_set::simplex;
    auto x = semisimplicial_set::from_ordered_simplices({{S{0}, S{1}, S{2}}, {S{0, 1}}});
    CHECK_NOTHROW(extend_vertex_map(x, {0, 1, 2}));
    CHECK_THROWS_AS(extend_vertex_map(x, {0, 2, 1}), verification_error);
}

TEST_CASE("chain complex export")
{
    auto j = make_chain_complex(make_tits_building(2, 2).complex, true).to_json();
    CHECK(j["lowest_degree"] == -1);
    CHECK(j["dims"] == nlohmann::json::array({1, 3}));
    CHECK(j["boundaries"].size() == 2);
    CHECK(j.contains("index_assignment"));
}
