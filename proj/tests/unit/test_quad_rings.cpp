#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "gldual/errors.hpp"
#include "gldual/quad_rings.hpp"
#include "../oracles/ideal_oracle.hpp"
#include "../oracles/units_oracle.hpp"

using namespace gldual;

template <> struct Catch::StringMaker<gldual::ring_element> {
    static std::string convert(gldual::ring_element const & x)
    {
        return "(" + x.a.get_str() + " + " + x.b.get_str() + " w)/" + std::to_string(x.denom);
    }
};

TEST_CASE("make_order examples")
{
    auto o2 = quadratic_order::make(2);
    CHECK(o2.discriminant() == 8);
    CHECK(o2.signature() == field_signature{2, 0});
    auto oi = quadratic_order::make(-1);
    CHECK(oi.discriminant() == -4);
    CHECK(oi.signature() == field_signature{0, 1});
    auto o5 = quadratic_order::make(5);
    CHECK(o5.discriminant() == 5);
    CHECK(o5.signature() == field_signature{2, 0});
    CHECK_THROWS_AS(quadratic_order::make(0), input_error);
    CHECK_THROWS_AS(quadratic_order::make(1), input_error);
    CHECK_THROWS_AS(quadratic_order::make(12), input_error);
    CHECK_THROWS_AS(quadratic_order::make(-4), input_error);
}

TEST_CASE("element membership follows the denominator convention")
{
    auto o5 = quadratic_order::make(5);
    CHECK_NOTHROW(o5.element(1, 1));
    CHECK_THROWS_AS(o5.element(1, 2), input_error);
    auto u = o5.element(1, 1);
    CHECK(o5.norm(u) == -1);
    auto o3 = quadratic_order::make(3);
    CHECK(o3.norm(o3.element(2, 1)) == 1);
}

TEST_CASE("fundamental unit examples")
{
    auto o2 = quadratic_order::make(2);
    auto u2 = fundamental_unit(o2);
    CHECK(u2 == o2.element(1, 1));
    CHECK(o2.norm(u2) == -1);
    auto o3 = quadratic_order::make(3);
    auto u3 = fundamental_unit(o3);
    CHECK(u3 == o3.element(2, 1));
    CHECK(o3.norm(u3) == 1);
    auto o5 = quadratic_order::make(5);
    auto u5 = fundamental_unit(o5);
    CHECK(u5 == o5.element(1, 1));
    CHECK(o5.norm(u5) == -1);
    CHECK_THROWS_AS(fundamental_unit(quadratic_order::make(-1)), input_error);
}

TEST_CASE("fundamental unit matches a bounded search over small a, b")
{
    /* units a + b sqrt(d) or (a + b sqrt(d))/2 with 0 < a, b <= 100, smallest first */
    for (long d : {2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 21}) {
        auto o = quadratic_order::make(d);
        std::optional<ring_element> best;
        long double best_size = 0;
        for (long b = 1; b <= 100; ++b)
            for (long a = 1; a <= 100; ++a) {
                if (o.denom() == 2 && (a - b) % 2 != 0)
                    continue;
                auto x = o.element(a, b);
                if (!o.is_unit(x))
                    continue;
                long double size = (a + b * std::sqrt((long double)d)) / o.denom();
                if (!best || size < best_size) {
                    best = x;
                    best_size = size;
                }
            }
        REQUIRE(best);
        CHECK(fundamental_unit(o) == *best);
    }
}

TEST_CASE("continued fraction unit agrees with the brute-force unit search")
{
    for (long d = 2; d <= 120; ++d) {
        if (!is_squarefree(d))
            continue;
        auto o = quadratic_order::make(d);
        auto u = fundamental_unit(o);
        auto b = brute_force_unit(o.discriminant(), 100'000'000ull);
        REQUIRE(b);
        integer const x(std::to_string(b->x)), y(std::to_string(b->y));
        /* (x + y sqrt(D)) / 2 is x/2 + y sqrt(d) when D = 4d */
        ring_element expected = o.denom() == 2 ? o.element(x, y) : o.element(x / 2, y);
        CAPTURE(d);
        CHECK(u == expected);
        CHECK(o.norm(u) == b->norm);
        CHECK(has_norm_minus_one_unit(o) == (b->norm == -1));
    }
}

TEST_CASE("step cap on the continued fraction is enforced")
{
    CHECK_THROWS_AS(fundamental_unit(quadratic_order::make(94), 3), budget_error);
}

TEST_CASE("norm minus one examples")
{
    CHECK(has_norm_minus_one_unit(quadratic_order::make(2)));
    CHECK(!has_norm_minus_one_unit(quadratic_order::make(3)));
    CHECK(!has_norm_minus_one_unit(quadratic_order::make(-1)));
    CHECK(!has_norm_minus_one_unit(quadratic_order::make(34)));
    CHECK(has_norm_minus_one_unit(quadratic_order::integers()));
}

TEST_CASE("class group examples against the ideal oracle")
{
    CHECK(class_group(quadratic_order::make(-5)).h == 2);
    CHECK(class_group(quadratic_order::make(-1)).h == 1);
    CHECK(class_group(quadratic_order::make(10)).h == 2);
    CHECK(class_group(quadratic_order::make(-23)).h == 3);
    CHECK(ideal_oracle::class_numbers_by_ideals(-5).h == 2);
    CHECK(ideal_oracle::class_numbers_by_ideals(-1).h == 1);
    CHECK(ideal_oracle::class_numbers_by_ideals(10).h == 2);
    CHECK(ideal_oracle::class_numbers_by_ideals(-23).h == 3);
    CHECK(class_group(quadratic_order::integers()).h == 1);
}

TEST_CASE("class numbers agree with ideal enumeration for small |d|, narrow included")
{
    for (long d = -60; d <= 60; ++d) {
        if (d == 0 || d == 1 || !is_squarefree(d))
            continue;
        CAPTURE(d);
        auto o = quadratic_order::make(d);
        auto cg = class_group(o);
        auto oracle = ideal_oracle::class_numbers_by_ideals(d);
        CHECK(static_cast<long long>(cg.h) == oracle.h);
        CHECK(static_cast<long long>(cg.h_narrow) == oracle.h_narrow);
    }
}

TEST_CASE("narrow and wide class numbers obey the unit-norm relation")
{
    for (long D = 5; D <= 500; ++D) {
        long d = D;
        if (D % 4 == 0)
            d = D / 4;
        if (d <= 1 || !is_squarefree(d) || quadratic_order::make(d).discriminant() != D)
            continue;
        auto o = quadratic_order::make(d);
        auto cg = class_group(o);
        CAPTURE(d);
        if (has_norm_minus_one_unit(o))
            CHECK(cg.h_narrow == cg.h);
        else
            CHECK(cg.h_narrow == 2 * cg.h);
    }
    for (long d : {-1, -2, -3, -5, -6, -23, -47}) {
        auto cg = class_group(quadratic_order::make(d));
        CHECK(cg.h_narrow == cg.h);
    }
}

TEST_CASE("class group representatives are reduced, sorted and memo-transparent")
{
    for (long d : {-5, -23, -47, 10, 15, 79, 82}) {
        auto o = quadratic_order::make(d);
        auto with = class_group(o, {10'000'000, true});
        auto without = class_group(o, {10'000'000, false});
        CHECK(with.h == without.h);
        CHECK(with.h_narrow == without.h_narrow);
        CHECK(with.forms == without.forms);
        CHECK(std::is_sorted(with.forms.begin(), with.forms.end()));
        CHECK(with.forms.size() == with.h_narrow);
        for (auto const & f : with.forms)
            CHECK(f.b * f.b - 4 * f.a * f.c == o.discriminant());
        if (d < 0)
            for (auto const & f : with.forms) {
                CHECK(abs(f.b) <= f.a);
                CHECK(f.a <= f.c);
            }
    }
    CHECK_THROWS_AS(class_group(quadratic_order::make(-5), {10, true}), budget_error);
}

TEST_CASE("chi examples")
{
    auto z = quadratic_order::integers();
    ring_matrix id{{z.from_integer(1), z.from_integer(0)}, {z.from_integer(0), z.from_integer(1)}};
    CHECK(chi(z, id) == 1);
    ring_matrix flip{{z.from_integer(-1), z.from_integer(0)}, {z.from_integer(0), z.from_integer(1)}};
    CHECK(chi(z, flip) == -1);
    auto o = quadratic_order::make(2);
    ring_matrix g{{o.element(1, 1), o.from_integer(0)}, {o.from_integer(0), o.from_integer(1)}};
    CHECK(chi(o, g) == -1);
    ring_matrix bad{{o.from_integer(2), o.from_integer(0)}, {o.from_integer(0), o.from_integer(1)}};
    CHECK_THROWS_AS(chi(o, bad), input_error);
}

TEST_CASE("chi is multiplicative on random unit-determinant matrices")
{
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> small(-3, 3);
    for (long d : {2, 3, 5, -1, 7}) {
        auto o = quadratic_order::make(d);
        std::vector<ring_element> units{o.from_integer(1), o.from_integer(-1)};
        if (d > 0)
            units.push_back(fundamental_unit(o));
        auto random_gl = [&](std::size_t n) {
            ring_matrix m(n, std::vector<ring_element>(n, o.from_integer(0)));
            for (std::size_t i = 0; i < n; ++i)
                m[i][i] = o.from_integer(1);
            m[0][0] = units[static_cast<std::size_t>(std::abs(small(rng))) % units.size()];
            for (int step = 0; step < 6; ++step) {
                std::size_t i = static_cast<std::size_t>(std::abs(small(rng))) % n;
                std::size_t j = (i + 1) % n;
                ring_element c = o.denom() == 2 ? o.element(2 * small(rng), 0)
                                                : o.element(small(rng), small(rng));
                for (std::size_t k = 0; k < n; ++k)
                    m[i][k] = o.add(m[i][k], o.mul(c, m[j][k]));
            }
            return m;
        };
        for (int trial = 0; trial < 10; ++trial) {
            auto a = random_gl(3), b = random_gl(3);
            ring_matrix ab(3, std::vector<ring_element>(3, o.from_integer(0)));
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    for (std::size_t k = 0; k < 3; ++k)
                        ab[i][j] = o.add(ab[i][j], o.mul(a[i][k], b[k][j]));
            CHECK(chi(o, ab) == chi(o, a) * chi(o, b));
        }
    }
}

TEST_CASE("log embedding examples")
{
    auto o2 = quadratic_order::make(2);
    auto minus_one = log_embedding(o2, o2.from_integer(-1));
    REQUIRE(minus_one.size() == 2);
    CHECK(minus_one[0] == 0);
    CHECK(minus_one[1] == 0);

    auto psi = log_embedding(o2, o2.element(1, 1));
    CHECK(std::fabs(static_cast<double>(psi[0] - std::log(1 + std::sqrt(2.0L)))) < 1e-12);
    CHECK(std::fabs(static_cast<double>(psi[0] + psi[1])) < 1e-9);

    auto o5 = quadratic_order::make(5);
    auto phi = log_embedding(o5, o5.element(1, 1));
    CHECK(std::fabs(static_cast<double>(phi[0] + phi[1])) < 1e-9);

    auto oi = quadratic_order::make(-1);
    auto im = log_embedding(oi, oi.element(0, 1));
    REQUIRE(im.size() == 1);
    CHECK(std::fabs(static_cast<double>(im[0])) < 1e-12);

    CHECK_THROWS_AS(log_embedding(o2, o2.from_integer(3)), input_error);
}

TEST_CASE("log embedding of large units stays on the trace-zero hyperplane")
{
    for (long d : {94, 151, 166, 199}) {
        auto o = quadratic_order::make(d);
        auto u = fundamental_unit(o);
        CHECK(abs(o.norm(u)) == 1);
        auto psi = log_embedding(o, u);
        CHECK(std::fabs(static_cast<double>(psi[0] + psi[1])) < 1e-9);
        auto u2 = o.mul(u, u);
        auto psi2 = log_embedding(o, u2);
        CHECK(std::fabs(static_cast<double>(psi2[0] - 2 * psi[0])) < 1e-9);
    }
}

TEST_CASE("descriptor json")
{
    auto j = descriptor(quadratic_order::make(2));
    CHECK(j["d"] == 2);
    CHECK(j["D"] == 8);
    CHECK(j["signature"] == nlohmann::json::array({2, 0}));
    CHECK(j["fundamental_unit"]["a"] == "1");
    CHECK(j["fundamental_unit"]["norm"] == -1);
    CHECK(j["h"] == 1);
    CHECK(j["norm_minus_one"] == true);
    auto z = descriptor(quadratic_order::integers());
    CHECK(z["d"].is_null());
    CHECK(z["fundamental_unit"].is_null());
}
