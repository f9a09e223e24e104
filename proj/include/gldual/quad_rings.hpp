#ifndef GLDUAL_QUAD_RINGS_HPP
#define GLDUAL_QUAD_RINGS_HPP

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "gldual/exact_linalg.hpp"

namespace gldual {

/* Numbers of real embeddings r and of conjugate pairs of complex ones s. */
struct field_signature {
    unsigned real = 0;
    unsigned complex = 0;
    bool operator==(field_signature const &) const = default;
};

/*
 * (a + b sqrt(d)) / denom.  The denominator is fixed by the order: 2 when
 * d = 1 mod 4 (then a = b mod 2), 1 otherwise.
 */
struct ring_element {
    integer a;
    integer b;
    unsigned denom = 1;
    bool operator==(ring_element const &) const = default;
};

/*
 * The maximal order of Q(sqrt(d)) for squarefree d not in {0, 1}, or the
 * rational integers Z (the degree-one specialization, where b is always 0
 * and the norm is the identity).
 */
class quadratic_order
{
    public:
    static quadratic_order make(long d);
    static quadratic_order integers();

    bool is_integers() const { return integers_; }
    long d() const { return d_; }
    long discriminant() const { return disc_; }
    field_signature signature() const;
    bool is_real() const { return integers_ || d_ > 0; }
    unsigned denom() const { return (!integers_ && mod4(d_) == 1) ? 2 : 1; }

    /* Validates membership in the order. */
    ring_element element(integer const & a, integer const & b) const;
    ring_element from_integer(integer const & n) const;
    bool contains(ring_element const & x) const;

    ring_element add(ring_element const & x, ring_element const & y) const;
    ring_element mul(ring_element const & x, ring_element const & y) const;
    ring_element neg(ring_element const & x) const;
    ring_element conjugate(ring_element const & x) const;
    integer norm(ring_element const & x) const;
    bool is_unit(ring_element const & x) const { return abs(norm(x)) == 1; }
    bool is_zero(ring_element const & x) const { return x.a == 0 && x.b == 0; }

    std::string name() const;
    std::string to_string(ring_element const & x) const;

    bool operator==(quadratic_order const & o) const
    {
        return integers_ == o.integers_ && d_ == o.d_;
    }

    static long mod4(long x) { return ((x % 4) + 4) % 4; }

    private:
    quadratic_order(long d, long disc, bool integers) : d_(d), disc_(disc), integers_(integers) {}

    long d_ = 1;
    long disc_ = 1;
    bool integers_ = true;
};

bool is_squarefree(long n);

/* Steps allowed in the continued-fraction expansion before giving up. */
inline constexpr std::size_t default_cf_step_cap = 1'000'000;

/*
 * Fundamental unit u > 1 of a real quadratic order, read off the first
 * convergent p/q of sqrt(d) (resp. (1+sqrt(d))/2) with |N(p - q conj)| = 1.
 */
ring_element fundamental_unit(quadratic_order const & o,
                              std::size_t step_cap = default_cf_step_cap);

bool has_norm_minus_one_unit(quadratic_order const & o);

/* a x^2 + b x y + c y^2 */
struct binary_form {
    integer a, b, c;
    bool operator==(binary_form const &) const = default;
    auto operator<=>(binary_form const & o) const
    {
        if (auto r = cmp(a, o.a); r != 0)
            return r < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (auto r = cmp(b, o.b); r != 0)
            return r < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (auto r = cmp(c, o.c); r != 0)
            return r < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
};

struct class_group_data {
    std::size_t h = 1;       /* wide (ordinary) class number */
    std::size_t h_narrow = 1;
    /* one reduced form per narrow class, lexicographically minimal, sorted */
    std::vector<binary_form> forms;
};

struct class_group_options {
    long max_abs_discriminant = 10'000'000;
    bool use_memo = true;
};

/*
 * Class numbers from reduced binary quadratic forms of discriminant D.
 * For D < 0 these are the reduced positive definite forms.  For D > 0 the
 * narrow classes are the cycles of the reduction operator on reduced
 * indefinite forms, and wide classes identify the cycle of f with that of -f.
 */
class_group_data class_group(quadratic_order const & o, class_group_options opts = {});

/* Reduced forms of discriminant D (D < 0: definite, a > 0), sorted. */
std::vector<binary_form> reduced_forms(long disc);
/* The reduction step on reduced indefinite forms (D > 0). */
binary_form reduction_step(binary_form const & f, long disc);

using ring_matrix = std::vector<std::vector<ring_element>>;

ring_element determinant(quadratic_order const & o, ring_matrix const & g);

/* Sign of N(det g); throws input_error unless det g is a unit of o. */
int chi(quadratic_order const & o, ring_matrix const & g);

/*
 * (log|f_1(u)|, ..., log|f_r(u)|, 2 log|g_1(u)|, ...) with one coordinate per
 * real embedding and per conjugate pair of complex embeddings.  Both real
 * embeddings are evaluated independently in extended precision.
 */
std::vector<long double> log_embedding(quadratic_order const & o, ring_element const & u);

inline constexpr long double log_lattice_tolerance = 1e-9L;

nlohmann::json descriptor(quadratic_order const & o);

} // namespace gldual

#endif /* GLDUAL_QUAD_RINGS_HPP */
