#ifndef GLDUAL_FINITE_FIELD_HPP
#define GLDUAL_FINITE_FIELD_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace gldual {

/*
 * The field with q elements, for q prime (< 2^16) or q in {4, 8, 9}.
 * Elements of prime-power fields are encoded as integers whose base-p digits
 * are polynomial coefficients modulo a fixed irreducible polynomial:
 *     F_4 = F_2[x]/(x^2+x+1), F_8 = F_2[x]/(x^3+x+1), F_9 = F_3[x]/(x^2+1).
 */
class finite_field
{
    public:
    using element = std::uint32_t;

    explicit finite_field(unsigned q);

    unsigned order() const { return q_; }
    unsigned characteristic() const { return p_; }
    unsigned degree() const { return k_; }
    bool is_prime() const { return k_ == 1; }

    element zero() const { return 0; }
    element one() const { return 1; }
    element add(element a, element b) const;
    element sub(element a, element b) const;
    element neg(element a) const;
    element mul(element a, element b) const;
    element inv(element a) const;
    /* A generator of the multiplicative group. */
    element primitive_element() const { return gen_; }
    /* +1 if a is a nonzero square, -1 if a non-square (q odd only). */
    int quadratic_character(element a) const;
    /* Reduce an integer into the prime subfield. */
    element from_integer(long long v) const;

    bool operator==(finite_field const & o) const { return q_ == o.q_; }

    private:
    unsigned q_, p_, k_;
    element gen_ = 1;
    std::vector<element> add_table, mul_table, inv_table;
};

using fq_vector = std::vector<finite_field::element>;

/* Dense matrix over F_q, row-major. */
struct fq_matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<finite_field::element> data;

    fq_matrix() = default;
    fq_matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
    static fq_matrix identity(std::size_t n);

    finite_field::element & operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    finite_field::element operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    bool operator==(fq_matrix const & o) const = default;
    auto operator<=>(fq_matrix const & o) const = default;
};

fq_matrix multiply(finite_field const & f, fq_matrix const & a, fq_matrix const & b);
fq_vector apply(finite_field const & f, fq_matrix const & a, fq_vector const & v);
/* In-place reduced row echelon form; returns the rank. */
std::size_t rref(finite_field const & f, fq_matrix & m);
std::size_t rank(finite_field const & f, fq_matrix m);
finite_field::element determinant(finite_field const & f, fq_matrix m);
bool is_invertible(finite_field const & f, fq_matrix const & m);
fq_matrix inverse(finite_field const & f, fq_matrix const & m);

/*
 * A subspace of F_q^n, stored by its reduced row echelon basis (dim x n),
 * which is its canonical key.
 */
struct subspace {
    std::size_t dim = 0;
    std::size_t ambient = 0;
    std::vector<finite_field::element> basis;

    bool operator==(subspace const & o) const = default;
    auto operator<=>(subspace const & o) const = default;
};

struct subspace_hash {
    std::size_t operator()(subspace const & s) const;
};

subspace span(finite_field const & f, std::size_t n, std::vector<fq_vector> const & vectors);
/* All subspaces of dimension k, in a fixed deterministic order. */
std::vector<subspace> all_subspaces(finite_field const & f, std::size_t n, std::size_t k);
bool contains(finite_field const & f, subspace const & big, subspace const & small);
/* g . V for g acting on column vectors. */
subspace image(finite_field const & f, fq_matrix const & g, subspace const & v);
fq_vector basis_vector(subspace const & s, std::size_t i);

/* Gaussian binomial [n choose k]_q. */
unsigned long long gaussian_binomial(unsigned n, unsigned k, unsigned q);

} // namespace gldual

#endif /* GLDUAL_FINITE_FIELD_HPP */
