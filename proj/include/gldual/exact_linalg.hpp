#ifndef GLDUAL_EXACT_LINALG_HPP
#define GLDUAL_EXACT_LINALG_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

namespace gldual {

using integer = mpz_class;
using rational = mpq_class;
using rational_vector = std::vector<rational>;
using integer_vector = std::vector<integer>;

struct matrix_entry {
    std::size_t row;
    std::size_t col;
    rational value;
};

/*
 * Sparse matrix of exact rationals, stored row by row.  Every row is sorted
 * by column, and no stored entry is zero.  Matrices with zero rows or zero
 * columns are legal.
 */
class exact_matrix
{
    public:
    using sparse_row = std::vector<std::pair<std::size_t, rational>>;

    exact_matrix() = default;
    exact_matrix(std::size_t rows, std::size_t cols);

    /* Zero values are skipped; duplicates and out-of-range indices throw. */
    static exact_matrix from_entries(std::size_t rows, std::size_t cols,
                                     std::vector<matrix_entry> const & entries);
    static exact_matrix from_dense(std::size_t rows, std::size_t cols,
                                   std::vector<rational_vector> const & dense);
    /* Each vector becomes one row; all vectors must have length `cols`. */
    static exact_matrix from_rows(std::size_t cols,
                                  std::vector<rational_vector> const & rows);
    static exact_matrix from_columns(std::size_t rows,
                                     std::vector<rational_vector> const & cols);
    static exact_matrix identity(std::size_t n);

    std::size_t rows() const { return nrows; }
    std::size_t cols() const { return ncols; }
    std::size_t nonzeros() const;

    rational at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, rational const & value);
    sparse_row const & row(std::size_t r) const { return data[r]; }

    std::vector<matrix_entry> entries() const;
    std::vector<rational_vector> to_dense() const;
    exact_matrix transpose() const;
    bool is_integral() const;

    /* Matrix-vector product M v. */
    rational_vector apply(rational_vector const & v) const;

    friend exact_matrix operator*(exact_matrix const & a, exact_matrix const & b);
    friend bool operator==(exact_matrix const & a, exact_matrix const & b);

    private:
    std::size_t nrows = 0;
    std::size_t ncols = 0;
    std::vector<sparse_row> data;
};

bool is_zero(exact_matrix const & m);

/*
 * Reduced row echelon form.  `pivot_cols[i]` is the pivot column of row i of
 * `reduced`; every pivot equals 1 and is the only nonzero in its column.
 * The result is canonical: it depends only on the row space of the input.
 */
struct rref_result {
    exact_matrix reduced;
    std::vector<std::size_t> pivot_cols;
};

rref_result reduced_row_echelon(exact_matrix const & m);

std::size_t rank(exact_matrix const & m);

/*
 * Basis of the right null space.  There is one vector per non-pivot column f
 * of the RREF; that vector has a 1 in position f and 0 in every other
 * non-pivot position, so the coordinates of any kernel vector in this basis
 * are its values at the non-pivot columns.
 */
std::vector<rational_vector> kernel_basis(exact_matrix const & m);
std::vector<std::size_t> kernel_free_columns(exact_matrix const & m);

/* Invariant factors d1 | d2 | ... (all positive); rejects non-integers. */
std::vector<integer> smith_normal_form(exact_matrix const & m);

/*
 * dim span(span_vectors) / span(sub_vectors).  Throws input_error if the
 * vectors have different lengths or a sub vector is outside the ambient span.
 */
std::size_t quotient_dim(std::vector<rational_vector> const & span_vectors,
                         std::vector<rational_vector> const & sub_vectors);

rational determinant(exact_matrix const & m);

/* Some solution of m x = b, or nullopt when inconsistent. */
std::optional<rational_vector> solve(exact_matrix const & m,
                                     rational_vector const & b);

nlohmann::json to_json(exact_matrix const & m);
exact_matrix matrix_from_json(nlohmann::json const & j);

rational parse_rational(std::string const & s);

} // namespace gldual

#endif /* GLDUAL_EXACT_LINALG_HPP */
