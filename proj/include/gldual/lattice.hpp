#ifndef GLDUAL_LATTICE_HPP
#define GLDUAL_LATTICE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "gldual/exact_linalg.hpp"

namespace gldual {

/* Integer matrices as lists of rows; used for bases of sublattices of Z^n. */
using integer_matrix = std::vector<integer_vector>;

exact_matrix to_exact(integer_matrix const & rows, std::size_t cols);

integer integer_determinant(integer_matrix const & rows);

/* True iff the rows of the square matrix form a basis of Z^n. */
bool is_unimodular(integer_matrix const & rows);

/*
 * Rows E such that the rows of `basis` followed by E form a basis of Z^n.
 * Returns nullopt if `basis` is not part of any basis of Z^n (its rows are
 * dependent or span a non-saturated sublattice).
 */
std::optional<integer_matrix> unimodular_completion(integer_matrix const & basis,
                                                    std::size_t n);

/* All invariant factors of the rows equal 1, i.e. they extend to a basis. */
bool spans_direct_summand(integer_matrix const & basis, std::size_t n);

} // namespace gldual

#endif /* GLDUAL_LATTICE_HPP */
