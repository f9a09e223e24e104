#ifndef GLDUAL_STEINBERG_HPP
#define GLDUAL_STEINBERG_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gldual/complexes.hpp"
#include "gldual/exact_linalg.hpp"
#include "gldual/finite_field.hpp"
#include "gldual/quad_rings.hpp"

namespace gldual {

/*
 * St_n(F_q) as the cycle space of the top boundary of the reduced chain
 * complex of the Tits building.  The basis is the canonical kernel basis:
 * basis[j] is 1 at free_columns[j] and 0 at the other free columns, so the
 * coordinates of a cycle are its values at the free columns.
 */
struct steinberg_module {
    tits_building building;
    chain_complex complex;
    std::vector<rational_vector> basis;
    std::vector<std::size_t> free_columns;

    std::size_t n() const { return building.n; }
    std::size_t dim() const { return basis.size(); }
    int degree() const { return static_cast<int>(building.n) - 2; }
    std::size_t chain_dim() const { return complex.dim(degree()); }

    bool is_cycle(rational_vector const & chain) const;
    /* Throws verification_error if the chain is not a cycle. */
    rational_vector coordinates(rational_vector const & cycle) const;
    rational_vector from_coordinates(rational_vector const & coords) const;
};

steinberg_module make_steinberg_module(std::size_t n, unsigned q,
                                       std::size_t budget = default_simplex_budget);

/* A finite-dimensional module given by one matrix per generator. */
struct linear_representation {
    std::size_t dim = 0;
    std::vector<exact_matrix> matrices;
};

/* Matrices of the generators on the Steinberg basis; verified invertible. */
linear_representation steinberg_action(steinberg_module const & st,
                                       std::vector<fq_matrix> const & generators);

linear_representation trivial_representation(std::size_t dim, std::size_t generators);

/* epsilon(g) in {+1, -1} for each generator */
struct character_twist {
    std::vector<int> signs;
};

/* Legendre symbol of det(g); all signs +1 in characteristic 2. */
character_twist legendre_twist(finite_field const & f, std::vector<fq_matrix> const & generators);

/*
 * Checks that the signs define a character of the group generated, by
 * propagating them over the whole finite group and comparing every time an
 * element is reached twice.  Throws budget_error if the group exceeds
 * max_order elements.
 */
bool twist_is_consistent(finite_field const & f, std::vector<fq_matrix> const & generators,
                         character_twist const & twist, std::size_t max_order = 1'000'000);

/* dim M / span{ eps(g) g m - m } */
std::size_t coinvariants_dim(linear_representation const & m,
                             std::optional<character_twist> const & twist = std::nullopt);

/*
 * Fundamental class of the apartment of a frame of lines L_1, ..., L_n, as a
 * chain in degree n-2: the sum over permutations s of sign(s) times the flag
 * <L_s(1)> < <L_s(1), L_s(2)> < ... .  Each line is given by a spanning
 * vector.  Throws input_error unless the lines span F_q^n.
 */
rational_vector apartment_class(steinberg_module const & st,
                                std::vector<fq_vector> const & frame);

/* Rank of the span of all apartment classes, one class per unordered frame. */
std::size_t apartment_span_rank(steinberg_module const & st,
                                std::size_t budget = default_simplex_budget);

/*
 * Determinant of conjugation by diag(-1, 1, ..., 1) on gl_n / o(n), with the
 * basis a_ij (i <= j) and a_ji identified with a_ij.
 */
int orientation_character_det(std::size_t n);

enum class dualizing_type { steinberg, steinberg_twisted };

dualizing_type dualizing_module_type(std::size_t n, quadratic_order const & o);
std::string to_string(dualizing_type t);

/* Generators of GL_n(F_q): a transvection, diag(zeta, 1, ...), an n-cycle and a transposition. */
std::vector<fq_matrix> gl_generators(finite_field const & f, std::size_t n);
/* Generators of SL_n(F_q): I + zeta^k E_ij for i != j, 0 <= k < degree. */
std::vector<fq_matrix> sl_generators(finite_field const & f, std::size_t n);
/* sl_generators together with diag(zeta, 1, ...); a second generating set of GL_n(F_q). */
std::vector<fq_matrix> gl_generators_elementary(finite_field const & f, std::size_t n);
/* Reductions of the four integer matrices generating the level-2 congruence subgroup of GL_2(Z). */
std::vector<fq_matrix> gamma2_generators(finite_field const & f);

/* All elements of the group generated, in breadth-first order from I. */
std::vector<fq_matrix> group_closure(finite_field const & f, std::size_t n,
                                     std::vector<fq_matrix> const & generators,
                                     std::size_t max_order = 1'000'000);

} // namespace gldual

#endif /* GLDUAL_STEINBERG_HPP */
