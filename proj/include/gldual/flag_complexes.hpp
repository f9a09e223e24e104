#ifndef GLDUAL_FLAG_COMPLEXES_HPP
#define GLDUAL_FLAG_COMPLEXES_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "gldual/complexes.hpp"
#include "gldual/lattice.hpp"

namespace gldual {

/*
 * A flag 0 < F_0 < ... < F_q < Z^n of proper nonzero direct summands, each
 * given by a basis (rows).
 */
struct integer_flag {
    std::size_t n = 0;
    std::vector<integer_matrix> subgroups;
};

/* Throws input_error unless every member is a direct summand and inclusions are strict. */
void validate_flag(integer_flag const & flag);

/*
 * Bases P_0, ..., P_{q+1} of summands with F_i = P_0 + ... + P_i (direct) and
 * Z^n = P_0 + ... + P_{q+1}.  P_0 is the given basis of F_0.  The result is
 * checked exactly before it is returned.
 */
std::vector<integer_matrix> projective_splitting(integer_flag const & flag);

/* Ordered sequences of linearly independent lines of F_q^n. */
struct lines_complex {
    finite_field field;
    std::size_t n;
    std::vector<subspace> lines;
    semisimplicial_set complex;
};

lines_complex lines_complex_fq(std::size_t n, unsigned q,
                               std::size_t budget = default_simplex_budget);

enum class b_variant {
    /* exactly one vector with last coordinate 1 mod m */
    exact_one,
    /* every last coordinate 0 or 1 mod m, no count condition */
    relaxed,
};

/*
 * Some basis (v_1, ..., v_n) of Z^n extending `vectors` and meeting the
 * residue conditions of the variant, or nullopt when none exists.  The
 * construction is direct: it adjusts a unimodular completion by elementary
 * row operations, so no search is involved.
 */
std::optional<integer_matrix> b_complex_witness(integer_matrix const & vectors, std::size_t n,
                                                long m, b_variant variant);

/* Exact check that a full basis satisfies the variant's conditions and starts with `vectors`. */
bool is_b_witness(integer_matrix const & vectors, integer_matrix const & basis, long m,
                  b_variant variant);

/*
 * The simplices of B_n(Z, (m)) (or of its relaxed variant) all of whose
 * vertices have sup-norm at most H.  Witnesses may have larger entries.
 */
struct truncated_b_complex {
    std::size_t n = 0;
    long m = 2;
    long height = 1;
    b_variant variant = b_variant::exact_one;
    std::vector<integer_vector> vertices;
    std::map<integer_vector, std::size_t> vertex_index;
    semisimplicial_set complex;
    /* witnesses[k][i] is a full basis starting with the i-th k-simplex */
    std::vector<std::vector<integer_matrix>> witnesses;
    std::size_t witnesses_failed = 0;

    std::optional<std::size_t> vertex_of(integer_vector const & v) const;
};

truncated_b_complex b_complex_truncated(std::size_t n, long m, long height,
                                        b_variant variant = b_variant::exact_one,
                                        std::size_t budget = default_simplex_budget);

/* Reduced homology ranks in degrees -1 .. k_max. */
homology_ranks connectivity_probe(semisimplicial_set const & x, int k_max);

struct probe_trial {
    long height;
    homology_ranks ranks;
    std::size_t simplices;
    std::size_t witnesses_failed;
};

struct probe_report {
    std::size_t n;
    long m;
    long height;
    std::vector<probe_trial> trials;
    /* smallest height whose ranks vanish in degrees -1 .. n-2 */
    std::optional<long> minimal_connected_height;
    bool monotone_nonincreasing;

    nlohmann::json to_json() const;
};

/* Probes b_complex_truncated(n, m, h) for h = 1 .. height. */
probe_report probe_b_complex(std::size_t n, long m, long height,
                             std::size_t budget = default_simplex_budget);

struct retraction_image {
    integer_vector vertex;
    integer_vector image;
};

struct retraction_report {
    integer_vector w;
    std::vector<retraction_image> map;
    std::size_t moved = 0;
    std::size_t images_not_zero = 0;
    std::size_t not_idempotent = 0;
    std::size_t out_of_height = 0;
    std::size_t simplices_checked = 0;
    std::size_t simplices_failed = 0;

    bool passed() const
    {
        return images_not_zero == 0 && not_idempotent == 0 && simplices_failed == 0;
    }
    nlohmann::json to_json() const;
};

/*
 * rho(v) = v - w when the last coordinate of v is 1 mod m, v otherwise, on
 * the link of w in the relaxed complex truncated at X's height.  Every link
 * simplex s is checked: (w, rho(s)) must be a simplex of the exact-one
 * complex, so rho(s) is a simplex of the link of w there.  Images beyond the
 * height are counted in out_of_height and still checked.
 */
retraction_report case1_retraction(truncated_b_complex const & x, integer_vector const & w);

} // namespace gldual

#endif /* GLDUAL_FLAG_COMPLEXES_HPP */
