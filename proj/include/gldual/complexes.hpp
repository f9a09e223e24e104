#ifndef GLDUAL_COMPLEXES_HPP
#define GLDUAL_COMPLEXES_HPP

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gldual/exact_linalg.hpp"
#include "gldual/finite_field.hpp"

namespace gldual {

inline constexpr std::size_t default_simplex_budget = 200'000;

struct simplex_hash {
    std::size_t operator()(std::vector<std::size_t> const & s) const;
};

/*
 * A semisimplicial set whose k-simplices are ordered (k+1)-tuples of
 * vertices, with d_i deleting the i-th vertex.  Vertex v is the 0-simplex
 * (v).  Face maps are stored as index tables, so the semisimplicial
 * identities are a real check on the bookkeeping.
 */
class semisimplicial_set
{
    public:
    using simplex = std::vector<std::size_t>;

    semisimplicial_set() = default;

    /*
     * simplices[k] is the list of k-simplices.  simplices[0][v] must be (v).
     * Throws input_error if a face of a listed simplex is missing or a
     * simplex is listed twice.
     */
    static semisimplicial_set from_ordered_simplices(std::vector<std::vector<simplex>> simplices);

    /* -1 for the empty set */
    int dimension() const { return static_cast<int>(cells.size()) - 1; }
    std::size_t count(std::size_t k) const { return k < cells.size() ? cells[k].size() : 0; }
    std::size_t total() const;
    simplex const & vertices(std::size_t k, std::size_t i) const { return cells[k][i]; }
    /* index of d_j of the i-th k-simplex (k >= 1) */
    std::size_t face(std::size_t k, std::size_t i, std::size_t j) const
    {
        return faces[k][i * (k + 1) + j];
    }
    std::optional<std::size_t> find(simplex const & s) const;

    /* d_i d_j = d_{j-1} d_i for all i < j, on every simplex */
    bool face_identities_hold() const;

    private:
    std::vector<std::vector<simplex>> cells;
    std::vector<std::vector<std::size_t>> faces;
    std::vector<std::unordered_map<simplex, std::size_t, simplex_hash>> index;
};

/*
 * Simplicial chains with rational coefficients.  Degrees run from
 * lowest_degree() (-1 when augmented) to top_degree().  boundary(k) is the
 * dim(k-1) x dim(k) matrix of the alternating-sign boundary; the reduced
 * complex's boundary(0) is the augmentation, a row of ones.
 */
class chain_complex
{
    public:
    chain_complex(int lowest, std::vector<std::size_t> dims, std::vector<exact_matrix> boundaries);

    int lowest_degree() const { return lowest; }
    int top_degree() const { return lowest + static_cast<int>(dims.size()) - 1; }
    std::size_t dim(int k) const;
    /* zero-row matrix when k == lowest_degree() */
    exact_matrix const & boundary(int k) const;

    bool boundary_squares_to_zero() const;
    nlohmann::json to_json() const;

    private:
    int lowest;
    std::vector<std::size_t> dims;
    std::vector<exact_matrix> maps;
};

chain_complex make_chain_complex(semisimplicial_set const & x, bool reduced);

struct homology_ranks {
    int lowest_degree = 0;
    std::vector<std::size_t> ranks;

    /* zero outside the stored range */
    std::size_t at(int k) const;
    int top_degree() const { return lowest_degree + static_cast<int>(ranks.size()) - 1; }
};

homology_ranks homology(chain_complex const & c);
homology_ranks reduced_homology_ranks(semisimplicial_set const & x);

/*
 * Tits building of GL_n(F_q): vertices are the proper nonzero subspaces,
 * ordered by dimension and then by enumeration of their echelon forms;
 * k-simplices are flags V_0 < ... < V_k listed with increasing dimension.
 */
struct tits_building {
    finite_field field;
    std::size_t n;
    std::vector<subspace> vertices;
    std::unordered_map<subspace, std::size_t, subspace_hash> vertex_index;
    semisimplicial_set complex;

    std::optional<std::size_t> vertex_of(subspace const & s) const;
};

tits_building make_tits_building(std::size_t n, unsigned q,
                                 std::size_t budget = default_simplex_budget);

/* perms[k][i]: image of the i-th k-simplex */
struct simplicial_action {
    std::vector<std::vector<std::size_t>> perms;
};

/*
 * Extends a vertex permutation to all simplices.  Throws verification_error
 * if the image of a simplex is not a simplex or the result does not commute
 * with the face maps.
 */
simplicial_action extend_vertex_map(semisimplicial_set const & x,
                                    std::vector<std::size_t> const & vertex_map);

/* g . V = span(g v) for each generator; generators must be invertible. */
std::vector<simplicial_action> group_action(tits_building const & b,
                                            std::vector<fq_matrix> const & generators);

bool commutes_with_faces(semisimplicial_set const & x, simplicial_action const & a);

int permutation_sign(std::vector<std::size_t> const & perm);

} // namespace gldual

#endif /* GLDUAL_COMPLEXES_HPP */
