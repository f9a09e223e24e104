#include "gldual/complexes.hpp"

#include <algorithm>
#include <string>

#include "gldual/errors.hpp"

namespace gldual {

std::size_t simplex_hash::operator()(std::vector<std::size_t> const & s) const
{
    std::size_t h = 1469598103934665603ull;
    for (auto v : s)
        h = (h ^ (v + 0x9e3779b97f4a7c15ull)) * 1099511628211ull;
    return h;
}

semisimplicial_set
semisimplicial_set::from_ordered_simplices(std::vector<std::vector<simplex>> simplices)
{
    while (!simplices.empty() && simplices.back().empty())
        simplices.pop_back();
    semisimplicial_set x;
    x.cells = std::move(simplices);
    x.index.resize(x.cells.size());
    x.faces.resize(x.cells.size());
    for (std::size_t k = 0; k < x.cells.size(); ++k) {
        auto & idx = x.index[k];
        idx.reserve(x.cells[k].size());
        for (std::size_t i = 0; i < x.cells[k].size(); ++i) {
            auto const & s = x.cells[k][i];
            if (s.size() != k + 1)
                throw input_error("simplex of wrong length in dimension " + std::to_string(k));
            if (k == 0 && s[0] != i)
                throw input_error("vertex " + std::to_string(i) + " must be listed as (" +
                                  std::to_string(i) + ")");
            if (!idx.emplace(s, i).second)
                throw input_error("simplex listed twice in dimension " + std::to_string(k));
        }
    }
    for (std::size_t k = 1; k < x.cells.size(); ++k) {
        auto & f = x.faces[k];
        f.resize(x.cells[k].size() * (k + 1));
        simplex face(k);
        for (std::size_t i = 0; i < x.cells[k].size(); ++i) {
            auto const & s = x.cells[k][i];
            for (std::size_t j = 0; j <= k; ++j) {
                std::size_t t = 0;
                for (std::size_t v = 0; v <= k; ++v)
                    if (v != j)
                        face[t++] = s[v];
                auto it = x.index[k - 1].find(face);
                if (it == x.index[k - 1].end())
                    throw input_error("face of a " + std::to_string(k) + "-simplex is missing");
                f[i * (k + 1) + j] = it->second;
            }
        }
    }
    return x;
}

std::size_t semisimplicial_set::total() const
{
    std::size_t n = 0;
    for (auto const & c : cells)
        n += c.size();
    return n;
}

std::optional<std::size_t> semisimplicial_set::find(simplex const & s) const
{
    if (s.empty() || s.size() > cells.size())
        return std::nullopt;
    auto const & idx = index[s.size() - 1];
    auto it = idx.find(s);
    if (it == idx.end())
        return std::nullopt;
    return it->second;
}

bool semisimplicial_set::face_identities_hold() const
{
    for (std::size_t k = 2; k < cells.size(); ++k)
        for (std::size_t s = 0; s < cells[k].size(); ++s)
            for (std::size_t j = 1; j <= k; ++j)
                for (std::size_t i = 0; i < j; ++i)
                    if (face(k - 1, face(k, s, j), i) != face(k - 1, face(k, s, i), j - 1))
                        return false;
    return true;
}

chain_complex::chain_complex(int lowest_deg, std::vector<std::size_t> dimensions,
                             std::vector<exact_matrix> boundaries)
    : lowest(lowest_deg), dims(std::move(dimensions)), maps(std::move(boundaries))
{
    if (dims.size() != maps.size())
        throw input_error("chain_complex: one boundary per degree required");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        std::size_t expect_rows = i == 0 ? 0 : dims[i - 1];
        if (maps[i].cols() != dims[i] || maps[i].rows() != expect_rows)
            throw input_error("chain_complex: boundary in degree " +
                              std::to_string(lowest + static_cast<int>(i)) + " has wrong shape");
    }
}

std::size_t chain_complex::dim(int k) const
{
    if (k < lowest || k > top_degree())
        return 0;
    return dims[static_cast<std::size_t>(k - lowest)];
}

exact_matrix const & chain_complex::boundary(int k) const
{
    if (k < lowest || k > top_degree())
        throw input_error("chain_complex: no boundary in degree " + std::to_string(k));
    return maps[static_cast<std::size_t>(k - lowest)];
}

bool chain_complex::boundary_squares_to_zero() const
{
    for (int k = lowest + 2; k <= top_degree(); ++k)
        if (!is_zero(boundary(k - 1) * boundary(k)))
            return false;
    return true;
}

nlohmann::json chain_complex::to_json() const
{
    nlohmann::json b = nlohmann::json::array();
    for (int k = lowest; k <= top_degree(); ++k)
        b.push_back(gldual::to_json(boundary(k)));
    return {{"lowest_degree", lowest},
            {"dims", dims},
            {"boundaries", b},
            {"index_assignment",
             "basis of degree k is the list of k-simplices in construction order; "
             "boundaries[i] maps degree lowest_degree+i to the degree below, "
             "entry (face, simplex) = sum of (-1)^j over faces d_j"}};
}

chain_complex make_chain_complex(semisimplicial_set const & x, bool reduced)
{
    int const lowest = reduced ? -1 : 0;
    int const top = std::max(x.dimension(), lowest);
    std::vector<std::size_t> dims;
    std::vector<exact_matrix> maps;
    for (int k = lowest; k <= top; ++k) {
        std::size_t const n = k < 0 ? 1 : x.count(static_cast<std::size_t>(k));
        dims.push_back(n);
        if (k == lowest) {
            maps.emplace_back(0, n);
        } else if (k == 0) {
            /* augmentation */
            std::vector<matrix_entry> e;
            for (std::size_t v = 0; v < n; ++v)
                e.push_back({0, v, rational(1)});
            maps.push_back(exact_matrix::from_entries(1, n, e));
        } else {
            auto const kk = static_cast<std::size_t>(k);
            exact_matrix m(x.count(kk - 1), n);
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t j = 0; j <= kk; ++j) {
                    std::size_t f = x.face(kk, s, j);
                    rational v = m.at(f, s) + ((j % 2 == 0) ? 1 : -1);
                    m.set(f, s, v);
                }
            maps.push_back(std::move(m));
        }
    }
    return chain_complex(lowest, std::move(dims), std::move(maps));
}

std::size_t homology_ranks::at(int k) const
{
    if (k < lowest_degree || k > top_degree())
        return 0;
    return ranks[static_cast<std::size_t>(k - lowest_degree)];
}

homology_ranks homology(chain_complex const & c)
{
    homology_ranks out;
    out.lowest_degree = c.lowest_degree();
    std::vector<std::size_t> r;
    for (int k = c.lowest_degree(); k <= c.top_degree(); ++k)
        r.push_back(rank(c.boundary(k)));
    r.push_back(0);
    for (int k = c.lowest_degree(); k <= c.top_degree(); ++k) {
        auto i = static_cast<std::size_t>(k - c.lowest_degree());
        out.ranks.push_back(c.dim(k) - r[i] - r[i + 1]);
    }
    return out;
}

homology_ranks reduced_homology_ranks(semisimplicial_set const & x)
{
    return homology(make_chain_complex(x, true));
}

std::optional<std::size_t> tits_building::vertex_of(subspace const & s) const
{
    auto it = vertex_index.find(s);
    if (it == vertex_index.end())
        return std::nullopt;
    return it->second;
}

tits_building make_tits_building(std::size_t n, unsigned q, std::size_t budget)
{
    if (n < 2)
        throw input_error("tits_building: rank n must be at least 2");
    finite_field field(q);
    unsigned long long nverts = 0;
    for (unsigned k = 1; k < n; ++k)
        nverts += gaussian_binomial(static_cast<unsigned>(n), k, q);
    if (nverts > budget)
        throw budget_error("tits_building(" + std::to_string(n) + ", " + std::to_string(q) +
                           "): " + std::to_string(nverts) + " vertices exceed budget " +
                           std::to_string(budget));
    tits_building b{field, n, {}, {}, {}};
    for (std::size_t k = 1; k < n; ++k)
        for (auto & s : all_subspaces(field, n, k))
            b.vertices.push_back(std::move(s));
    for (std::size_t i = 0; i < b.vertices.size(); ++i)
        b.vertex_index.emplace(b.vertices[i], i);

    std::size_t const nv = b.vertices.size();
    std::vector<std::vector<std::size_t>> up(nv);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nv; ++j)
            if (b.vertices[j].dim > b.vertices[i].dim &&
                contains(field, b.vertices[j], b.vertices[i]))
                up[i].push_back(j);

    std::vector<std::vector<semisimplicial_set::simplex>> simplices(n - 1);
    std::size_t total = 0;
    std::vector<std::size_t> chain;
    auto extend = [&](auto & self) -> void {
        if (++total > budget)
            throw budget_error("tits_building(" + std::to_string(n) + ", " + std::to_string(q) +
                               "): simplex count exceeds budget " + std::to_string(budget));
        simplices[chain.size() - 1].push_back(chain);
        for (auto w : up[chain.back()]) {
            chain.push_back(w);
            self(self);
            chain.pop_back();
        }
    };
    for (std::size_t v = 0; v < nv; ++v) {
        chain.assign(1, v);
        extend(extend);
    }
    b.complex = semisimplicial_set::from_ordered_simplices(std::move(simplices));
    return b;
}

simplicial_action extend_vertex_map(semisimplicial_set const & x,
                                    std::vector<std::size_t> const & vertex_map)
{
    if (vertex_map.size() != x.count(0))
        throw input_error("vertex map has wrong size");
    simplicial_action a;
    int const top = x.dimension();
    for (int k = 0; k <= top; ++k) {
        auto const kk = static_cast<std::size_t>(k);
        std::vector<std::size_t> perm(x.count(kk));
        semisimplicial_set::simplex img(kk + 1);
        for (std::size_t i = 0; i < x.count(kk); ++i) {
            auto const & s = x.vertices(kk, i);
            for (std::size_t t = 0; t <= kk; ++t)
                img[t] = vertex_map[s[t]];
            auto j = x.find(img);
            if (!j)
                throw verification_error("action is not closed: image of a " +
                                         std::to_string(k) + "-simplex is not a simplex");
            perm[i] = *j;
        }
        a.perms.push_back(std::move(perm));
    }
    if (!commutes_with_faces(x, a))
        throw verification_error("action does not commute with the face maps");
    return a;
}

bool commutes_with_faces(semisimplicial_set const & x, simplicial_action const & a)
{
    for (std::size_t k = 1; k < a.perms.size(); ++k)
        for (std::size_t s = 0; s < x.count(k); ++s)
            for (std::size_t j = 0; j <= k; ++j)
                if (a.perms[k - 1][x.face(k, s, j)] != x.face(k, a.perms[k][s], j))
                    return false;
    return true;
}

std::vector<simplicial_action> group_action(tits_building const & b,
                                            std::vector<fq_matrix> const & generators)
{
    std::vector<simplicial_action> out;
    for (auto const & g : generators) {
        if (g.rows != b.n || g.cols != b.n || !is_invertible(b.field, g))
            throw input_error("group_action: generator is not an invertible " +
                              std::to_string(b.n) + "x" + std::to_string(b.n) + " matrix over F_" +
                              std::to_string(b.field.order()));
        std::vector<std::size_t> vmap(b.vertices.size());
        for (std::size_t v = 0; v < b.vertices.size(); ++v) {
            auto w = b.vertex_of(image(b.field, g, b.vertices[v]));
            if (!w)
                throw verification_error("group_action: image subspace is not a vertex");
            vmap[v] = *w;
        }
        out.push_back(extend_vertex_map(b.complex, vmap));
    }
    return out;
}

int permutation_sign(std::vector<std::size_t> const & perm)
{
    std::vector<char> seen(perm.size(), 0);
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i])
            continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
            if (j >= perm.size())
                throw input_error("permutation_sign: not a permutation");
            seen[j] = 1;
            ++len;
        }
        if (len % 2 == 0)
            sign = -sign;
    }
    return sign;
}

} // namespace gldual
