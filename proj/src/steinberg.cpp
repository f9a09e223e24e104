#include "gldual/steinberg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "gldual/errors.hpp"

namespace gldual {

bool steinberg_module::is_cycle(rational_vector const & chain) const
{
    if (chain.size() != chain_dim())
        return false;
    for (auto const & x : complex.boundary(degree()).apply(chain))
        if (x != 0)
            return false;
    return true;
}

rational_vector steinberg_module::coordinates(rational_vector const & cycle) const
{
    if (!is_cycle(cycle))
        throw verification_error("steinberg: chain is not a cycle in degree " +
                                 std::to_string(degree()));
    rational_vector c(free_columns.size());
    for (std::size_t j = 0; j < free_columns.size(); ++j)
        c[j] = cycle[free_columns[j]];
    return c;
}

rational_vector steinberg_module::from_coordinates(rational_vector const & coords) const
{
    if (coords.size() != dim())
        throw input_error("steinberg: coordinate vector has wrong length");
    rational_vector v(chain_dim());
    for (std::size_t j = 0; j < coords.size(); ++j) {
        if (coords[j] == 0)
            continue;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (basis[j][i] != 0)
                v[i] += coords[j] * basis[j][i];
    }
    return v;
}

steinberg_module make_steinberg_module(std::size_t n, unsigned q, std::size_t budget)
{
    auto b = make_tits_building(n, q, budget);
    auto c = make_chain_complex(b.complex, true);
    int const top = static_cast<int>(n) - 2;
    auto const & d = c.boundary(top);
    auto r = reduced_row_echelon(d);
    std::vector<char> is_pivot(d.cols(), 0);
    for (auto p : r.pivot_cols)
        is_pivot[p] = 1;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < d.cols(); ++j)
        if (!is_pivot[j])
            free.push_back(j);
    auto basis = kernel_basis(d);
    return steinberg_module{std::move(b), std::move(c), std::move(basis), std::move(free)};
}

linear_representation steinberg_action(steinberg_module const & st,
                                       std::vector<fq_matrix> const & generators)
{
    auto actions = group_action(st.building, generators);
    std::size_t const top = st.n() - 2;
    linear_representation rep{st.dim(), {}};
    for (auto const & a : actions) {
        auto const & perm = a.perms[top];
        std::vector<rational_vector> cols;
        for (auto const & b : st.basis) {
            rational_vector image(b.size());
            for (std::size_t s = 0; s < b.size(); ++s)
                image[perm[s]] = b[s];
            auto coords = st.coordinates(image);
            if (st.from_coordinates(coords) != image)
                throw verification_error("steinberg: image of a basis cycle is not "
                                         "recovered from its coordinates");
            cols.push_back(std::move(coords));
        }
        exact_matrix m = exact_matrix::from_columns(st.dim(), cols);
        if (st.dim() > 0 && determinant(m) == 0)
            throw verification_error("steinberg: action matrix is singular");
        rep.matrices.push_back(std::move(m));
    }
    return rep;
}

linear_representation trivial_representation(std::size_t dim, std::size_t generators)
{
    return {dim, std::vector<exact_matrix>(generators, exact_matrix::identity(dim))};
}

character_twist legendre_twist(finite_field const & f, std::vector<fq_matrix> const & generators)
{
    character_twist t;
    for (auto const & g : generators)
        t.signs.push_back(f.characteristic() == 2 ? 1
                                                  : f.quadratic_character(determinant(f, g)));
    return t;
}

namespace {

void check_generators(finite_field const & f, std::size_t n,
                      std::vector<fq_matrix> const & generators)
{
    for (auto const & g : generators)
        if (g.rows != n || g.cols != n || !is_invertible(f, g))
            throw input_error("generator is not an invertible " + std::to_string(n) + "x" +
                              std::to_string(n) + " matrix");
}

} // namespace

std::vector<fq_matrix> group_closure(finite_field const & f, std::size_t n,
                                     std::vector<fq_matrix> const & generators,
                                     std::size_t max_order)
{
    check_generators(f, n, generators);
    std::set<fq_matrix> seen;
    std::vector<fq_matrix> order;
    auto id = fq_matrix::identity(n);
    seen.insert(id);
    order.push_back(id);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (auto const & g : generators) {
            auto h = multiply(f, g, order[i]);
            if (seen.insert(h).second) {
                if (order.size() >= max_order)
                    throw budget_error("group closure exceeds " + std::to_string(max_order) +
                                       " elements");
                order.push_back(std::move(h));
            }
        }
    return order;
}

bool twist_is_consistent(finite_field const & f, std::vector<fq_matrix> const & generators,
                         character_twist const & twist, std::size_t max_order)
{
    if (twist.signs.size() != generators.size())
        throw input_error("twist has " + std::to_string(twist.signs.size()) + " signs for " +
                          std::to_string(generators.size()) + " generators");
    if (generators.empty())
        return true;
    std::size_t const n = generators[0].rows;
    check_generators(f, n, generators);
    std::map<fq_matrix, int> sign;
    std::vector<fq_matrix> queue{fq_matrix::identity(n)};
    sign[queue[0]] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        int const s = sign[queue[i]];
        for (std::size_t k = 0; k < generators.size(); ++k) {
            auto h = multiply(f, generators[k], queue[i]);
            int const t = s * twist.signs[k];
            auto [it, fresh] = sign.emplace(h, t);
            if (!fresh) {
                if (it->second != t)
                    return false;
                continue;
            }
            if (queue.size() >= max_order)
                throw budget_error("group closure exceeds " + std::to_string(max_order) +
                                   " elements");
            queue.push_back(std::move(h));
        }
    }
    return true;
}

std::size_t coinvariants_dim(linear_representation const & m,
                             std::optional<character_twist> const & twist)
{
    if (twist && twist->signs.size() != m.matrices.size())
        throw input_error("twist has " + std::to_string(twist->signs.size()) + " signs for " +
                          std::to_string(m.matrices.size()) + " generators");
    std::vector<matrix_entry> entries;
    std::size_t col = 0;
    for (std::size_t k = 0; k < m.matrices.size(); ++k) {
        auto const & a = m.matrices[k];
        if (a.rows() != m.dim || a.cols() != m.dim)
            throw input_error("action matrix " + std::to_string(k) + " is not " +
                              std::to_string(m.dim) + "x" + std::to_string(m.dim));
        int const eps = twist ? twist->signs[k] : 1;
        if (eps != 1 && eps != -1)
            throw input_error("twist signs must be +1 or -1");
        if (m.dim > 0 && determinant(a) == 0)
            throw input_error("action matrix " + std::to_string(k) + " is singular");
        for (std::size_t j = 0; j < m.dim; ++j) {
            for (std::size_t i = 0; i < m.dim; ++i) {
                rational v = eps * a.at(i, j);
                if (i == j)
                    v -= 1;
                if (v != 0)
                    entries.push_back({i, col, v});
            }
            ++col;
        }
    }
    auto relations = exact_matrix::from_entries(m.dim, col, entries);
    return m.dim - rank(relations);
}

rational_vector apartment_class(steinberg_module const & st, std::vector<fq_vector> const & frame)
{
    auto const & f = st.building.field;
    std::size_t const n = st.n();
    if (frame.size() != n)
        throw input_error("apartment_class: a frame needs exactly " + std::to_string(n) + " lines");
    fq_matrix stacked(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (frame[i].size() != n)
            throw input_error("apartment_class: line generator has wrong length");
        for (std::size_t j = 0; j < n; ++j)
            stacked(i, j) = frame[i][j];
    }
    if (rank(f, stacked) != n)
        throw input_error("apartment_class: the lines of the frame are dependent");

    rational_vector chain(st.chain_dim());
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        semisimplicial_set::simplex flag;
        std::vector<fq_vector> gens;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            gens.push_back(frame[sigma[k]]);
            auto v = st.building.vertex_of(span(f, n, gens));
            if (!v)
                throw verification_error("apartment_class: span of frame lines is not a vertex");
            flag.push_back(*v);
        }
        auto idx = st.building.complex.find(flag);
        if (!idx)
            throw verification_error("apartment_class: apartment flag is not a simplex");
        chain[*idx] += permutation_sign(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    if (!st.is_cycle(chain))
        throw verification_error("apartment_class: boundary of the apartment class is nonzero");
    return chain;
}

std::size_t apartment_span_rank(steinberg_module const & st, std::size_t budget)
{
    auto const & b = st.building;
    std::size_t const n = st.n();
    std::vector<fq_vector> lines;
    for (auto const & v : b.vertices)
        if (v.dim == 1)
            lines.push_back(basis_vector(v, 0));

    std::vector<rational_vector> classes;
    std::vector<std::size_t> pick(n);
    std::iota(pick.begin(), pick.end(), 0);
    std::size_t tried = 0;
    if (lines.size() < n)
        return 0;
    while (true) {
        if (++tried > budget)
            throw budget_error("apartment_span_rank: more than " + std::to_string(budget) +
                               " frames");
        fq_matrix stacked(n, n);
        std::vector<fq_vector> frame;
        for (std::size_t i = 0; i < n; ++i) {
            frame.push_back(lines[pick[i]]);
            for (std::size_t j = 0; j < n; ++j)
                stacked(i, j) = frame[i][j];
        }
        if (rank(b.field, stacked) == n)
            classes.push_back(st.coordinates(apartment_class(st, frame)));

        std::size_t i = n;
        while (i > 0 && pick[i - 1] == lines.size() - n + i - 1)
            --i;
        if (i == 0)
            break;
        ++pick[i - 1];
        for (std::size_t j = i; j < n; ++j)
            pick[j] = pick[j - 1] + 1;
    }
    if (classes.empty())
        return 0;
    return rank(exact_matrix::from_rows(st.dim(), classes));
}

int orientation_character_det(std::size_t n)
{
    if (n < 1)
        throw input_error("orientation_character_det: n must be at least 1");
    /* basis index of a_ij, i <= j */
    std::vector<std::vector<std::size_t>> index(n, std::vector<std::size_t>(n));
    std::size_t dim = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            index[i][j] = index[j][i] = dim++;

    std::vector<rational> e(n, rational(1));
    e[0] = -1;
    std::vector<matrix_entry> entries;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            /* e E_ij e^{-1} = e_i e_j^{-1} E_ij, then E_ij is reduced to a_ij */
            std::vector<rational_vector> x(n, rational_vector(n));
            x[i][j] = 1;
            rational_vector image(dim);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    rational v = e[r] * x[r][c] / e[c];
                    if (v != 0)
                        image[index[r][c]] += v;
                }
            for (std::size_t k = 0; k < dim; ++k)
                if (image[k] != 0)
                    entries.push_back({k, index[i][j], image[k]});
        }
    rational det = determinant(exact_matrix::from_entries(dim, dim, entries));
    if (det == 1)
        return 1;
    if (det == -1)
        return -1;
    throw verification_error("orientation character: determinant is not +1 or -1");
}

dualizing_type dualizing_module_type(std::size_t n, quadratic_order const & o)
{
    if (n < 2)
        throw input_error("dualizing_module_type: n must be at least 2");
    return (n % 2 == 0 && has_norm_minus_one_unit(o)) ? dualizing_type::steinberg_twisted
                                                      : dualizing_type::steinberg;
}

std::string to_string(dualizing_type t)
{
    return t == dualizing_type::steinberg ? "Steinberg" : "SteinbergTwisted";
}

namespace {

fq_matrix elementary(std::size_t n, std::size_t i, std::size_t j, finite_field::element a)
{
    auto m = fq_matrix::identity(n);
    m(i, j) = a;
    return m;
}

finite_field::element power(finite_field const & f, finite_field::element x, unsigned k)
{
    finite_field::element r = f.one();
    while (k-- > 0)
        r = f.mul(r, x);
    return r;
}

fq_matrix zeta_diagonal(finite_field const & f, std::size_t n)
{
    auto m = fq_matrix::identity(n);
    m(0, 0) = f.primitive_element();
    return m;
}

} // namespace

std::vector<fq_matrix> gl_generators(finite_field const & f, std::size_t n)
{
    if (n < 1)
        throw input_error("gl_generators: n must be at least 1");
    std::vector<fq_matrix> g;
    if (n >= 2)
        g.push_back(elementary(n, 0, 1, f.one()));
    if (f.order() > 2)
        g.push_back(zeta_diagonal(f, n));
    if (n >= 3) {
        fq_matrix cycle(n, n);
        for (std::size_t i = 0; i < n; ++i)
            cycle((i + 1) % n, i) = f.one();
        g.push_back(cycle);
    }
    if (n >= 2) {
        auto t = fq_matrix::identity(n);
        t(0, 0) = t(1, 1) = f.zero();
        t(0, 1) = t(1, 0) = f.one();
        g.push_back(t);
    }
    if (g.empty())
        g.push_back(fq_matrix::identity(n));
    return g;
}

std::vector<fq_matrix> sl_generators(finite_field const & f, std::size_t n)
{
    std::vector<fq_matrix> g;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                for (unsigned k = 0; k < f.degree(); ++k)
                    g.push_back(elementary(n, i, j, power(f, f.primitive_element(), k)));
    if (g.empty())
        g.push_back(fq_matrix::identity(n));
    return g;
}

std::vector<fq_matrix> gl_generators_elementary(finite_field const & f, std::size_t n)
{
    auto g = sl_generators(f, n);
    if (f.order() > 2)
        g.push_back(zeta_diagonal(f, n));
    return g;
}

std::vector<fq_matrix> gamma2_generators(finite_field const & f)
{
    auto make = [&](long a, long b, long c, long d) {
        fq_matrix m(2, 2);
        m(0, 0) = f.from_integer(a);
        m(0, 1) = f.from_integer(b);
        m(1, 0) = f.from_integer(c);
        m(1, 1) = f.from_integer(d);
        return m;
    };
    return {make(1, 2, 0, 1), make(1, 0, 2, 1), make(-1, 0, 0, 1), make(1, 0, 0, -1)};
}

} // namespace gldual
