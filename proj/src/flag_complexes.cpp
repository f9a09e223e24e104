#include "gldual/flag_complexes.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "gldual/errors.hpp"

namespace gldual {

namespace {

unsigned long residue(integer const & x, long m)
{
    return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(m));
}

integer sup_norm(integer_vector const & v)
{
    integer h = 0;
    for (auto const & x : v)
        if (abs(x) > h)
            h = abs(x);
    return h;
}

nlohmann::json vector_json(integer_vector const & v)
{
    auto j = nlohmann::json::array();
    for (auto const & x : v)
        j.push_back(x.get_str());
    return j;
}

/* Integer coordinates of v in the given basis of a saturated sublattice. */
std::optional<integer_vector> coordinates_in(integer_matrix const & basis, integer_vector const & v,
                                             std::size_t n)
{
    exact_matrix a = to_exact(basis, n).transpose();
    auto x = solve(a, rational_vector(v.begin(), v.end()));
    if (!x)
        return std::nullopt;
    integer_vector out;
    for (auto const & c : *x) {
        if (c.get_den() != 1)
            return std::nullopt;
        out.push_back(c.get_num());
    }
    return out;
}

integer_matrix combine(integer_matrix const & coeffs, integer_matrix const & basis, std::size_t n)
{
    integer_matrix out;
    for (auto const & c : coeffs) {
        integer_vector v(n);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                v[j] += c[i] * basis[i][j];
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

void validate_flag(integer_flag const & flag)
{
    std::size_t prev_rank = 0;
    for (std::size_t i = 0; i < flag.subgroups.size(); ++i) {
        auto const & f = flag.subgroups[i];
        std::string const where = "flag member " + std::to_string(i);
        if (f.empty())
            throw input_error(where + " is zero");
        if (rank(to_exact(f, flag.n)) != f.size())
            throw input_error(where + ": basis rows are dependent");
        if (f.size() >= flag.n)
            throw input_error(where + " is not a proper subgroup");
        if (!spans_direct_summand(f, flag.n))
            throw input_error(where + " is not a direct summand (an invariant factor exceeds 1)");
        if (i > 0) {
            if (f.size() <= prev_rank)
                throw input_error(where + ": inclusion is not strict");
            for (auto const & v : flag.subgroups[i - 1])
                if (!coordinates_in(f, v, flag.n))
                    throw input_error(where + " does not contain the previous member");
        }
        prev_rank = f.size();
    }
}

std::vector<integer_matrix> projective_splitting(integer_flag const & flag)
{
    validate_flag(flag);
    std::size_t const n = flag.n;
    integer_matrix whole(n, integer_vector(n));
    for (std::size_t i = 0; i < n; ++i)
        whole[i][i] = 1;

    std::vector<integer_matrix> parts;
    integer_matrix so_far;
    for (std::size_t i = 0; i <= flag.subgroups.size(); ++i) {
        integer_matrix const & target = i < flag.subgroups.size() ? flag.subgroups[i] : whole;
        integer_matrix coords;
        for (auto const & v : so_far) {
            auto c = coordinates_in(target, v, n);
            if (!c)
                throw verification_error("projective_splitting: flag member not contained in the next");
            coords.push_back(std::move(*c));
        }
        auto e = unimodular_completion(coords, target.size());
        if (!e)
            throw verification_error("projective_splitting: no complement found");
        auto part = combine(*e, target, n);
        so_far.insert(so_far.end(), part.begin(), part.end());
        parts.push_back(std::move(part));
    }

    if (!is_unimodular(so_far))
        throw verification_error("projective_splitting: parts do not form a basis of Z^n");
    std::size_t count = 0;
    for (std::size_t i = 0; i < flag.subgroups.size(); ++i) {
        count += parts[i].size();
        if (count != flag.subgroups[i].size())
            throw verification_error("projective_splitting: ranks do not add up");
        for (std::size_t j = 0; j <= i; ++j)
            for (auto const & v : parts[j])
                if (!coordinates_in(flag.subgroups[i], v, n))
                    throw verification_error("projective_splitting: part leaves its flag member");
    }
    return parts;
}

lines_complex lines_complex_fq(std::size_t n, unsigned q, std::size_t budget)
{
    if (n < 1)
        throw input_error("lines_complex_fq: n must be at least 1");
    finite_field f(q);
    unsigned long long nlines = gaussian_binomial(static_cast<unsigned>(n), 1, q);
    if (nlines > budget)
        throw budget_error("lines_complex_fq: " + std::to_string(nlines) +
                           " lines exceed budget " + std::to_string(budget));
    lines_complex out{f, n, all_subspaces(f, n, 1), {}};
    std::vector<fq_vector> gens;
    for (auto const & l : out.lines)
        gens.push_back(basis_vector(l, 0));

    std::vector<std::vector<semisimplicial_set::simplex>> simplices(n);
    std::size_t total = 0;
    std::vector<std::size_t> seq;
    auto extend = [&](auto & self) -> void {
        if (++total > budget)
            throw budget_error("lines_complex_fq: simplex count exceeds budget " +
                               std::to_string(budget));
        simplices[seq.size() - 1].push_back(seq);
        if (seq.size() == n)
            return;
        fq_matrix m(seq.size() + 1, n);
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) = gens[seq[i]][j];
        for (std::size_t l = 0; l < gens.size(); ++l) {
            if (std::find(seq.begin(), seq.end(), l) != seq.end())
                continue;
            for (std::size_t j = 0; j < n; ++j)
                m(seq.size(), j) = gens[l][j];
            if (rank(f, m) != seq.size() + 1)
                continue;
            seq.push_back(l);
            self(self);
            seq.pop_back();
        }
    };
    for (std::size_t v = 0; v < gens.size(); ++v) {
        seq.assign(1, v);
        extend(extend);
    }
    out.complex = semisimplicial_set::from_ordered_simplices(std::move(simplices));
    return out;
}

std::optional<integer_matrix> b_complex_witness(integer_matrix const & vectors, std::size_t n,
                                                long m, b_variant variant)
{
    if (m < 2)
        throw input_error("b_complex: modulus must be at least 2");
    std::size_t const k = vectors.size();
    if (k > n)
        return std::nullopt;
    for (auto const & v : vectors)
        if (v.size() != n)
            throw input_error("b_complex: vector has wrong length");

    std::size_t ones = 0;
    std::size_t pivot = k;
    for (std::size_t i = 0; i < k; ++i) {
        auto r = residue(vectors[i][n - 1], m);
        if (r > 1)
            return std::nullopt;
        if (r == 1) {
            ++ones;
            if (pivot == k)
                pivot = i;
        }
    }
    if (variant == b_variant::exact_one && ones > 1)
        return std::nullopt;

    auto completion = unimodular_completion(vectors, n);
    if (!completion)
        return std::nullopt;
    integer_matrix e = std::move(*completion);
    auto last = [&](integer_vector const & v) -> integer const & { return v[n - 1]; };

    if (ones > 0) {
        for (auto & row : e) {
            integer c = residue(last(row), m);
            for (std::size_t j = 0; j < n; ++j)
                row[j] -= c * vectors[pivot][j];
        }
    } else if (k == n) {
        return std::nullopt;
    } else if (n - k == 1) {
        auto d = residue(last(e[0]), m);
        if (d == static_cast<unsigned long>(m - 1))
            for (auto & x : e[0])
                x = -x;
        else if (d != 1)
            return std::nullopt;
    } else {
        integer g, x, y;
        for (std::size_t j = 1; j < e.size(); ++j) {
            integer const a = last(e[0]), b = last(e[j]);
            if (b == 0)
                continue;
            mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            integer const ag = a / g, bg = b / g;
            for (std::size_t t = 0; t < n; ++t) {
                integer r0 = e[0][t], rj = e[j][t];
                e[0][t] = x * r0 + y * rj;
                e[j][t] = -bg * r0 + ag * rj;
            }
        }
        integer const gl = last(e[0]);
        integer const mm = m;
        integer a;
        if (mpz_invert(a.get_mpz_t(), gl.get_mpz_t(), mm.get_mpz_t()) == 0)
            return std::nullopt;
        integer h, t, u;
        mpz_gcdext(h.get_mpz_t(), t.get_mpz_t(), u.get_mpz_t(), a.get_mpz_t(), mm.get_mpz_t());
        integer const s = -u;
        integer_vector e1(n), e2(n);
        for (std::size_t c = 0; c < n; ++c) {
            e1[c] = a * e[0][c] + mm * e[1][c];
            e2[c] = s * e[0][c] + t * e[1][c];
        }
        integer const sg = s * gl;
        for (std::size_t c = 0; c < n; ++c)
            e2[c] -= sg * e1[c];
        e[0] = std::move(e1);
        e[1] = std::move(e2);
    }

    integer_matrix basis = vectors;
    basis.insert(basis.end(), e.begin(), e.end());
    return basis;
}

bool is_b_witness(integer_matrix const & vectors, integer_matrix const & basis, long m,
                  b_variant variant)
{
    std::size_t const n = basis.size();
    if (vectors.size() > n || !is_unimodular(basis))
        return false;
    for (std::size_t i = 0; i < vectors.size(); ++i)
        if (basis[i] != vectors[i])
            return false;
    std::size_t ones = 0;
    for (auto const & v : basis) {
        auto r = residue(v[n - 1], m);
        if (r > 1)
            return false;
        ones += r;
    }
    return variant == b_variant::relaxed ? ones >= 1 : ones == 1;
}

std::optional<std::size_t> truncated_b_complex::vertex_of(integer_vector const & v) const
{
    auto it = vertex_index.find(v);
    if (it == vertex_index.end())
        return std::nullopt;
    return it->second;
}

truncated_b_complex b_complex_truncated(std::size_t n, long m, long height, b_variant variant,
                                        std::size_t budget)
{
    if (n < 1)
        throw input_error("b_complex_truncated: n must be at least 1");
    if (m < 2)
        throw input_error("b_complex_truncated: m must be at least 2");
    if (height < 1)
        throw input_error("b_complex_truncated: height must be at least 1 "
                          "(height 0 leaves no nonzero vectors)");
    truncated_b_complex x;
    x.n = n;
    x.m = m;
    x.height = height;
    x.variant = variant;

    std::vector<std::vector<semisimplicial_set::simplex>> simplices(n);
    x.witnesses.assign(n, {});
    std::size_t total = 0;
    auto count = [&]() {
        if (++total > budget)
            throw budget_error("b_complex_truncated: simplex count exceeds budget " +
                               std::to_string(budget));
    };
    auto certify = [&](integer_matrix const & vs) -> std::optional<integer_matrix> {
        auto w = b_complex_witness(vs, n, m, variant);
        if (!w)
            return std::nullopt;
        if (!is_b_witness(vs, *w, m, variant)) {
            ++x.witnesses_failed;
            return std::nullopt;
        }
        return w;
    };

    integer_vector v(n, integer(-height));
    while (true) {
        bool nonzero = std::any_of(v.begin(), v.end(), [](integer const & c) { return c != 0; });
        if (nonzero) {
            if (auto w = certify({v})) {
                count();
                x.vertex_index.emplace(v, x.vertices.size());
                simplices[0].push_back({x.vertices.size()});
                x.witnesses[0].push_back(std::move(*w));
                x.vertices.push_back(v);
            }
        }
        std::size_t i = n;
        while (i > 0 && v[i - 1] == height) {
            v[i - 1] = -height;
            --i;
        }
        if (i == 0)
            break;
        ++v[i - 1];
    }

    std::vector<std::size_t> seq;
    integer_matrix vs;
    auto extend = [&](auto & self) -> void {
        if (seq.size() == n)
            return;
        for (std::size_t u = 0; u < x.vertices.size(); ++u) {
            if (std::find(seq.begin(), seq.end(), u) != seq.end())
                continue;
            vs.push_back(x.vertices[u]);
            if (auto w = certify(vs)) {
                count();
                seq.push_back(u);
                simplices[seq.size() - 1].push_back(seq);
                x.witnesses[seq.size() - 1].push_back(std::move(*w));
                self(self);
                seq.pop_back();
            }
            vs.pop_back();
        }
    };
    for (std::size_t u = 0; u < x.vertices.size(); ++u) {
        seq.assign(1, u);
        vs.assign(1, x.vertices[u]);
        extend(extend);
    }

    /* DFS order mixes dimensions; sort each dimension so the witnesses follow along */
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<std::size_t> order(simplices[k].size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return simplices[k][a] < simplices[k][b]; });
        std::vector<semisimplicial_set::simplex> s;
        std::vector<integer_matrix> w;
        for (auto i : order) {
            s.push_back(std::move(simplices[k][i]));
            w.push_back(std::move(x.witnesses[k][i]));
        }
        simplices[k] = std::move(s);
        x.witnesses[k] = std::move(w);
    }
    while (!x.witnesses.empty() && x.witnesses.back().empty())
        x.witnesses.pop_back();
    x.complex = semisimplicial_set::from_ordered_simplices(std::move(simplices));
    return x;
}

homology_ranks connectivity_probe(semisimplicial_set const & x, int k_max)
{
    auto h = homology(make_chain_complex(x, true));
    homology_ranks out;
    out.lowest_degree = -1;
    for (int k = -1; k <= k_max; ++k)
        out.ranks.push_back(h.at(k));
    return out;
}

probe_report probe_b_complex(std::size_t n, long m, long height, std::size_t budget)
{
    if (height < 1)
        throw input_error("probe: height must be at least 1");
    probe_report r{n, m, height, {}, std::nullopt, true};
    int const k_max = static_cast<int>(n) - 2;
    for (long h = 1; h <= height; ++h) {
        auto x = b_complex_truncated(n, m, h, b_variant::exact_one, budget);
        auto ranks = connectivity_probe(x.complex, k_max);
        if (!r.trials.empty()) {
            auto const & prev = r.trials.back().ranks;
            for (int k = -1; k <= k_max; ++k)
                if (ranks.at(k) > prev.at(k))
                    r.monotone_nonincreasing = false;
        }
        bool connected = std::all_of(ranks.ranks.begin(), ranks.ranks.end(),
                                     [](std::size_t v) { return v == 0; });
        if (connected && !r.minimal_connected_height)
            r.minimal_connected_height = h;
        r.trials.push_back({h, std::move(ranks), x.complex.total(), x.witnesses_failed});
    }
    return r;
}

nlohmann::json probe_report::to_json() const
{
    std::size_t failed = 0;
    auto trials_json = nlohmann::json::array();
    for (auto const & t : trials) {
        failed += t.witnesses_failed;
        trials_json.push_back({{"H", t.height},
                               {"ranks", t.ranks.ranks},
                               {"simplices", t.simplices},
                               {"witnesses_failed", t.witnesses_failed}});
    }
    nlohmann::json j = {{"kind", "probe"},
                        {"n", n},
                        {"m", m},
                        {"H", height},
                        {"ranks_lowest_degree", -1},
                        {"ranks", trials.empty() ? nlohmann::json::array()
                                                 : nlohmann::json(trials.back().ranks.ranks)},
                        {"witnesses_failed", failed},
                        {"minimal_connected_H", nullptr},
                        {"monotone_nonincreasing", monotone_nonincreasing},
                        {"trials", trials_json}};
    if (minimal_connected_height)
        j["minimal_connected_H"] = *minimal_connected_height;
    return j;
}

nlohmann::json retraction_report::to_json() const
{
    auto m = nlohmann::json::array();
    for (auto const & e : map)
        m.push_back({{"v", vector_json(e.vertex)}, {"rho", vector_json(e.image)}});
    return {{"w", vector_json(w)},
            {"link_vertices", map.size()},
            {"moved", moved},
            {"images_not_zero", images_not_zero},
            {"not_idempotent", not_idempotent},
            {"out_of_height", out_of_height},
            {"simplices_checked", simplices_checked},
            {"simplices_failed", simplices_failed},
            {"passed", passed()},
            {"map", m}};
}

retraction_report case1_retraction(truncated_b_complex const & x, integer_vector const & w)
{
    std::size_t const n = x.n;
    long const m = x.m;
    if (!x.vertex_of(w))
        throw input_error("case1_retraction: w is not a vertex of the complex");
    if (residue(w[n - 1], m) != 1)
        throw input_error("case1_retraction: last coordinate of w is not 1 mod m");

    auto in_relaxed = [&](integer_matrix const & vs) {
        auto b = b_complex_witness(vs, n, m, b_variant::relaxed);
        return b && is_b_witness(vs, *b, m, b_variant::relaxed);
    };
    auto in_exact = [&](integer_matrix const & vs) {
        auto b = b_complex_witness(vs, n, m, b_variant::exact_one);
        return b && is_b_witness(vs, *b, m, b_variant::exact_one);
    };
    auto rho = [&](integer_vector const & v) {
        if (residue(v[n - 1], m) != 1)
            return v;
        integer_vector r(n);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = v[i] - w[i];
        return r;
    };

    retraction_report rep;
    rep.w = w;
    std::vector<integer_vector> link;
    for (auto const & v : x.vertices)
        if (v != w && in_relaxed({w, v}))
            link.push_back(v);

    for (auto const & v : link) {
        auto img = rho(v);
        if (img != v)
            ++rep.moved;
        if (residue(img[n - 1], m) != 0)
            ++rep.images_not_zero;
        if (rho(img) != img)
            ++rep.not_idempotent;
        if (sup_norm(img) > x.height)
            ++rep.out_of_height;
        rep.map.push_back({v, std::move(img)});
    }

    integer_matrix seq{w};
    auto visit = [&](auto & self) -> void {
        if (seq.size() == n)
            return;
        for (auto const & v : link) {
            if (std::find(seq.begin(), seq.end(), v) != seq.end())
                continue;
            seq.push_back(v);
            if (in_relaxed(seq)) {
                ++rep.simplices_checked;
                integer_matrix image{w};
                std::set<integer_vector> distinct;
                for (std::size_t i = 1; i < seq.size(); ++i) {
                    image.push_back(rho(seq[i]));
                    distinct.insert(image.back());
                }
                if (distinct.size() != seq.size() - 1 || !in_exact(image))
                    ++rep.simplices_failed;
                self(self);
            }
            seq.pop_back();
        }
    };
    visit(visit);
    return rep;
}

} // namespace gldual
