#include "gldual/exact_linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gldual/errors.hpp"

namespace gldual {

exact_matrix::exact_matrix(std::size_t rows, std::size_t cols)
    : nrows(rows), ncols(cols), data(rows)
{
}

exact_matrix exact_matrix::from_entries(std::size_t rows, std::size_t cols,
                                        std::vector<matrix_entry> const & entries)
{
    exact_matrix m(rows, cols);
    for (auto const & e : entries) {
        if (e.row >= rows || e.col >= cols)
            throw input_error("matrix entry (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) + ") out of bounds");
        if (e.value == 0)
            continue;
        m.data[e.row].emplace_back(e.col, e.value);
    }
    for (auto & r : m.data) {
        std::sort(r.begin(), r.end(),
                  [](auto const & x, auto const & y) { return x.first < y.first; });
        for (std::size_t i = 1; i < r.size(); ++i)
            if (r[i].first == r[i - 1].first)
                throw input_error("duplicate matrix entry at column " +
                                  std::to_string(r[i].first));
    }
    return m;
}

exact_matrix exact_matrix::from_dense(std::size_t rows, std::size_t cols,
                                      std::vector<rational_vector> const & dense)
{
    if (dense.size() != rows)
        throw input_error("dense matrix row count mismatch");
    return from_rows(cols, dense);
}

exact_matrix exact_matrix::from_rows(std::size_t cols,
                                     std::vector<rational_vector> const & rows)
{
    exact_matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw input_error("row " + std::to_string(i) + " has length " +
                              std::to_string(rows[i].size()) + ", expected " +
                              std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j)
            if (rows[i][j] != 0)
                m.data[i].emplace_back(j, rows[i][j]);
    }
    return m;
}

exact_matrix exact_matrix::from_columns(std::size_t rows,
                                        std::vector<rational_vector> const & cols)
{
    return from_rows(rows, cols).transpose();
}

exact_matrix exact_matrix::identity(std::size_t n)
{
    exact_matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.data[i].emplace_back(i, rational(1));
    return m;
}

std::size_t exact_matrix::nonzeros() const
{
    std::size_t n = 0;
    for (auto const & r : data)
        n += r.size();
    return n;
}

rational exact_matrix::at(std::size_t r, std::size_t c) const
{
    auto const & row = data.at(r);
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](auto const & e, std::size_t col) { return e.first < col; });
    if (it != row.end() && it->first == c)
        return it->second;
    return rational(0);
}

void exact_matrix::set(std::size_t r, std::size_t c, rational const & value)
{
    if (r >= nrows || c >= ncols)
        throw input_error("matrix index out of bounds");
    auto & row = data[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](auto const & e, std::size_t col) { return e.first < col; });
    bool present = it != row.end() && it->first == c;
    if (value == 0) {
        if (present)
            row.erase(it);
    } else if (present) {
        it->second = value;
    } else {
        row.emplace(it, c, value);
    }
}

std::vector<matrix_entry> exact_matrix::entries() const
{
    std::vector<matrix_entry> out;
    for (std::size_t i = 0; i < nrows; ++i)
        for (auto const & [j, v] : data[i])
            out.push_back({i, j, v});
    return out;
}

std::vector<rational_vector> exact_matrix::to_dense() const
{
    std::vector<rational_vector> out(nrows, rational_vector(ncols));
    for (std::size_t i = 0; i < nrows; ++i)
        for (auto const & [j, v] : data[i])
            out[i][j] = v;
    return out;
}

exact_matrix exact_matrix::transpose() const
{
    exact_matrix t(ncols, nrows);
    for (std::size_t i = 0; i < nrows; ++i)
        for (auto const & [j, v] : data[i])
            t.data[j].emplace_back(i, v);
    return t;
}

bool exact_matrix::is_integral() const
{
    for (auto const & r : data)
        for (auto const & e : r)
            if (e.second.get_den() != 1)
                return false;
    return true;
}

rational_vector exact_matrix::apply(rational_vector const & v) const
{
    if (v.size() != ncols)
        throw input_error("vector length does not match matrix column count");
    rational_vector out(nrows);
    for (std::size_t i = 0; i < nrows; ++i) {
        rational acc = 0;
        for (auto const & [j, x] : data[i])
            acc += x * v[j];
        out[i] = acc;
    }
    return out;
}

exact_matrix operator*(exact_matrix const & a, exact_matrix const & b)
{
    if (a.ncols != b.nrows)
        throw input_error("matrix product shape mismatch");
    exact_matrix c(a.nrows, b.ncols);
    std::vector<rational> acc(b.ncols);
    std::vector<char> touched(b.ncols, 0);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < a.nrows; ++i) {
        cols.clear();
        for (auto const & [k, x] : a.data[i])
            for (auto const & [j, y] : b.data[k]) {
                if (!touched[j]) {
                    touched[j] = 1;
                    acc[j] = 0;
                    cols.push_back(j);
                }
                acc[j] += x * y;
            }
        std::sort(cols.begin(), cols.end());
        for (auto j : cols) {
            if (acc[j] != 0)
                c.data[i].emplace_back(j, acc[j]);
            touched[j] = 0;
        }
    }
    return c;
}

bool operator==(exact_matrix const & a, exact_matrix const & b)
{
    return a.nrows == b.nrows && a.ncols == b.ncols && a.data == b.data;
}

bool is_zero(exact_matrix const & m)
{
    return m.nonzeros() == 0;
}

namespace {

using int_row = std::vector<std::pair<std::size_t, integer>>;

int_row to_integer_row(exact_matrix::sparse_row const & r)
{
    integer l = 1;
    for (auto const & e : r)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
    int_row out;
    out.reserve(r.size());
    for (auto const & [j, v] : r) {
        integer x = v.get_num() * (l / v.get_den());
        out.emplace_back(j, std::move(x));
    }
    return out;
}

/* Divide by the content and make the leading entry positive. */
void normalize(int_row & r)
{
    if (r.empty())
        return;
    integer g = 0;
    for (auto const & e : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1)
            break;
    }
    bool negate = r.front().second < 0;
    if (g != 1 || negate) {
        if (negate)
            g = -g;
        for (auto & e : r)
            mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
    }
}

/* value of r at column c (zero when absent) */
integer const * lookup(int_row const & r, std::size_t c)
{
    auto it = std::lower_bound(r.begin(), r.end(), c,
                               [](auto const & e, std::size_t col) { return e.first < col; });
    if (it != r.end() && it->first == c)
        return &it->second;
    return nullptr;
}

/* r <- p*r - a*s, with a = r[c], p = s[c]; entry c cancels. */
int_row combine(int_row const & r, int_row const & s, integer const & p, integer const & a)
{
    int_row out;
    out.reserve(r.size() + s.size());
    std::size_t i = 0, j = 0;
    integer t;
    while (i < r.size() || j < s.size()) {
        if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
            out.emplace_back(r[i].first, p * r[i].second);
            ++i;
        } else if (i == r.size() || s[j].first < r[i].first) {
            out.emplace_back(s[j].first, -a * s[j].second);
            ++j;
        } else {
            t = p * r[i].second - a * s[j].second;
            if (t != 0)
                out.emplace_back(r[i].first, t);
            ++i;
            ++j;
        }
    }
    return out;
}

/* Dense counterpart of int_row used once fill-in passes the threshold. */
using dense_row = std::vector<integer>;

void normalize(dense_row & r)
{
    integer g = 0;
    std::size_t lead = r.size();
    for (std::size_t k = 0; k < r.size(); ++k)
        if (r[k] != 0) {
            if (lead == r.size())
                lead = k;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[k].get_mpz_t());
        }
    if (lead == r.size())
        return;
    if (r[lead] < 0)
        g = -g;
    if (g != 1)
        for (auto & x : r)
            if (x != 0)
                mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

struct pivot_row {
    std::size_t col;
    int_row row;
};

/*
 * Fraction-free forward elimination over the integers (rows are scaled by
 * their denominators first, which preserves the row space).  Pivot row for a
 * column: fewest nonzeros, ties to the lowest index.  Switches to a dense
 * representation once the active block is more than half full.
 */
std::vector<pivot_row> forward_eliminate(exact_matrix const & m, std::size_t ncols)
{
    std::vector<int_row> active;
    active.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        int_row r = to_integer_row(m.row(i));
        normalize(r);
        if (!r.empty())
            active.push_back(std::move(r));
    }

    std::vector<pivot_row> pivots;
    std::size_t c = 0;
    for (; c < ncols && !active.empty(); ++c) {
        std::size_t best = active.size();
        for (std::size_t i = 0; i < active.size(); ++i)
            if (active[i].front().first == c &&
                (best == active.size() || active[i].size() < active[best].size()))
                best = i;
        if (best == active.size())
            continue;
        int_row piv = std::move(active[best]);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
        integer const p = piv.front().second;
        std::vector<int_row> next;
        next.reserve(active.size());
        for (auto & r : active) {
            if (r.front().first == c) {
                integer a = r.front().second;
                int_row t = combine(r, piv, p, a);
                normalize(t);
                if (!t.empty())
                    next.push_back(std::move(t));
            } else {
                next.push_back(std::move(r));
            }
        }
        active = std::move(next);
        pivots.push_back({c, std::move(piv)});

        std::size_t remaining = ncols - c - 1;
        if (active.size() >= 8 && remaining >= 8) {
            std::size_t nnz = 0;
            for (auto const & r : active)
                nnz += r.size();
            if (2 * nnz > active.size() * remaining) {
                ++c;
                break;
            }
        }
    }

    if (active.empty() || c >= ncols)
        return pivots;

    /* dense phase over columns [c, ncols) */
    std::size_t const base = c;
    std::size_t const width = ncols - base;
    std::vector<dense_row> dense;
    dense.reserve(active.size());
    for (auto const & r : active) {
        dense_row d(width);
        for (auto const & [j, v] : r)
            d[j - base] = v;
        dense.push_back(std::move(d));
    }
    for (std::size_t k = 0; k < width && !dense.empty(); ++k) {
        std::size_t best = dense.size();
        std::size_t best_count = 0;
        for (std::size_t i = 0; i < dense.size(); ++i) {
            if (dense[i][k] == 0)
                continue;
            std::size_t cnt = 0;
            for (std::size_t t = k; t < width; ++t)
                cnt += dense[i][t] != 0;
            if (best == dense.size() || cnt < best_count) {
                best = i;
                best_count = cnt;
            }
        }
        if (best == dense.size())
            continue;
        dense_row piv = std::move(dense[best]);
        dense.erase(dense.begin() + static_cast<std::ptrdiff_t>(best));
        integer const p = piv[k];
        std::vector<dense_row> next;
        next.reserve(dense.size());
        for (auto & r : dense) {
            if (r[k] != 0) {
                integer a = r[k];
                for (std::size_t t = k; t < width; ++t)
                    r[t] = p * r[t] - a * piv[t];
                normalize(r);
                bool nonzero = false;
                for (std::size_t t = k + 1; t < width && !nonzero; ++t)
                    nonzero = r[t] != 0;
                if (!nonzero)
                    continue;
            }
            next.push_back(std::move(r));
        }
        dense = std::move(next);
        int_row sparse;
        for (std::size_t t = k; t < width; ++t)
            if (piv[t] != 0)
                sparse.emplace_back(base + t, piv[t]);
        pivots.push_back({base + k, std::move(sparse)});
    }
    return pivots;
}

/* Clear every pivot column above its pivot. */
void back_substitute(std::vector<pivot_row> & pivots)
{
    for (std::size_t i = pivots.size(); i-- > 0;) {
        std::size_t const c = pivots[i].col;
        integer const p = pivots[i].row.front().second;
        for (std::size_t j = 0; j < i; ++j) {
            integer const * a = lookup(pivots[j].row, c);
            if (a == nullptr)
                continue;
            integer av = *a;
            int_row t = combine(pivots[j].row, pivots[i].row, p, av);
            normalize(t);
            pivots[j].row = std::move(t);
        }
    }
}

} // namespace

rref_result reduced_row_echelon(exact_matrix const & m)
{
    auto pivots = forward_eliminate(m, m.cols());
    back_substitute(pivots);
    rref_result out{exact_matrix(pivots.size(), m.cols()), {}};
    std::vector<matrix_entry> entries;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        out.pivot_cols.push_back(pivots[i].col);
        integer const & p = pivots[i].row.front().second;
        for (auto const & [j, v] : pivots[i].row) {
            rational q(v, p);
            q.canonicalize();
            entries.push_back({i, j, q});
        }
    }
    out.reduced = exact_matrix::from_entries(pivots.size(), m.cols(), entries);
    return out;
}

std::size_t rank(exact_matrix const & m)
{
    return forward_eliminate(m, m.cols()).size();
}

std::vector<std::size_t> kernel_free_columns(exact_matrix const & m)
{
    auto pivots = forward_eliminate(m, m.cols());
    std::vector<char> is_pivot(m.cols(), 0);
    for (auto const & p : pivots)
        is_pivot[p.col] = 1;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j])
            free.push_back(j);
    return free;
}

std::vector<rational_vector> kernel_basis(exact_matrix const & m)
{
    auto r = reduced_row_echelon(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (auto c : r.pivot_cols)
        is_pivot[c] = 1;
    std::vector<rational_vector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        rational_vector v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < r.pivot_cols.size(); ++i) {
            rational x = r.reduced.at(i, f);
            if (x != 0)
                v[r.pivot_cols[i]] = -x;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<integer> smith_normal_form(exact_matrix const & m)
{
    if (!m.is_integral())
        throw input_error("smith_normal_form requires integer entries");
    std::size_t const rows = m.rows(), cols = m.cols();
    std::vector<std::vector<integer>> a(rows, std::vector<integer>(cols));
    for (auto const & e : m.entries())
        a[e.row][e.col] = e.value.get_num();

    auto find_min = [&](std::size_t t, std::size_t & pi, std::size_t & pj) {
        bool found = false;
        integer best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (!found || abs(a[i][j]) < best)) {
                    best = abs(a[i][j]);
                    pi = i;
                    pj = j;
                    found = true;
                }
        return found;
    };
    auto move_to = [&](std::size_t t, std::size_t pi, std::size_t pj) {
        std::swap(a[t], a[pi]);
        if (pj != t)
            for (auto & r : a)
                std::swap(r[t], r[pj]);
    };

    std::vector<integer> factors;
    std::size_t const limit = std::min(rows, cols);
    integer q;
    for (std::size_t t = 0; t < limit; ++t) {
        std::size_t pi = 0, pj = 0;
        if (!find_min(t, pi, pj))
            break;
        move_to(t, pi, pj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0)
                    continue;
                mpz_tdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t j = t; j < cols; ++j)
                    a[i][j] -= q * a[t][j];
                clean = clean && a[i][t] == 0;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0)
                    continue;
                mpz_tdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t i = t; i < rows; ++i)
                    a[i][j] -= q * a[i][t];
                clean = clean && a[t][j] == 0;
            }
            if (clean) {
                std::size_t bad_row = rows;
                for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
                    for (std::size_t j = t + 1; j < cols; ++j)
                        if (a[i][j] % a[t][t] != 0) {
                            bad_row = i;
                            break;
                        }
                if (bad_row == rows)
                    break;
                for (std::size_t j = t; j < cols; ++j)
                    a[t][j] += a[bad_row][j];
            }
            /* a remainder survived: restart with the smallest entry in the block */
            find_min(t, pi, pj);
            move_to(t, pi, pj);
        }
        factors.push_back(abs(a[t][t]));
    }
    return factors;
}

std::size_t quotient_dim(std::vector<rational_vector> const & span_vectors,
                         std::vector<rational_vector> const & sub_vectors)
{
    std::size_t len = 0;
    bool have_len = false;
    for (auto const * list : {&span_vectors, &sub_vectors})
        for (auto const & v : *list) {
            if (have_len && v.size() != len)
                throw input_error("quotient_dim: vectors of unequal length");
            len = v.size();
            have_len = true;
        }
    std::vector<rational_vector> all = span_vectors;
    all.insert(all.end(), sub_vectors.begin(), sub_vectors.end());
    std::size_t r_span = rank(exact_matrix::from_rows(len, span_vectors));
    std::size_t r_all = rank(exact_matrix::from_rows(len, all));
    if (r_all != r_span)
        throw input_error("quotient_dim: a sub vector lies outside the ambient span");
    return r_span - rank(exact_matrix::from_rows(len, sub_vectors));
}

rational determinant(exact_matrix const & m)
{
    if (m.rows() != m.cols())
        throw input_error("determinant of a non-square matrix");
    std::size_t const n = m.rows();
    auto a = m.to_dense();
    rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != k) {
            std::swap(a[p], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0)
                continue;
            rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j)
                a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

std::optional<rational_vector> solve(exact_matrix const & m, rational_vector const & b)
{
    if (b.size() != m.rows())
        throw input_error("solve: right-hand side length mismatch");
    std::vector<matrix_entry> entries = m.entries();
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] != 0)
            entries.push_back({i, m.cols(), b[i]});
    auto aug = exact_matrix::from_entries(m.rows(), m.cols() + 1, entries);
    auto r = reduced_row_echelon(aug);
    rational_vector x(m.cols());
    for (std::size_t i = 0; i < r.pivot_cols.size(); ++i) {
        if (r.pivot_cols[i] == m.cols())
            return std::nullopt;
        x[r.pivot_cols[i]] = r.reduced.at(i, m.cols());
    }
    return x;
}

rational parse_rational(std::string const & s)
{
    rational q;
    if (s.empty() || q.set_str(s, 10) != 0)
        throw input_error("malformed rational '" + s + "'");
    if (q.get_den() == 0)
        throw input_error("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

nlohmann::json to_json(exact_matrix const & m)
{
    nlohmann::json entries = nlohmann::json::array();
    for (auto const & e : m.entries())
        entries.push_back({e.row, e.col, e.value.get_str()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

exact_matrix matrix_from_json(nlohmann::json const & j)
{
    try {
        std::size_t rows = j.at("rows").get<std::size_t>();
        std::size_t cols = j.at("cols").get<std::size_t>();
        std::vector<matrix_entry> entries;
        for (auto const & e : j.at("entries")) {
            if (!e.is_array() || e.size() != 3)
                throw input_error("matrix entry must be [row, col, value]");
            rational v = e[2].is_string() ? parse_rational(e[2].get<std::string>())
                                          : rational(e[2].get<long>());
            entries.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), v});
        }
        return exact_matrix::from_entries(rows, cols, entries);
    } catch (nlohmann::json::exception const & ex) {
        throw input_error(std::string("malformed matrix JSON: ") + ex.what());
    }
}

} // namespace gldual
