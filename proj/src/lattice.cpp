#include "gldual/lattice.hpp"

#include "gldual/errors.hpp"

namespace gldual {

exact_matrix to_exact(integer_matrix const & rows, std::size_t cols)
{
    std::vector<rational_vector> r;
    r.reserve(rows.size());
    for (auto const & row : rows) {
        if (row.size() != cols)
            throw input_error("integer matrix row has wrong length");
        r.emplace_back(row.begin(), row.end());
    }
    return exact_matrix::from_rows(cols, r);
}

integer integer_determinant(integer_matrix const & rows)
{
    rational d = determinant(to_exact(rows, rows.size()));
    return d.get_num();
}

bool is_unimodular(integer_matrix const & rows)
{
    for (auto const & r : rows)
        if (r.size() != rows.size())
            return false;
    return abs(integer_determinant(rows)) == 1;
}

std::optional<integer_matrix> unimodular_completion(integer_matrix const & basis,
                                                    std::size_t n)
{
    std::size_t const k = basis.size();
    if (k > n)
        return std::nullopt;
    for (auto const & r : basis)
        if (r.size() != n)
            throw input_error("unimodular_completion: row has wrong length");

    /*
     * Column operations bring the rows to [H | 0] with H lower triangular,
     * while `inv` tracks the inverse transform so that basis = [H | 0] * inv.
     * The rows are primitive iff every diagonal entry of H is a unit, and
     * then the last n-k rows of `inv` complete the basis.
     */
    integer_matrix c = basis;
    integer_matrix inv(n, integer_vector(n));
    for (std::size_t i = 0; i < n; ++i)
        inv[i][i] = 1;

    integer g, x, y, ag, bg;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (c[i][j] == 0)
                continue;
            integer const a = c[i][i], b = c[i][j];
            mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(),
                       b.get_mpz_t());
            ag = a / g;
            bg = b / g;
            /* columns (i, j) <- (i, j) * [[x, -b/g], [y, a/g]] */
            for (std::size_t r = 0; r < k; ++r) {
                integer ci = c[r][i], cj = c[r][j];
                c[r][i] = ci * x + cj * y;
                c[r][j] = -ci * bg + cj * ag;
            }
            /* rows (i, j) of inv <- [[a/g, b/g], [-y, x]] * (i, j) */
            for (std::size_t t = 0; t < n; ++t) {
                integer ri = inv[i][t], rj = inv[j][t];
                inv[i][t] = ag * ri + bg * rj;
                inv[j][t] = -y * ri + x * rj;
            }
        }
        if (abs(c[i][i]) != 1)
            return std::nullopt;
    }
    return integer_matrix(inv.begin() + static_cast<std::ptrdiff_t>(k), inv.end());
}

bool spans_direct_summand(integer_matrix const & basis, std::size_t n)
{
    if (basis.empty())
        return true;
    auto f = smith_normal_form(to_exact(basis, n));
    if (f.size() != basis.size())
        return false;
    for (auto const & d : f)
        if (d != 1)
            return false;
    return true;
}

} // namespace gldual
