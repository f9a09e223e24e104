#ifndef GLDUAL_TESTS_LINALG_ORACLE_HPP
#define GLDUAL_TESTS_LINALG_ORACLE_HPP

#include <cstddef>
#include <set>
#include <vector>

#include <gmpxx.h>

/* Small dense brute-force references: Laplace-expansion minors, box search, vector counting. */
namespace linalg_oracle {

using dense = std::vector<std::vector<mpq_class>>;

inline mpq_class laplace_det(dense const & m)
{
    std::size_t const n = m.size();
    if (n == 0)
        return 1;
    if (n == 1)
        return m[0][0];
    mpq_class total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j] == 0)
            continue;
        dense minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<mpq_class> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j)
                    row.push_back(m[i][k]);
            minor.push_back(row);
        }
        mpq_class const term = m[0][j] * laplace_det(minor);
        total += (j % 2 == 0) ? term : mpq_class(-term);
    }
    return total;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t> & cur,
                    std::vector<std::vector<std::size_t>> & out)
{
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

/* Largest k with a nonzero k x k minor. */
inline std::size_t rank_by_minors(dense const & m, std::size_t cols)
{
    std::size_t const rows = m.size();
    for (std::size_t k = std::min(rows, cols); k > 0; --k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(rows, k, 0, cur, rs);
        subsets(cols, k, 0, cur, cs);
        for (auto const & r : rs)
            for (auto const & c : cs) {
                dense sub;
                for (auto i : r) {
                    std::vector<mpq_class> row;
                    for (auto j : c)
                        row.push_back(m[i][j]);
                    sub.push_back(row);
                }
                if (laplace_det(sub) != 0)
                    return k;
            }
    }
    return 0;
}

/* Integer vectors in [-b, b]^cols with m v = 0, then the rank of what was found. */
inline std::size_t null_space_dim_by_box(dense const & m, std::size_t cols, long b)
{
    std::vector<long> v(cols, -b);
    dense found;
    while (true) {
        bool zero = true;
        for (auto const & row : m) {
            mpq_class s = 0;
            for (std::size_t j = 0; j < cols; ++j)
                s += row[j] * v[j];
            if (s != 0) {
                zero = false;
                break;
            }
        }
        if (zero) {
            std::vector<mpq_class> w(v.begin(), v.end());
            found.push_back(w);
        }
        std::size_t i = cols;
        while (i > 0 && v[i - 1] == b) {
            v[i - 1] = -b;
            --i;
        }
        if (i == 0)
            break;
        ++v[i - 1];
    }
    return rank_by_minors(found, cols);
}

/*
 * Number of k-dimensional subspaces of F_p^n (p prime), by counting ordered
 * bases of k independent vectors and dividing by |GL_k(F_p)|.
 */
inline unsigned long long count_subspaces(unsigned n, unsigned k, unsigned p)
{
    /* the span of i independent vectors has p^i elements, enumerated explicitly */
    auto count_tuples = [&](unsigned dim, unsigned len) {
        std::vector<std::vector<unsigned>> all;
        unsigned long long total = 1;
        for (unsigned i = 0; i < dim; ++i)
            total *= p;
        for (unsigned long long code = 0; code < total; ++code) {
            std::vector<unsigned> v(dim);
            unsigned long long c = code;
            for (unsigned i = 0; i < dim; ++i) {
                v[i] = static_cast<unsigned>(c % p);
                c /= p;
            }
            all.push_back(v);
        }
        unsigned long long count = 0;
        std::vector<std::vector<unsigned>> chosen;
        auto rec = [&](auto & self, std::set<std::vector<unsigned>> const & spanned) -> void {
            if (chosen.size() == len) {
                ++count;
                return;
            }
            for (auto const & v : all) {
                if (spanned.count(v))
                    continue;
                std::set<std::vector<unsigned>> next;
                for (auto const & s : spanned)
                    for (unsigned a = 0; a < p; ++a) {
                        std::vector<unsigned> w(dim);
                        for (unsigned i = 0; i < dim; ++i)
                            w[i] = (s[i] + a * v[i]) % p;
                        next.insert(w);
                    }
                chosen.push_back(v);
                self(self, next);
                chosen.pop_back();
            }
        };
        std::set<std::vector<unsigned>> zero{std::vector<unsigned>(dim, 0)};
        rec(rec, zero);
        return count;
    };
    return count_tuples(n, k) / count_tuples(k, k);
}

} // namespace linalg_oracle

#endif /* GLDUAL_TESTS_LINALG_ORACLE_HPP */
