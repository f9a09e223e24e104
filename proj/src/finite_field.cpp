#include "gldual/finite_field.hpp"

#include <algorithm>
#include <string>

#include "gldual/errors.hpp"

namespace gldual {

namespace {

bool is_prime_number(unsigned n)
{
    if (n < 2)
        return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

std::vector<unsigned> prime_factors(unsigned n)
{
    std::vector<unsigned> out;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    if (n > 1)
        out.push_back(n);
    return out;
}

} // namespace

finite_field::finite_field(unsigned q) : q_(q), p_(q), k_(1)
{
    if (is_prime_number(q)) {
        if (q >= (1u << 16))
            throw input_error("field order " + std::to_string(q) + " too large");
    } else {
        /* coefficients of the irreducible modulus, low degree first, leading 1 implied */
        std::vector<unsigned> modulus;
        if (q == 4) {
            p_ = 2; k_ = 2; modulus = {1, 1};
        } else if (q == 8) {
            p_ = 2; k_ = 3; modulus = {1, 1, 0};
        } else if (q == 9) {
            p_ = 3; k_ = 2; modulus = {1, 0};
        } else {
            throw input_error("unsupported field order " + std::to_string(q) +
                              " (primes and 4, 8, 9 are supported)");
        }
        auto digits = [&](element a) {
            std::vector<unsigned> d(k_);
            for (unsigned i = 0; i < k_; ++i) {
                d[i] = a % p_;
                a /= p_;
            }
            return d;
        };
        auto encode = [&](std::vector<unsigned> const & d) {
            element a = 0;
            for (unsigned i = k_; i-- > 0;)
                a = a * p_ + d[i];
            return a;
        };
        add_table.resize(q * q);
        mul_table.resize(q * q);
        for (element a = 0; a < q; ++a)
            for (element b = 0; b < q; ++b) {
                auto da = digits(a), db = digits(b);
                std::vector<unsigned> s(k_);
                for (unsigned i = 0; i < k_; ++i)
                    s[i] = (da[i] + db[i]) % p_;
                add_table[a * q + b] = encode(s);
                std::vector<unsigned> prod(2 * k_ - 1, 0);
                for (unsigned i = 0; i < k_; ++i)
                    for (unsigned j = 0; j < k_; ++j)
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
                /* x^k = -modulus */
                for (unsigned t = 2 * k_ - 1; t-- > k_;) {
                    unsigned c = prod[t];
                    prod[t] = 0;
                    for (unsigned i = 0; i < k_; ++i)
                        prod[t - k_ + i] = (prod[t - k_ + i] + (p_ - modulus[i]) * c) % p_;
                }
                prod.resize(k_);
                mul_table[a * q + b] = encode(prod);
            }
    }
    inv_table.assign(q, 0);
    if (k_ > 1) {
        for (element a = 1; a < q; ++a)
            for (element b = 1; b < q; ++b)
                if (mul_table[a * q + b] == 1)
                    inv_table[a] = b;
    }
    auto pow = [&](element a, unsigned e) {
        element r = 1;
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    };
    if (k_ == 1)
        for (element a = 1; a < q; ++a)
            inv_table[a] = pow(a, q - 2);
    auto factors = prime_factors(q - 1);
    for (element g = 1; g < q; ++g) {
        bool ok = true;
        for (auto r : factors)
            if (pow(g, (q - 1) / r) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            gen_ = g;
            break;
        }
    }
}

finite_field::element finite_field::add(element a, element b) const
{
    if (k_ == 1)
        return (a + b) % q_;
    return add_table[a * q_ + b];
}

finite_field::element finite_field::neg(element a) const
{
    if (k_ == 1)
        return a == 0 ? 0 : q_ - a;
    for (element b = 0; b < q_; ++b)
        if (add_table[a * q_ + b] == 0)
            return b;
    return 0;
}

finite_field::element finite_field::sub(element a, element b) const
{
    return add(a, neg(b));
}

finite_field::element finite_field::mul(element a, element b) const
{
    if (k_ == 1)
        return static_cast<element>((static_cast<std::uint64_t>(a) * b) % q_);
    return mul_table[a * q_ + b];
}

finite_field::element finite_field::inv(element a) const
{
    if (a == 0)
        throw input_error("inverse of zero in F_" + std::to_string(q_));
    return inv_table[a];
}

int finite_field::quadratic_character(element a) const
{
    if (p_ == 2)
        throw input_error("quadratic character needs odd q");
    if (a == 0)
        return 0;
    for (element x = 1; x < q_; ++x)
        if (mul(x, x) == a)
            return 1;
    return -1;
}

finite_field::element finite_field::from_integer(long long v) const
{
    long long r = v % static_cast<long long>(p_);
    if (r < 0)
        r += p_;
    /* the prime subfield is encoded by 0..p-1 in both representations */
    return static_cast<element>(r);
}

fq_matrix fq_matrix::identity(std::size_t n)
{
    fq_matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

fq_matrix multiply(finite_field const & f, fq_matrix const & a, fq_matrix const & b)
{
    if (a.cols != b.rows)
        throw input_error("F_q matrix product shape mismatch");
    fq_matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            auto x = a(i, k);
            if (x == 0)
                continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c(i, j) = f.add(c(i, j), f.mul(x, b(k, j)));
        }
    return c;
}

fq_vector apply(finite_field const & f, fq_matrix const & a, fq_vector const & v)
{
    if (v.size() != a.cols)
        throw input_error("F_q matrix-vector shape mismatch");
    fq_vector out(a.rows, 0);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            out[i] = f.add(out[i], f.mul(a(i, j), v[j]));
    return out;
}

std::size_t rref(finite_field const & f, fq_matrix & m)
{
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && m(p, c) == 0)
            ++p;
        if (p == m.rows)
            continue;
        for (std::size_t j = 0; j < m.cols; ++j)
            std::swap(m(p, j), m(r, j));
        auto iv = f.inv(m(r, c));
        for (std::size_t j = 0; j < m.cols; ++j)
            m(r, j) = f.mul(m(r, j), iv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0)
                continue;
            auto factor = m(i, c);
            for (std::size_t j = 0; j < m.cols; ++j)
                m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
        }
        ++r;
    }
    return r;
}

std::size_t rank(finite_field const & f, fq_matrix m)
{
    return rref(f, m);
}

finite_field::element determinant(finite_field const & f, fq_matrix m)
{
    if (m.rows != m.cols)
        throw input_error("determinant of a non-square F_q matrix");
    std::size_t const n = m.rows;
    finite_field::element det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m(p, j), m(c, j));
            det = f.neg(det);
        }
        det = f.mul(det, m(c, c));
        auto iv = f.inv(m(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0)
                continue;
            auto factor = f.mul(m(i, c), iv);
            for (std::size_t j = c; j < n; ++j)
                m(i, j) = f.sub(m(i, j), f.mul(factor, m(c, j)));
        }
    }
    return det;
}

bool is_invertible(finite_field const & f, fq_matrix const & m)
{
    return m.rows == m.cols && determinant(f, m) != 0;
}

fq_matrix inverse(finite_field const & f, fq_matrix const & m)
{
    if (!is_invertible(f, m))
        throw input_error("matrix is not invertible over F_" + std::to_string(f.order()));
    std::size_t const n = m.rows;
    fq_matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    rref(f, aug);
    fq_matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = aug(i, n + j);
    return out;
}

std::size_t subspace_hash::operator()(subspace const & s) const
{
    std::size_t h = s.dim * 1000003u + s.ambient;
    for (auto x : s.basis)
        h = h * 1099511628211ull + x + 1;
    return h;
}

subspace span(finite_field const & f, std::size_t n, std::vector<fq_vector> const & vectors)
{
    fq_matrix m(vectors.size(), n);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != n)
            throw input_error("vector of wrong length in span");
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = vectors[i][j];
    }
    std::size_t r = rref(f, m);
    subspace s;
    s.dim = r;
    s.ambient = n;
    s.basis.assign(m.data.begin(), m.data.begin() + static_cast<std::ptrdiff_t>(r * n));
    return s;
}

std::vector<subspace> all_subspaces(finite_field const & f, std::size_t n, std::size_t k)
{
    std::vector<subspace> out;
    if (k > n)
        return out;
    unsigned const q = f.order();
    std::vector<std::size_t> piv(k);
    for (std::size_t i = 0; i < k; ++i)
        piv[i] = i;
    for (;;) {
        /* free positions: (i, j) with j > piv[i] and j not a pivot column */
        std::vector<char> is_piv(n, 0);
        for (auto c : piv)
            is_piv[c] = 1;
        std::vector<std::pair<std::size_t, std::size_t>> free;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = piv[i] + 1; j < n; ++j)
                if (!is_piv[j])
                    free.emplace_back(i, j);
        std::vector<unsigned> digits(free.size(), 0);
        bool done = false;
        while (!done) {
            subspace s;
            s.dim = k;
            s.ambient = n;
            s.basis.assign(k * n, 0);
            for (std::size_t i = 0; i < k; ++i)
                s.basis[i * n + piv[i]] = 1;
            for (std::size_t t = 0; t < free.size(); ++t)
                s.basis[free[t].first * n + free[t].second] = digits[t];
            out.push_back(std::move(s));
            std::size_t t = free.size();
            for (;;) {
                if (t == 0) {
                    done = true;
                    break;
                }
                --t;
                if (++digits[t] < q)
                    break;
                digits[t] = 0;
            }
        }
        /* next pivot combination in lexicographic order */
        std::size_t i = k;
        while (i > 0 && piv[i - 1] == n - k + (i - 1))
            --i;
        if (i == 0)
            break;
        ++piv[i - 1];
        for (std::size_t j = i; j < k; ++j)
            piv[j] = piv[j - 1] + 1;
    }
    return out;
}

bool contains(finite_field const & f, subspace const & big, subspace const & small)
{
    if (small.dim > big.dim || small.ambient != big.ambient)
        return false;
    std::size_t const n = big.ambient;
    fq_matrix m(big.dim + small.dim, n);
    std::copy(big.basis.begin(), big.basis.end(), m.data.begin());
    std::copy(small.basis.begin(), small.basis.end(),
              m.data.begin() + static_cast<std::ptrdiff_t>(big.dim * n));
    return rref(f, m) == big.dim;
}

fq_vector basis_vector(subspace const & s, std::size_t i)
{
    auto first = s.basis.begin() + static_cast<std::ptrdiff_t>(i * s.ambient);
    return fq_vector(first, first + static_cast<std::ptrdiff_t>(s.ambient));
}

subspace image(finite_field const & f, fq_matrix const & g, subspace const & v)
{
    std::vector<fq_vector> imgs;
    imgs.reserve(v.dim);
    for (std::size_t i = 0; i < v.dim; ++i)
        imgs.push_back(apply(f, g, basis_vector(v, i)));
    return span(f, v.ambient, imgs);
}

unsigned long long gaussian_binomial(unsigned n, unsigned k, unsigned q)
{
    if (k > n)
        return 0;
    unsigned long long num = 1, den = 1;
    unsigned long long qq = q;
    for (unsigned i = 0; i < k; ++i) {
        unsigned long long a = 1, b = 1;
        for (unsigned t = 0; t < n - i; ++t)
            a *= qq;
        for (unsigned t = 0; t < i + 1; ++t)
            b *= qq;
        num *= a - 1;
        den *= b - 1;
    }
    return num / den;
}

} // namespace gldual
