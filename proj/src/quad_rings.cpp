#include "gldual/quad_rings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "gldual/errors.hpp"

namespace gldual {

bool is_squarefree(long n)
{
    if (n == 0)
        return false;
    unsigned long m = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    for (unsigned long p = 2; p * p <= m; ++p) {
        if (m % (p * p) == 0)
            return false;
        if (m % p == 0)
            m /= p;
    }
    return true;
}

quadratic_order quadratic_order::make(long d)
{
    if (d == 0 || d == 1)
        throw input_error("d = " + std::to_string(d) + " does not define a quadratic field");
    if (!is_squarefree(d))
        throw input_error("d = " + std::to_string(d) + " is not squarefree");
    long disc = mod4(d) == 1 ? d : 4 * d;
    return quadratic_order(d, disc, false);
}

quadratic_order quadratic_order::integers()
{
    return quadratic_order(1, 1, true);
}

field_signature quadratic_order::signature() const
{
    if (integers_)
        return {1, 0};
    return d_ > 0 ? field_signature{2, 0} : field_signature{0, 1};
}

bool quadratic_order::contains(ring_element const & x) const
{
    if (x.denom != denom())
        return false;
    if (integers_)
        return x.b == 0;
    if (x.denom == 2)
        return mpz_even_p(integer(x.a - x.b).get_mpz_t()) != 0;
    return true;
}

ring_element quadratic_order::element(integer const & a, integer const & b) const
{
    ring_element x{a, b, denom()};
    if (!contains(x))
        throw input_error(to_string(x) + " is not an element of " + name());
    return x;
}

ring_element quadratic_order::from_integer(integer const & n) const
{
    return {n * denom(), 0, denom()};
}

ring_element quadratic_order::add(ring_element const & x, ring_element const & y) const
{
    return {x.a + y.a, x.b + y.b, denom()};
}

ring_element quadratic_order::mul(ring_element const & x, ring_element const & y) const
{
    unsigned const den = denom();
    integer a = x.a * y.a + d_ * x.b * y.b;
    integer b = x.a * y.b + x.b * y.a;
    if (integers_)
        return {x.a * y.a, 0, 1};
    if (den == 2) {
        mpz_divexact_ui(a.get_mpz_t(), a.get_mpz_t(), 2);
        mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), 2);
    }
    return {a, b, den};
}

ring_element quadratic_order::neg(ring_element const & x) const
{
    return {-x.a, -x.b, x.denom};
}

ring_element quadratic_order::conjugate(ring_element const & x) const
{
    return {x.a, -x.b, x.denom};
}

integer quadratic_order::norm(ring_element const & x) const
{
    if (integers_)
        return x.a;
    integer n = x.a * x.a - d_ * x.b * x.b;
    if (x.denom == 2)
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), 4);
    return n;
}

std::string quadratic_order::name() const
{
    if (integers_)
        return "Z";
    return "O(Q(sqrt(" + std::to_string(d_) + ")))";
}

std::string quadratic_order::to_string(ring_element const & x) const
{
    std::string s = x.a.get_str();
    if (!integers_ && x.b != 0)
        s = "(" + s + (x.b < 0 ? " - " : " + ") + integer(abs(x.b)).get_str() + "*sqrt(" +
            std::to_string(d_) + "))";
    if (x.denom != 1)
        s += "/" + std::to_string(x.denom);
    return s;
}

ring_element fundamental_unit(quadratic_order const & o, std::size_t step_cap)
{
    if (o.is_integers() || o.d() < 0)
        throw input_error("fundamental_unit: " + o.name() + " has finite unit group");
    long const d = o.d();
    bool const half = o.denom() == 2;
    long const s = static_cast<long>(std::sqrt(static_cast<long double>(d)));
    long root = s;
    while (root * root > d)
        --root;
    while ((root + 1) * (root + 1) <= d)
        ++root;

    /* theta = (P + sqrt d) / Q */
    long P = half ? 1 : 0;
    long Q = half ? 2 : 1;
    integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
    for (std::size_t step = 0; step < step_cap; ++step) {
        long a = (P + root) / Q;
        integer p = a * p_prev + p_prev2;
        integer q = a * q_prev + q_prev2;
        /* candidate p - q * conj(theta) */
        ring_element u = half ? ring_element{2 * p - q, q, 2} : ring_element{p, q, 1};
        if (o.is_unit(u))
            return u;
        p_prev2 = p_prev;
        p_prev = p;
        q_prev2 = q_prev;
        q_prev = q;
        long P_next = a * Q - P;
        long Q_next = (d - P_next * P_next) / Q;
        P = P_next;
        Q = Q_next;
    }
    throw budget_error("continued fraction for d = " + std::to_string(d) + " exceeded " +
                       std::to_string(step_cap) + " steps");
}

bool has_norm_minus_one_unit(quadratic_order const & o)
{
    if (o.is_integers())
        return true; /* N(-1) = -1 on Z */
    if (o.d() < 0)
        return false;
    return o.norm(fundamental_unit(o)) == -1;
}

namespace {

long isqrt_floor(long n)
{
    long r = static_cast<long>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

long gcd3(long a, long b, long c)
{
    return std::gcd(std::gcd(std::labs(a), std::labs(b)), std::labs(c));
}

bool is_reduced_indefinite(long a, long b, long root)
{
    long const a2 = 2 * std::labs(a);
    return b >= 1 && b <= root && a2 + b >= root + 1 && a2 - b <= root;
}

struct union_find {
    std::vector<std::size_t> parent;
    explicit union_find(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t x, std::size_t y)
    {
        x = find(x);
        y = find(y);
        if (x != y)
            parent[std::max(x, y)] = std::min(x, y);
    }
};

} // namespace

std::vector<binary_form> reduced_forms(long disc)
{
    std::vector<binary_form> out;
    if (disc < 0) {
        long const absd = -disc;
        for (long a = 1; 3 * a * a <= absd; ++a)
            for (long b = -a + 1; b <= a; ++b) {
                if (((b - disc) % 2) != 0)
                    continue;
                long num = b * b - disc;
                if (num % (4 * a) != 0)
                    continue;
                long c = num / (4 * a);
                if (c < a || (c == a && b < 0))
                    continue;
                if (gcd3(a, b, c) != 1)
                    continue;
                out.push_back({a, b, c});
            }
    } else {
        long const root = isqrt_floor(disc);
        if (root * root == disc)
            throw input_error("reduced_forms: square discriminant");
        for (long b = 1; b <= root; ++b) {
            if (((b - disc) % 2) != 0)
                continue;
            long const n = (disc - b * b) / 4; /* a c = -n */
            for (long a = 1; 2 * a <= root + b && a <= n; ++a) {
                if (n % a != 0 || !is_reduced_indefinite(a, b, root))
                    continue;
                for (long sign : {1L, -1L}) {
                    long sa = sign * a, c = -n / sa;
                    if (gcd3(sa, b, c) == 1)
                        out.push_back({sa, b, c});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

binary_form reduction_step(binary_form const & f, long disc)
{
    long const root = isqrt_floor(disc);
    long const b = f.b.get_si(), c = f.c.get_si();
    long const m = 2 * std::labs(c);
    long const r = root - (((root + b) % m) + m) % m;
    long const num = r * r - disc;
    if (num % (4 * c) != 0)
        throw verification_error("reduction step produced a non-integral form");
    return {c, r, num / (4 * c)};
}

namespace {

class_group_data compute_class_group(quadratic_order const & o)
{
    class_group_data out;
    if (o.is_integers())
        return out;
    long const disc = o.discriminant();
    auto forms = reduced_forms(disc);
    if (disc < 0) {
        out.h = out.h_narrow = forms.size();
        out.forms = forms;
        return out;
    }
    auto index_of = [&](binary_form const & f) {
        auto it = std::lower_bound(forms.begin(), forms.end(), f);
        if (it == forms.end() || !(*it == f))
            throw verification_error("reduction cycle left the set of reduced forms");
        return static_cast<std::size_t>(it - forms.begin());
    };
    union_find narrow(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i)
        narrow.unite(i, index_of(reduction_step(forms[i], disc)));
    union_find wide = narrow;
    for (std::size_t i = 0; i < forms.size(); ++i)
        wide.unite(i, index_of({-forms[i].a, forms[i].b, -forms[i].c}));
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (narrow.find(i) == i)
            out.forms.push_back(forms[i]);
    }
    out.h_narrow = out.forms.size();
    std::size_t wide_count = 0;
    for (std::size_t i = 0; i < forms.size(); ++i)
        wide_count += wide.find(i) == i;
    out.h = wide_count;
    return out;
}

std::mutex memo_mutex;
std::map<long, class_group_data> memo;

} // namespace

class_group_data class_group(quadratic_order const & o, class_group_options opts)
{
    if (std::labs(o.discriminant()) > opts.max_abs_discriminant)
        throw budget_error("class_group: |D| = " + std::to_string(std::labs(o.discriminant())) +
                           " exceeds the enumeration bound " +
                           std::to_string(opts.max_abs_discriminant));
    long const key = o.is_integers() ? 1 : o.discriminant();
    if (opts.use_memo) {
        std::lock_guard<std::mutex> lock(memo_mutex);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
    }
    auto data = compute_class_group(o);
    if (opts.use_memo) {
        std::lock_guard<std::mutex> lock(memo_mutex);
        memo.emplace(key, data);
    }
    return data;
}

namespace {

/* a + b sqrt(d) with rational coordinates */
struct field_element {
    rational a, b;
};

field_element to_field(ring_element const & x)
{
    return {rational(x.a, x.denom), rational(x.b, x.denom)};
}

} // namespace

ring_element determinant(quadratic_order const & o, ring_matrix const & g)
{
    std::size_t const n = g.size();
    for (auto const & row : g)
        if (row.size() != n)
            throw input_error("determinant: matrix is not square");
    long const d = o.is_integers() ? 0 : o.d();
    auto mul = [d](field_element const & x, field_element const & y) {
        return field_element{x.a * y.a + d * x.b * y.b, x.a * y.b + x.b * y.a};
    };
    auto sub = [](field_element const & x, field_element const & y) {
        return field_element{x.a - y.a, x.b - y.b};
    };
    auto inv = [d](field_element const & x) {
        rational nrm = x.a * x.a - d * x.b * x.b;
        return field_element{x.a / nrm, -x.b / nrm};
    };
    auto is_zero = [](field_element const & x) { return x.a == 0 && x.b == 0; };

    std::vector<std::vector<field_element>> m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (auto const & x : g[i]) {
            if (!o.contains(x))
                throw input_error("matrix entry " + o.to_string(x) + " is not in " + o.name());
            m[i].push_back(to_field(x));
        }
    field_element det{1, 0};
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && is_zero(m[p][k]))
            ++p;
        if (p == n)
            return o.from_integer(0);
        if (p != k) {
            std::swap(m[p], m[k]);
            det = {-det.a, -det.b};
        }
        det = mul(det, m[k][k]);
        auto piv_inv = inv(m[k][k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (is_zero(m[i][k]))
                continue;
            auto f = mul(m[i][k], piv_inv);
            for (std::size_t j = k; j < n; ++j)
                m[i][j] = sub(m[i][j], mul(f, m[k][j]));
        }
    }
    rational ra = det.a * o.denom(), rb = det.b * o.denom();
    if (ra.get_den() != 1 || rb.get_den() != 1)
        throw input_error("determinant is not an element of " + o.name());
    ring_element out{ra.get_num(), rb.get_num(), o.denom()};
    if (!o.contains(out))
        throw input_error("determinant is not an element of " + o.name());
    return out;
}

int chi(quadratic_order const & o, ring_matrix const & g)
{
    ring_element det = determinant(o, g);
    integer nrm = o.norm(det);
    if (abs(nrm) != 1)
        throw input_error("det = " + o.to_string(det) + " is not a unit; matrix is not in GL_n(" +
                          o.name() + ")");
    return nrm > 0 ? 1 : -1;
}

namespace {

long double log_abs(mpf_class const & x)
{
    long e = 0;
    double m = mpf_get_d_2exp(&e, x.get_mpf_t());
    return std::log(std::fabs(static_cast<long double>(m))) +
           static_cast<long double>(e) * std::log(2.0L);
}

} // namespace

std::vector<long double> log_embedding(quadratic_order const & o, ring_element const & u)
{
    if (!o.contains(u) || !o.is_unit(u))
        throw input_error("log_embedding: " + o.to_string(u) + " is not a unit of " + o.name());
    if (o.is_integers())
        return {0.0L};
    if (o.d() < 0) {
        /* |g(u)|^2 = N(u) */
        long double re = std::strtold(u.a.get_str().c_str(), nullptr) / u.denom;
        long double im = std::strtold(u.b.get_str().c_str(), nullptr) / u.denom *
                         std::sqrt(static_cast<long double>(-o.d()));
        return {std::log(re * re + im * im)};
    }
    mp_bitcnt_t bits = 128 + 2 * (mpz_sizeinbase(u.a.get_mpz_t(), 2) +
                                  mpz_sizeinbase(u.b.get_mpz_t(), 2));
    mpf_class root(o.d(), bits);
    root = sqrt(root);
    mpf_class a(u.a, bits), b(u.b, bits);
    mpf_class first(0, bits), second(0, bits);
    first = (a + b * root) / u.denom;
    second = (a - b * root) / u.denom;
    return {log_abs(first), log_abs(second)};
}

nlohmann::json descriptor(quadratic_order const & o)
{
    nlohmann::json j;
    auto sig = o.signature();
    j["ring"] = o.name();
    if (o.is_integers())
        j["d"] = nullptr;
    else
        j["d"] = o.d();
    j["D"] = o.discriminant();
    j["signature"] = {sig.real, sig.complex};
    if (!o.is_integers() && o.d() > 0) {
        auto u = fundamental_unit(o);
        j["fundamental_unit"] = {{"a", u.a.get_str()},
                                 {"b", u.b.get_str()},
                                 {"denom", u.denom},
                                 {"norm", o.norm(u).get_si()}};
    } else {
        j["fundamental_unit"] = nullptr;
    }
    auto cl = class_group(o);
    j["h"] = cl.h;
    j["h_narrow"] = cl.h_narrow;
    j["norm_minus_one"] = has_norm_minus_one_unit(o);
    return j;
}

} // namespace gldual
