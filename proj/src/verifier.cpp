#include "gldual/verifier.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <numeric>
#include <set>
#include <thread>

#include "gldual/errors.hpp"
#include "gldual/steinberg.hpp"
#include "gldual/survey_cache.hpp"

namespace gldual {

void validate_signature(long n, long r, long s)
{
    if (n < 1)
        throw input_error("invalid signature: n must be at least 1");
    if (r < 0 || s < 0 || r + s < 1)
        throw input_error("invalid signature (r, s) = (" + std::to_string(r) + ", " +
                          std::to_string(s) + ")");
}

long vcd_gl(long n, long r, long s)
{
    validate_signature(n, r, s);
    return r * (n * (n + 1) / 2) + s * n * n - n;
}

long vcd_sl(long n, long r, long s)
{
    return vcd_gl(n, r, s) - r - s + 1;
}

long bordification_dim(long n, long r, long s)
{
    validate_signature(n, r, s);
    return r * n * (n + 1) / 2 + s * n * n - 1;
}

theorem_a_verdict theorem_a_applies(long n, quadratic_order const & o)
{
    if (n < 2)
        throw input_error("theorem_a_applies: n must be at least 2");
    theorem_a_verdict v;
    auto sig = o.signature();
    if (n % 2 != 0)
        v.reasons.push_back(reason_parity_odd);
    if (!o.is_real())
        v.reasons.push_back(reason_imaginary_field);
    if (!has_norm_minus_one_unit(o))
        v.reasons.push_back(reason_norm_minus_one_missing);
    if (static_cast<long>(sig.real + sig.complex) < n)
        v.reasons.push_back(reason_signature_too_small);
    v.applies = v.reasons.empty();
    return v;
}

bool theorem_b_applies(long n, quadratic_order const & o)
{
    if (n < 2)
        throw input_error("theorem_b_applies: n must be at least 2");
    return n % 2 != 0 || !has_norm_minus_one_unit(o);
}

std::optional<integer> theorem_b_bound(long n, quadratic_order const & o)
{
    if (!theorem_b_applies(n, o))
        return std::nullopt;
    integer base = static_cast<unsigned long>(class_group(o).h) - 1;
    integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n - 1));
    return out;
}

bool verdict_report::passed() const
{
    if (error)
        return false;
    return std::all_of(checks.begin(), checks.end(), [](check_result const & c) { return c.passed; });
}

nlohmann::json verdict_report::to_json() const
{
    auto cs = nlohmann::json::array();
    for (auto const & c : checks)
        cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    nlohmann::json v = {{"theorem_a_applies", nullptr},
                        {"theorem_a_reasons", theorem_a_reasons},
                        {"theorem_b_applies", nullptr},
                        {"dualizing_type", nullptr},
                        {"lower_bound", nullptr}};
    if (theorem_a)
        v["theorem_a_applies"] = *theorem_a;
    if (theorem_b)
        v["theorem_b_applies"] = *theorem_b;
    if (dualizing_type)
        v["dualizing_type"] = *dualizing_type;
    if (lower_bound)
        v["lower_bound"] = *lower_bound;
    nlohmann::json j = {{"input", input},       {"invariants", invariants},
                        {"verdicts", v},        {"provenance", provenance},
                        {"checks", cs},         {"error", nullptr},
                        {"passed", passed()}};
    if (error)
        j["error"] = *error;
    return j;
}

verdict_report verdict_report::from_json(nlohmann::json const & j)
{
    try {
        verdict_report r;
        r.input = j.at("input");
        r.invariants = j.at("invariants");
        auto const & v = j.at("verdicts");
        if (!v.at("theorem_a_applies").is_null())
            r.theorem_a = v["theorem_a_applies"].get<bool>();
        r.theorem_a_reasons = v.at("theorem_a_reasons").get<std::vector<std::string>>();
        if (!v.at("theorem_b_applies").is_null())
            r.theorem_b = v["theorem_b_applies"].get<bool>();
        if (!v.at("dualizing_type").is_null())
            r.dualizing_type = v["dualizing_type"].get<std::string>();
        if (!v.at("lower_bound").is_null())
            r.lower_bound = v["lower_bound"].get<std::string>();
        r.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
        for (auto const & c : j.at("checks"))
            r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                                c.at("detail").get<std::string>()});
        if (!j.at("error").is_null())
            r.error = j["error"].get<std::string>();
        return r;
    } catch (nlohmann::json::exception const & e) {
        throw input_error(std::string("malformed verdict report: ") + e.what());
    }
}

verdict_report bounds_report(long n, quadratic_order const & o)
{
    verdict_report r;
    r.input = {{"n", n}, {"d", nullptr}};
    if (!o.is_integers())
        r.input["d"] = o.d();
    auto sig = o.signature();
    long const rr = sig.real, ss = sig.complex;
    r.invariants["ring"] = descriptor(o);
    r.invariants["vcd_gl"] = vcd_gl(n, rr, ss);
    r.invariants["vcd_sl"] = vcd_sl(n, rr, ss);
    r.invariants["bordification_dim"] = bordification_dim(n, rr, ss);

    auto a = theorem_a_applies(n, o);
    r.theorem_a = a.applies;
    r.theorem_a_reasons = a.reasons;
    r.theorem_b = theorem_b_applies(n, o);
    r.dualizing_type = to_string(dualizing_module_type(static_cast<std::size_t>(n), o));
    if (auto b = theorem_b_bound(n, o))
        r.lower_bound = b->get_str();

    r.provenance = {
        {"ring.h", "class_group: reduced binary quadratic forms, wide classes"},
        {"ring.h_narrow", "class_group: cycles of the reduction operator"},
        {"ring.fundamental_unit", "fundamental_unit: continued fraction convergents"},
        {"ring.norm_minus_one", "has_norm_minus_one_unit: norm of the fundamental unit"},
        {"vcd_gl", "vcd_gl(n, r, s)"},
        {"vcd_sl", "vcd_sl(n, r, s)"},
        {"bordification_dim", "bordification_dim(n, r, s)"},
        {"theorem_a_applies", "theorem_a_applies: parity, norm -1 unit, r + s >= n"},
        {"theorem_b_applies", "theorem_b_applies: n odd or no norm -1 unit"},
        {"dualizing_type", "dualizing_module_type: n even and norm -1 unit"},
        {"lower_bound", "theorem_b_bound: (h - 1)^(n - 1) with wide h"},
    };
    long const identity = r.invariants["bordification_dim"].get<long>() -
                          r.invariants["vcd_gl"].get<long>() - 1;
    r.checks.push_back({"bordification_dim - vcd_gl - 1 = n - 2", identity == n - 2,
                        std::to_string(identity) + " vs " + std::to_string(n - 2)});
    bool const exclusive = !(a.applies && *r.theorem_b);
    r.checks.push_back({"theorem A and theorem B hypotheses exclusive", exclusive, ""});
    return r;
}

namespace {

using int2x2 = std::array<long, 4>;

int2x2 mul(int2x2 const & x, int2x2 const & y)
{
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

long det(int2x2 const & x) { return x[0] * x[3] - x[1] * x[2]; }

/* inverse of a determinant +-1 matrix */
int2x2 inv(int2x2 const & x)
{
    long const e = det(x);
    return {x[3] * e, -x[1] * e, -x[2] * e, x[0] * e};
}

constexpr int2x2 identity2{1, 0, 0, 1};

} // namespace

verdict_report verify_example_1_2()
{
    verdict_report r;
    r.input = {{"group", "level-2 congruence subgroup of GL_2(Z)"},
               {"generators", {{"a", {{1, 2}, {0, 1}}},
                               {"b", {{1, 0}, {2, 1}}},
                               {"c", {{-1, 0}, {0, 1}}},
                               {"d", {{1, 0}, {0, -1}}}}}};
    int2x2 const a{1, 2, 0, 1}, b{1, 0, 2, 1}, c{-1, 0, 0, 1}, d{1, 0, 0, -1};
    std::vector<std::pair<char, int2x2>> const gens{{'a', a}, {'b', b}, {'c', c}, {'d', d}};

    /* (a) */
    std::vector<std::string> failing;
    for (auto const & [name, g] : gens) {
        if (std::abs(det(g)) != 1)
            failing.push_back(std::string(1, name) + " not invertible over Z");
        if (g[0] % 2 == 0 || g[3] % 2 == 0 || g[1] % 2 != 0 || g[2] % 2 != 0)
            failing.push_back(std::string(1, name) + " = I mod 2");
    }
    if (mul(c, c) != identity2)
        failing.push_back("c^2 = 1");
    if (mul(d, d) != identity2)
        failing.push_back("d^2 = 1");
    if (mul(mul(c, a), inv(c)) != inv(a))
        failing.push_back("c a c^-1 = a^-1");
    if (mul(mul(c, b), inv(c)) != inv(b))
        failing.push_back("c b c^-1 = b^-1");
    std::string detail = "a, b, c, d = I mod 2; c^2 = d^2 = 1; c a c^-1 = a^-1; c b c^-1 = b^-1";
    if (!failing.empty()) {
        detail = "failing:";
        for (auto const & f : failing)
            detail += " [" + f + "]";
    }
    r.checks.push_back({"a: matrix relations", failing.empty(), detail});

    /* (b) relation words in the free group on a, b, c, d; exponent sums give the abelianization */
    std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>> const words{
        {"c c", {{2, 1}, {2, 1}}},
        {"d d", {{3, 1}, {3, 1}}},
        {"c a c^-1 a", {{2, 1}, {0, 1}, {2, -1}, {0, 1}}},
        {"c b c^-1 b", {{2, 1}, {1, 1}, {2, -1}, {1, 1}}},
    };
    std::vector<matrix_entry> rel;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::array<long, 4> sum{0, 0, 0, 0};
        for (auto [g, e] : words[i].second)
            sum[static_cast<std::size_t>(g)] += e;
        for (std::size_t j = 0; j < 4; ++j)
            if (sum[j] != 0)
                rel.push_back({i, j, rational(sum[j])});
    }
    auto relations = exact_matrix::from_entries(words.size(), 4, rel);
    auto snf = smith_normal_form(relations);
    long const free_rank = 4 - static_cast<long>(snf.size());
    nlohmann::json snf_json = nlohmann::json::array();
    for (auto const & f : snf)
        snf_json.push_back(f.get_str());
    r.invariants["relation_matrix"] = gldual::to_json(relations);
    r.invariants["invariant_factors"] = snf_json;
    r.invariants["abelianization_free_rank_upper_bound"] = free_rank;
    r.checks.push_back({"b: abelianization rational rank 0", free_rank == 0,
                        "conditional on the stated generating set; invariant factors " +
                            snf_json.dump() + ", free rank " + std::to_string(free_rank)});

    /* (c) */
    finite_field f2(2);
    auto st = make_steinberg_module(2, 2);
    std::vector<std::string> bad;
    std::set<std::size_t> hit;
    std::size_t sample = 0;
    auto line_of = [&](long x, long y) {
        fq_vector v{f2.from_integer(x), f2.from_integer(y)};
        auto s = span(f2, 2, {v});
        if (s.dim != 1)
            throw verification_error("reduction of a primitive vector vanished mod 2");
        return *st.building.vertex_of(s);
    };
    for (long x = -6; x <= 6; ++x)
        for (long y = -6; y <= 6; ++y) {
            if (std::gcd(x, y) != 1)
                continue;
            ++sample;
            std::size_t const l = line_of(x, y);
            hit.insert(l);
            if (line_of(-x, -y) != l)
                bad.push_back("v and -v reduce to different lines");
            for (auto const & [name, g] : gens) {
                long const gx = g[0] * x + g[1] * y, gy = g[2] * x + g[3] * y;
                if (line_of(gx, gy) != l)
                    bad.push_back(std::string(1, name) + " moves the reduction of (" +
                                  std::to_string(x) + ", " + std::to_string(y) + ")");
            }
        }
    auto rep = steinberg_action(st, gamma2_generators(f2));
    std::size_t const coinv = coinvariants_dim(rep);
    r.invariants["sample_primitive_vectors"] = sample;
    r.invariants["lines_hit"] = hit.size();
    r.invariants["dim_steinberg"] = st.dim();
    r.invariants["coinvariants_dim"] = coinv;
    bool const ok_c = bad.empty() && hit.size() == st.building.vertices.size() && coinv == 2;
    std::string detail_c = "reduction well defined and invariant on " + std::to_string(sample) +
                           " primitive vectors, " + std::to_string(hit.size()) +
                           " lines hit, coinvariants dimension " + std::to_string(coinv);
    if (!bad.empty())
        detail_c = "failing: " + bad.front();
    r.checks.push_back({"c: reduction and coinvariants", ok_c, detail_c});

    r.provenance = {
        {"invariant_factors", "smith_normal_form of the exponent-sum matrix"},
        {"abelianization_free_rank_upper_bound", "columns minus number of invariant factors"},
        {"coinvariants_dim", "coinvariants_dim(St_2(F_2), generators mod 2)"},
        {"lines_hit", "reduction of primitive vectors with |x|, |y| <= 6"},
    };
    return r;
}

std::string cell_key(survey_cell const & c)
{
    return (c.d ? std::to_string(*c.d) : std::string("Z")) + "," + std::to_string(c.n);
}

quadratic_order order_for(std::optional<long> d)
{
    return d ? quadratic_order::make(*d) : quadratic_order::integers();
}

std::vector<verdict_report> survey(std::vector<std::optional<long>> const & ds,
                                   std::vector<long> const & ns, survey_cache * cache,
                                   unsigned threads)
{
    std::vector<survey_cell> cells;
    for (auto d : ds)
        for (auto n : ns)
            cells.push_back({d, n});
    std::vector<verdict_report> out(cells.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cache) {
            if (auto hit = cache->lookup(cell_key(cells[i]))) {
                out[i] = verdict_report::from_json(*hit);
                continue;
            }
        }
        todo.push_back(i);
    }

    auto compute = [&](std::size_t i) {
        auto const & c = cells[i];
        try {
            out[i] = bounds_report(c.n, order_for(c.d));
        } catch (std::exception const & e) {
            verdict_report r;
            r.input = {{"n", c.n}, {"d", nullptr}};
            if (c.d)
                r.input["d"] = *c.d;
            r.error = e.what();
            out[i] = std::move(r);
        }
    };
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1)));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next.fetch_add(1)) < todo.size();)
                compute(todo[k]);
        });
    for (auto & t : pool)
        t.join();

    if (cache && !todo.empty()) {
        std::vector<std::pair<std::string, nlohmann::json>> records;
        for (auto i : todo)
            records.emplace_back(cell_key(cells[i]), out[i].to_json());
        cache->store(records);
    }
    return out;
}

} // namespace gldual
