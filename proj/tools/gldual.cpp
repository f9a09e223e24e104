#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gldual/complexes.hpp"
#include "gldual/errors.hpp"
#include "gldual/flag_complexes.hpp"
#include "gldual/quad_rings.hpp"
#include "gldual/steinberg.hpp"
#include "gldual/survey_cache.hpp"
#include "gldual/verifier.hpp"

using namespace gldual;
using nlohmann::json;

namespace {

struct globals {
    bool json_out = false;
    std::string cache_path;
    std::size_t budget = default_simplex_budget;
};

/* Exit status of a report: 0 if every check passed, 1 otherwise. */
int emit(globals const & g, json const & j, bool ok, std::string const & text)
{
    if (g.json_out)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
    return ok ? 0 : 1;
}

long parse_long(std::string const & s, std::string const & what)
{
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (std::exception const &) {
        throw input_error(what + ": not an integer: '" + s + "'");
    }
    if (pos != s.size())
        throw input_error(what + ": not an integer: '" + s + "'");
    return v;
}

std::optional<long> parse_d(std::string const & s)
{
    if (s == "Z" || s == "z")
        return std::nullopt;
    return parse_long(s, "--d");
}

/* "2,3,5", "2..10", "-5..-1,7", "Z", or "" */
std::vector<std::optional<long>> parse_range(std::string const & s, std::string const & what,
                                             bool allow_z)
{
    std::vector<std::optional<long>> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty())
            continue;
        if (allow_z && (part == "Z" || part == "z")) {
            out.push_back(std::nullopt);
            continue;
        }
        auto dots = part.find("..", 1);
        if (dots == std::string::npos) {
            out.push_back(parse_long(part, what));
            continue;
        }
        long lo = parse_long(part.substr(0, dots), what);
        long hi = parse_long(part.substr(dots + 2), what);
        if (hi < lo)
            throw input_error(what + ": empty or reversed range '" + part + "'");
        if (hi - lo > 100000)
            throw input_error(what + ": range '" + part + "' is too long");
        for (long v = lo; v <= hi; ++v)
            out.push_back(v);
    }
    return out;
}

unsigned long long ipow(unsigned long long b, unsigned e)
{
    unsigned long long r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

std::vector<fq_matrix> group_from_spec(std::string const & spec, finite_field const & f,
                                       std::size_t n)
{
    if (spec == "gl")
        return gl_generators(f, n);
    if (spec == "gl-elementary")
        return gl_generators_elementary(f, n);
    if (spec == "sl")
        return sl_generators(f, n);
    if (spec == "trivial")
        return {fq_matrix::identity(n)};
    if (spec == "gamma2") {
        if (n != 2)
            throw input_error("--group gamma2 needs n = 2");
        return gamma2_generators(f);
    }
    json j;
    try {
        j = json::parse(spec);
    } catch (json::exception const &) {
        throw input_error("--group: expected gl, gl-elementary, sl, trivial, gamma2 or a JSON "
                          "array of matrices, got '" + spec + "'");
    }
    if (!j.is_array())
        throw input_error("--group: JSON value must be an array of matrices");
    std::vector<fq_matrix> gens;
    for (auto const & m : j) {
        if (!m.is_array() || m.size() != n)
            throw input_error("--group: each matrix must have " + std::to_string(n) + " rows");
        fq_matrix g(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i].is_array() || m[i].size() != n)
                throw input_error("--group: each row must have " + std::to_string(n) + " entries");
            for (std::size_t k = 0; k < n; ++k) {
                if (!m[i][k].is_number_integer())
                    throw input_error("--group: entries must be integers");
                long long v = m[i][k].get<long long>();
                if (f.is_prime()) {
                    g(i, k) = f.from_integer(v);
                } else {
                    if (v < 0 || v >= static_cast<long long>(f.order()))
                        throw input_error("--group: entries over F_" + std::to_string(f.order()) +
                                          " are element codes 0.." +
                                          std::to_string(f.order() - 1));
                    g(i, k) = static_cast<finite_field::element>(v);
                }
            }
        }
        gens.push_back(g);
    }
    return gens;
}

std::optional<character_twist> twist_from_spec(std::string const & spec, finite_field const & f,
                                               std::vector<fq_matrix> const & gens)
{
    if (spec.empty() || spec == "none")
        return std::nullopt;
    character_twist t;
    if (spec == "legendre") {
        t = legendre_twist(f, gens);
    } else {
        json j;
        try {
            j = json::parse(spec);
        } catch (json::exception const &) {
            throw input_error("--twist: expected none, legendre or a JSON array of +1/-1");
        }
        if (!j.is_array())
            throw input_error("--twist: expected a JSON array of +1/-1");
        for (auto const & s : j) {
            if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1))
                throw input_error("--twist: signs must be 1 or -1");
            t.signs.push_back(s.get<int>());
        }
    }
    if (t.signs.size() != gens.size())
        throw input_error("--twist: " + std::to_string(t.signs.size()) + " signs for " +
                          std::to_string(gens.size()) + " generators");
    if (!twist_is_consistent(f, gens, t))
        throw input_error("--twist: signs do not define a character of the generated group");
    return t;
}

int cmd_ring_info(globals const & g, std::string const & d)
{
    auto o = order_for(parse_d(d));
    json j = descriptor(o);
    std::ostringstream text;
    text << "ring " << o.name() << "\n";
    text << "  D = " << o.discriminant() << ", signature (r, s) = (" << o.signature().real << ", "
         << o.signature().complex << ")\n";
    bool ok = true;
    if (!o.is_integers() && o.d() > 0) {
        auto u = fundamental_unit(o);
        auto psi = log_embedding(o, u);
        long double sum = 0;
        json coords = json::array();
        for (auto x : psi) {
            sum += x;
            coords.push_back(static_cast<double>(x));
        }
        bool const in_h = std::fabs(static_cast<double>(sum)) < log_lattice_tolerance;
        bool const unit = abs(o.norm(u)) == 1;
        ok = in_h && unit;
        j["log_embedding"] = {{"unit", o.to_string(u)},
                              {"coordinates", coords},
                              {"coordinate_sum", static_cast<double>(sum)},
                              {"tolerance", static_cast<double>(log_lattice_tolerance)},
                              {"within_tolerance", in_h}};
        text << "  fundamental unit " << o.to_string(u) << ", norm " << o.norm(u) << "\n";
        text << "  log embedding sum " << static_cast<double>(sum) << " (tolerance "
             << static_cast<double>(log_lattice_tolerance) << ")\n";
    }
    text << "  h = " << j["h"] << ", h+ = " << j["h_narrow"]
         << ", unit of norm -1: " << (j["norm_minus_one"].get<bool>() ? "yes" : "no") << "\n";
    return emit(g, j, ok, text.str());
}

int cmd_building_homology(globals const & g, std::size_t n, unsigned q)
{
    auto b = make_tits_building(n, q, g.budget);
    auto c = make_chain_complex(b.complex, true);
    auto h = homology(c);
    bool const dd = c.boundary_squares_to_zero();
    bool const faces = b.complex.face_identities_hold();
    int const top = static_cast<int>(n) - 2;
    bool concentrated = true;
    for (int k = h.lowest_degree; k <= h.top_degree(); ++k)
        if (k != top && h.at(k) != 0)
            concentrated = false;
    unsigned long long const expected = ipow(q, static_cast<unsigned>(n * (n - 1) / 2));
    bool const rank_ok = h.at(top) == expected;
    json dims = json::array();
    for (int k = 0; k <= b.complex.dimension(); ++k)
        dims.push_back(b.complex.count(static_cast<std::size_t>(k)));
    json j = {{"n", n},
              {"q", q},
              {"simplices", dims},
              {"reduced_homology", {{"lowest_degree", h.lowest_degree}, {"ranks", h.ranks}}},
              {"expected_top_rank", expected},
              {"checks",
               {{"boundary_squares_to_zero", dd},
                {"face_identities", faces},
                {"concentrated_in_degree_n_minus_2", concentrated},
                {"top_rank_matches", rank_ok}}}};
    std::ostringstream text;
    text << "Tits building n=" << n << " q=" << q << ": simplices " << dims.dump() << "\n";
    text << "  reduced homology ranks from degree " << h.lowest_degree << ": "
         << json(h.ranks).dump() << "\n";
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    text << "  d^2 = 0: " << yn(dd) << ", face identities: " << yn(faces)
         << ", concentrated: " << yn(concentrated) << ", top rank " << h.at(top) << " (expected "
         << expected << ")\n";
    return emit(g, j, dd && faces && concentrated && rank_ok, text.str());
}

int cmd_steinberg(globals const & g, std::size_t n, unsigned q,
                  std::optional<std::string> const & group, std::string const & twist)
{
    auto st = make_steinberg_module(n, q, g.budget);
    std::size_t const span_rank = apartment_span_rank(st, g.budget);
    unsigned long long const expected = ipow(q, static_cast<unsigned>(n * (n - 1) / 2));
    bool ok = st.dim() == expected && span_rank == st.dim();
    json j = {{"n", n}, {"q", q}, {"dim_steinberg", st.dim()}, {"apartment_span_rank", span_rank}};
    std::ostringstream text;
    text << "St_" << n << "(F_" << q << "): dim " << st.dim() << ", apartment span rank "
         << span_rank << "\n";
    if (group) {
        auto const & f = st.building.field;
        auto gens = group_from_spec(*group, f, n);
        auto t = twist_from_spec(twist, f, gens);
        auto rep = steinberg_action(st, gens);
        std::size_t const dim = coinvariants_dim(rep, t);
        json tw = nullptr;
        if (t)
            tw = t->signs;
        j["coinvariants"] = {{"group", *group}, {"generators", gens.size()}, {"twist", tw},
                             {"dim", dim}};
        text << "  coinvariants under " << *group << " (" << gens.size() << " generators)"
             << (t ? ", twisted" : "") << ": dim " << dim << "\n";
    }
    return emit(g, j, ok, text.str());
}

int cmd_bounds(globals const & g, std::string const & d, long n)
{
    auto r = bounds_report(n, order_for(parse_d(d)));
    std::ostringstream text;
    text << "GL_" << n << " over " << r.invariants["ring"]["ring"].get<std::string>() << "\n";
    text << "  vcd(GL) = " << r.invariants["vcd_gl"] << ", vcd(SL) = " << r.invariants["vcd_sl"]
         << ", bordification dim = " << r.invariants["bordification_dim"] << "\n";
    text << "  theorem A applies: " << (*r.theorem_a ? "yes" : "no");
    for (auto const & reason : r.theorem_a_reasons)
        text << " " << reason;
    text << "\n  theorem B applies: " << (*r.theorem_b ? "yes" : "no");
    if (r.lower_bound)
        text << ", lower bound " << *r.lower_bound;
    text << "\n  dualizing module: " << *r.dualizing_type << "\n";
    return emit(g, r.to_json(), r.passed(), text.str());
}

int cmd_verify_example(globals const & g)
{
    auto r = verify_example_1_2();
    std::ostringstream text;
    for (auto const & c : r.checks)
        text << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    return emit(g, r.to_json(), r.passed(), text.str());
}

int cmd_flags_probe(globals const & g, std::size_t n, long m, long height)
{
    auto p = probe_b_complex(n, m, height, g.budget);
    json j = p.to_json();
    bool ok = true;
    for (auto const & t : p.trials)
        if (t.witnesses_failed != 0)
            ok = false;
    std::ostringstream text;
    text << "probe B_" << n << "(Z, (" << m << ")) truncated at heights 1.." << height << "\n";
    for (auto const & t : p.trials)
        text << "  H=" << t.height << ": " << t.simplices << " simplices, reduced ranks "
             << json(t.ranks.ranks).dump() << " from degree -1, witnesses failed "
             << t.witnesses_failed << "\n";
    text << "  minimal connected H: "
         << (p.minimal_connected_height ? std::to_string(*p.minimal_connected_height)
                                        : std::string("none observed"))
         << " (probe only)\n";
    return emit(g, j, ok, text.str());
}

int cmd_survey(globals const & g, std::string const & d, std::string const & n)
{
    auto ds = parse_range(d, "--d", true);
    std::vector<long> ns;
    for (auto v : parse_range(n, "--n", false))
        ns.push_back(*v);
    std::unique_ptr<survey_cache> cache;
    if (!g.cache_path.empty())
        cache = std::make_unique<survey_cache>(g.cache_path);
    auto rows = survey(ds, ns, cache.get());
    json j = json::array();
    std::ostringstream text;
    bool ok = true, cell_error = false;
    for (auto const & r : rows) {
        j.push_back(r.to_json());
        text << "d=" << (r.input["d"].is_null() ? std::string("Z") : r.input["d"].dump())
             << " n=" << r.input["n"] << ": ";
        if (r.error) {
            text << "error: " << *r.error << "\n";
            cell_error = true;
            continue;
        }
        if (!r.passed())
            ok = false;
        text << "A=" << (*r.theorem_a ? "yes" : "no") << " B=" << (*r.theorem_b ? "yes" : "no")
             << " bound=" << r.lower_bound.value_or("n/a") << " type=" << *r.dualizing_type
             << "\n";
    }
    int const code = emit(g, j, ok, text.str());
    return cell_error ? 2 : code;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Exact computations with Tits buildings, Steinberg modules and quadratic orders"};
    app.require_subcommand(1);
    globals g;
    app.add_flag("--json", g.json_out, "machine-readable output");
    app.add_option("--cache", g.cache_path, "JSON-lines cache file for survey");
    app.add_option("--budget", g.budget, "maximum number of simplices to enumerate")
        ->check(CLI::PositiveNumber);

    std::string d;
    std::size_t n = 0;
    long nl = 0;
    unsigned q = 0;
    long m = 0, height = 0;
    std::string group, twist = "none", d_range, n_range;
    int status = 0;

    auto ring = app.add_subcommand("ring", "quadratic order invariants");
    ring->require_subcommand(1);
    auto ring_info = ring->add_subcommand("info", "descriptor of the ring of integers");
    ring_info->add_option("--d", d, "squarefree d, or Z")->required();
    ring_info->callback([&] { status = cmd_ring_info(g, d); });

    auto building = app.add_subcommand("building", "Tits buildings over F_q");
    building->require_subcommand(1);
    auto homology_cmd = building->add_subcommand("homology", "reduced homology of the building");
    homology_cmd->add_option("--n", n)->required()->check(CLI::Range(2, 12));
    homology_cmd->add_option("--q", q)->required();
    homology_cmd->callback([&] { status = cmd_building_homology(g, n, q); });

    auto steinberg = app.add_subcommand("steinberg", "Steinberg modules of F_q");
    steinberg->require_subcommand(1);
    auto apartments = steinberg->add_subcommand("apartments", "dimension and apartment span");
    apartments->add_option("--n", n)->required()->check(CLI::Range(2, 12));
    apartments->add_option("--q", q)->required();
    apartments->callback([&] { status = cmd_steinberg(g, n, q, std::nullopt, "none"); });
    auto coinv = steinberg->add_subcommand("coinv", "coinvariants under a group");
    coinv->add_option("--n", n)->required()->check(CLI::Range(2, 12));
    coinv->add_option("--q", q)->required();
    coinv->add_option("--group", group,
                      "gl, gl-elementary, sl, trivial, gamma2, or a JSON array of matrices")
        ->required();
    coinv->add_option("--twist", twist, "none, legendre, or a JSON array of +1/-1");
    coinv->callback([&] { status = cmd_steinberg(g, n, q, group, twist); });

    auto bounds = app.add_subcommand("bounds", "theorem predicates and formulas");
    bounds->add_option("--d", d, "squarefree d, or Z")->required();
    bounds->add_option("--n", nl)->required()->check(CLI::Range(2L, 1000L));
    bounds->callback([&] { status = cmd_bounds(g, d, nl); });

    auto verify = app.add_subcommand("verify", "fixed verification pipelines");
    verify->require_subcommand(1);
    auto example = verify->add_subcommand("example-1-2", "the level-2 congruence subgroup of GL_2(Z)");
    example->callback([&] { status = cmd_verify_example(g); });

    auto flags = app.add_subcommand("flags", "flag and basis complexes over Z");
    flags->require_subcommand(1);
    auto probe = flags->add_subcommand("probe", "connectivity probe of truncated B_n(Z, (m))");
    probe->add_option("--n", n)->required()->check(CLI::Range(1, 6));
    probe->add_option("--m", m)->required()->check(CLI::Range(2L, 1000000L));
    probe->add_option("--height", height)->required()->check(CLI::Range(1L, 1000L));
    probe->callback([&] { status = cmd_flags_probe(g, n, m, height); });

    auto survey_cmd = app.add_subcommand("survey", "table of reports over d and n");
    survey_cmd->add_option("--d", d_range, "e.g. 2,3,5 or 2..10 or Z")->required();
    survey_cmd->add_option("--n", n_range, "e.g. 2,3 or 2..4")->required();
    survey_cmd->callback([&] { status = cmd_survey(g, d_range, n_range); });

    for (auto * sub : {ring_info, homology_cmd, apartments, coinv, bounds, example, probe, survey_cmd})
        sub->fallthrough();
    for (auto * sub : {ring, building, steinberg, verify, flags})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (verification_error const & e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (input_error const & e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (budget_error const & e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return status;
}
