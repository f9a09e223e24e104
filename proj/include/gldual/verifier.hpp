#ifndef GLDUAL_VERIFIER_HPP
#define GLDUAL_VERIFIER_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gldual/quad_rings.hpp"

namespace gldual {

/* Throws input_error unless n >= 1 and r + s >= 1. */
void validate_signature(long n, long r, long s);

long vcd_gl(long n, long r, long s);
long vcd_sl(long n, long r, long s);
long bordification_dim(long n, long r, long s);

/* Stable reason codes for failed hypotheses. */
inline constexpr char const * reason_norm_minus_one_missing = "NORM_MINUS_ONE_MISSING";
inline constexpr char const * reason_parity_odd = "PARITY_ODD";
inline constexpr char const * reason_signature_too_small = "SIGNATURE_TOO_SMALL";
inline constexpr char const * reason_imaginary_field = "IMAGINARY_FIELD";

struct theorem_a_verdict {
    bool applies = false;
    std::vector<std::string> reasons;
};

/* n even, a unit of norm -1, and r + s >= n. */
theorem_a_verdict theorem_a_applies(long n, quadratic_order const & o);

/* n odd, or no unit of norm -1. */
bool theorem_b_applies(long n, quadratic_order const & o);

/* (h - 1)^(n - 1) with the wide class number h, or nullopt when the hypotheses fail. */
std::optional<integer> theorem_b_bound(long n, quadratic_order const & o);

struct check_result {
    std::string name;
    bool passed = false;
    std::string detail;
    bool operator==(check_result const &) const = default;
};

struct verdict_report {
    nlohmann::json input = nlohmann::json::object();
    nlohmann::json invariants = nlohmann::json::object();
    std::optional<bool> theorem_a;
    std::vector<std::string> theorem_a_reasons;
    std::optional<bool> theorem_b;
    std::optional<std::string> dualizing_type;
    /* exact decimal string */
    std::optional<std::string> lower_bound;
    std::map<std::string, std::string> provenance;
    std::vector<check_result> checks;
    std::optional<std::string> error;

    bool passed() const;
    nlohmann::json to_json() const;
    static verdict_report from_json(nlohmann::json const & j);
    bool operator==(verdict_report const &) const = default;
};

/* Invariants and theorem verdicts for GL_n over the order. */
verdict_report bounds_report(long n, quadratic_order const & o);

/*
 * The three checks on the level-2 congruence subgroup of GL_2(Z): relations
 * among the four generators, the rank of the abelianized relations, and
 * the reduction of lines mod 2 with the resulting coinvariants of St_2(F_2).
 */
verdict_report verify_example_1_2();

/* d = nullopt stands for Z. */
struct survey_cell {
    std::optional<long> d;
    long n;
    bool operator==(survey_cell const &) const = default;
};

std::string cell_key(survey_cell const & c);

class survey_cache;

/*
 * One report per (d, n), in the order d-major.  Cells missing from the cache
 * are computed concurrently and then appended by a single writer.  Errors
 * are stored in the cell's report.
 */
std::vector<verdict_report> survey(std::vector<std::optional<long>> const & ds,
                                   std::vector<long> const & ns, survey_cache * cache = nullptr,
                                   unsigned threads = 0);

quadratic_order order_for(std::optional<long> d);

} // namespace gldual

#endif /* GLDUAL_VERIFIER_HPP */
