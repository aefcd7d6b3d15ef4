#ifndef BPQ_RULES_HPP
#define BPQ_RULES_HPP

#include <optional>
#include <string>
#include <vector>

#include "bpq/milnor.hpp"
#include "bpq/monomial.hpp"

namespace bpq::rules {

using milnor::FieldCtx;
using milnor::KClass;
using monomial::Mono;
using monomial::TriDeg;

enum class Kind { rhoBSS, MASS };

/* How a rule matches the symbol part of a monomial. */
enum class SymbolMatch {
    Any,      // Leibniz: target coefficient = sigma * coeff
    Exact,    // sigma must equal source_sym; coefficient replaced by coeff
    Trivial,  // sigma must be the unit; coefficient becomes coeff
};

/* One differential family instance.  Fires on monomials sigma tau^t v^E with
 * nu2(t) = tau_nu (t >= 1) whose symbol matches; the target is
 * coeff' * tau^{t - tau_step} * v^{E + v_add} with coeff' per SymbolMatch. */
struct DifferentialRule {
    Kind kind;
    int page;
    int tau_nu;
    int tau_step;
    SymbolMatch match = SymbolMatch::Any;
    int source_sdeg = 0;
    uint16_t source_sym = 0;
    KClass coeff;
    std::vector<int> v_add;
    std::string name;  // human-readable, for dumps
};

struct WeightedMono {
    Mono mono;
};

/* Apply every page-r rule in `table` to one monomial; F2 list of targets. */
std::vector<Mono> apply_rules(const FieldCtx& ctx, const std::vector<DifferentialRule>& table,
                              int page, const Mono& m);

/* Bockstein tables.  C and Qp (p=1 mod 4): empty.  Qp (p=3 mod 4) and Q2:
 * the single d_1 tau = rho v0.  R and Q: d_{2^{i+1}-1} tau^{2^i} =
 * rho^{2^{i+1}-1} v_i for 0 <= i <= n. */
std::vector<DifferentialRule> bss_rules(const FieldCtx& ctx, int n, int max_page);

/* Adams tables (pages generated up to max_page, tau_nu up to max_nu).
 * mutate_z substitutes the place-2 coefficient x by y or x+y (falsification
 * harness); it only affects the Q2 table. */
enum class MutateZ { none, y, xy };
std::vector<DifferentialRule> mass_rules(const FieldCtx& ctx, int n, int max_page, int max_nu,
                                         MutateZ mutate = MutateZ::none);

/* tridegree law check; throws on a malformed table */
void validate(const FieldCtx& ctx, const std::vector<DifferentialRule>& table, int n);

std::string dump_json(const FieldCtx& ctx, const std::vector<DifferentialRule>& table);

/* ---- closed-form Ext presentations (rho-Bockstein E_infty) ---- */

/* Dimension of Ext_{E(n)}^{s, m+w alpha} from the per-field closed forms. */
size_t ext_dimension(const FieldCtx& ctx, int n, bool inf_cap, const TriDeg& T);

/* Normal forms for the v_i(j)-relation system over R/Q:
 *   v_i(j) v_k(l) -> v_i(j + 2^{k-i} l) v_k(0)   (i <= k)
 *   v_i(j) -> tau^{2^{n+1}} v_i(j - 2^{n-i})     (j >= 2^{n-i})
 * A decorated monomial is a tau-power b, exponents e_i, and one decoration
 * (index, j).  normal_form pushes all decoration onto the smallest index and
 * extracts tau-periods; rewriting is terminating and confluent. */
struct DecMono {
    int tau_period_pow = 0;           // exponent b of tau^{2^{n+1}}
    std::vector<int> e;               // v-exponents (undecorated part)
    std::vector<std::pair<int, int>> decs;  // (index i, j >= 1) decorated factors
};
DecMono normal_form(DecMono m, int n);
bool dec_equal(const DecMono& a, const DecMono& b);

}  // namespace bpq::rules

#endif
