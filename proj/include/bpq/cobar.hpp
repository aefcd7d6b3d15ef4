#ifndef BPQ_COBAR_HPP
#define BPQ_COBAR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bpq/gf2.hpp"
#include "bpq/milnor.hpp"
#include "bpq/monomial.hpp"

namespace bpq::cobar {

using milnor::FieldCtx;
using monomial::TriDeg;

/* Quotient Hopf algebroid E(n): generators tau_0..tau_n of bidegree
 * 1 + (2^i - 1)(1 + alpha), relations tau_i^2 = rho tau_{i+1} (i < n) and
 * tau_n^2 = 0; under the infinity-cap N the final relation is omitted and
 * computations are valid for internal m < 2^{N+1} - 1. */
struct EnPresentation {
    int n;               // number of generators - 1 (the cap for n = infinity)
    bool inf_cap;
    milnor::BaseField field;

    std::string describe(const FieldCtx& ctx) const;
    int validity_m_bound() const { return inf_cap ? (1 << (n + 1)) - 1 : INT32_MAX; }
};

EnPresentation en_presentation(int n, bool inf_cap, milnor::BaseField field);

/* Reduced cobar cochain: left coefficient sigma tau^t and s square-free
 * tau-words (bitmasks over tau_0..tau_n, each nonzero). */
struct Cochain {
    int sdeg = 0;
    uint16_t sym = 0;
    int t = 0;
    std::vector<uint32_t> words;

    TriDeg trideg() const;
    auto operator<=>(const Cochain&) const = default;
};

std::string render(const FieldCtx& ctx, const Cochain& c);

/* All cochains of one tridegree. */
std::vector<Cochain> cobar_slice_basis(const FieldCtx& ctx, const EnPresentation& en,
                                       const TriDeg& T);

/* Cobar differential of a single cochain, as an F2 list of cochains:
 *   d(m [w1|...|ws]) = [(eta_R(m) + m) | w1 | ... | ws]
 *                      + sum_i [w1 | ... | split(w_i) | ... | ws]
 * with eta_R(sigma tau^t) = sigma (tau + rho tau_0)^t and tau_0^k reduced to
 * rho^{k - s2(k)} tau_{bits(k)}. */
std::vector<Cochain> differential(const FieldCtx& ctx, const EnPresentation& en, const Cochain& c);

/* Three consecutive differential matrices around homological degree T.s at
 * the internal bidegree of T (rows: source basis, cols: target basis). */
struct CobarSlice {
    std::vector<Cochain> below, here, above;  // s-1, s, s+1
    gf2::Matrix d_in;                         // below -> here
    gf2::Matrix d_out;                        // here -> above
};
CobarSlice cobar_slice(const FieldCtx& ctx, const EnPresentation& en, const TriDeg& T);

struct ExtResult {
    size_t dim;
    std::vector<std::string> representatives;
};

/* Brute-force Ext_{E(n)}^{s, m + w alpha}: ker/im of the reduced cobar. */
ExtResult ext_oracle(const FieldCtx& ctx, const EnPresentation& en, const TriDeg& T);

}  // namespace bpq::cobar

#endif
