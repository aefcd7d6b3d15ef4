#ifndef BPQ_MONOMIAL_HPP
#define BPQ_MONOMIAL_HPP

#include <compare>
#include <string>
#include <vector>

#include "bpq/milnor.hpp"

namespace bpq::monomial {

/* Internal tridegree: homological s, simplicial m, weight w.  The MASS d_r
 * shifts it by (r, r-1, 0); a Bockstein d_r by (1, 0, 0).  Adams plotting
 * coordinate is (m - s, w). */
struct TriDeg {
    int s = 0, m = 0, w = 0;
    bool operator==(const TriDeg&) const = default;
    auto operator<=>(const TriDeg&) const = default;
    milnor::BiDeg adams() const { return {m - s, w}; }
};

/* Basis monomial sigma * tau^t * v0^{e0} ... vn^{en}.
 * sigma: index into FieldCtx::basis_names(sdeg).
 * |tau| = (0,1,-1), |v_i| = (1, 2^i, 2^i - 1), |sigma| = (0,0,-sdeg). */
struct Mono {
    int sdeg = 0;
    uint16_t sym = 0;
    int t = 0;
    std::vector<uint8_t> e;  // size n+1

    TriDeg trideg() const
    {
        TriDeg d{0, t, -sdeg - t};
        for (size_t i = 0; i < e.size(); ++i) {
            d.s += e[i];
            d.m += e[i] << i;
            d.w += e[i] * ((1 << i) - 1);
        }
        return d;
    }

    int total_v() const
    {
        int s = 0;
        for (uint8_t x : e)
            s += x;
        return s;
    }

    /* label order: low tau first, then non-rho symbols (basis order), then
     * v-exponents; used for echelon leads, i.e. coset labels */
    auto operator<=>(const Mono&) const = default;
};

/* Raw label, e.g. "a_3 tau^2 v0^2 v1". */
std::string render(const milnor::FieldCtx& ctx, const Mono& m);

/* Decorated label using the collapsed-generator names: tau^{2^{i+1}j} v_i
 * becomes v_i(j) (and rho tau^{2^{i+1}j} v_i becomes w_i(j)) with excess tau
 * pulled out as tau^{2^{n+1}}-powers.  Falls back to render() when the
 * monomial has no such decomposition. */
std::string render_collapsed(const milnor::FieldCtx& ctx, const Mono& m, int n, bool inf_cap);

/* All monomials of one internal tridegree with v-indices 0..n.  Exact: the
 * slice is finite once the symbol basis per degree is (window-)finite. */
std::vector<Mono> slice_basis(const milnor::FieldCtx& ctx, int n, const TriDeg& T);

inline Mono mul_v(Mono m, size_t i, int k = 1)
{
    m.e[i] = uint8_t(m.e[i] + k);
    return m;
}

}  // namespace bpq::monomial

#endif
