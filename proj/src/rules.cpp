#include "bpq/rules.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bpq::rules {

using milnor::FieldTag;

namespace {

int nu2i(int t)
{
    return t == 0 ? -1 : __builtin_ctz(unsigned(t));
}

std::string power_name(const std::string& base, int k)
{
    if (k == 0)
        return "";
    if (k == 1)
        return base;
    return base + "^" + std::to_string(k);
}

}  // namespace

std::vector<Mono> apply_rules(const FieldCtx& ctx, const std::vector<DifferentialRule>& table,
                              int page, const Mono& m)
{
    std::vector<Mono> out;
    for (const auto& rule : table) {
        if (rule.page != page || m.t < 1 || nu2i(m.t) != rule.tau_nu)
            continue;
        KClass c;
        switch (rule.match) {
            case SymbolMatch::Any:
                c = ctx.mul(KClass{m.sdeg, {m.sym}}, rule.coeff);
                break;
            case SymbolMatch::Exact:
                if (m.sdeg != rule.source_sdeg || m.sym != rule.source_sym)
                    continue;
                c = rule.coeff;
                break;
            case SymbolMatch::Trivial:
                if (m.sdeg != 0)
                    continue;
                c = rule.coeff;
                break;
        }
        if (c.zero())
            continue;
        for (uint16_t s : c.sup) {
            Mono tgt;
            tgt.sdeg = c.degree;
            tgt.sym = s;
            tgt.t = m.t - rule.tau_step;
            tgt.e = m.e;
            for (size_t i = 0; i < rule.v_add.size() && i < tgt.e.size(); ++i)
                tgt.e[i] = uint8_t(tgt.e[i] + rule.v_add[i]);
            // F2: fold duplicates
            auto it = std::find(out.begin(), out.end(), tgt);
            if (it != out.end())
                out.erase(it);
            else
                out.push_back(tgt);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<DifferentialRule> bss_rules(const FieldCtx& ctx, int n, int max_page)
{
    std::vector<DifferentialRule> out;
    auto tag = ctx.field().tag;
    if (tag == FieldTag::C || (tag == FieldTag::Qp && ctx.field().p % 4 == 1))
        return out;

    auto make = [&](int i, const KClass& coeff, int vi, int page) {
        DifferentialRule r;
        r.kind = Kind::rhoBSS;
        r.page = page;
        r.tau_nu = i;
        r.tau_step = 1 << i;
        r.match = SymbolMatch::Any;
        r.coeff = coeff;
        r.v_add.assign(n + 1, 0);
        r.v_add[vi] = 1;
        r.name = "d" + std::to_string(page) + " " + power_name("tau", 1 << i) + " = " +
                 ctx.to_string(coeff) + " v" + std::to_string(vi);
        out.push_back(std::move(r));
    };

    if (tag == FieldTag::Q2 || tag == FieldTag::Qp) {
        // single d1 tau = rho v0; later families vanish (rho^2 or rho^3 = 0)
        make(0, ctx.rho_power(1), 0, 1);
        return out;
    }
    // R and Q: the full family
    for (int i = 0; i <= n; ++i) {
        int page = (1 << (i + 1)) - 1;
        if (page > max_page)
            break;
        make(i, ctx.rho_power(page), i, page);
    }
    return out;
}

std::vector<DifferentialRule> mass_rules(const FieldCtx& ctx, int n, int max_page, int max_nu,
                                         MutateZ mutate)
{
    std::vector<DifferentialRule> out;
    auto tag = ctx.field().tag;
    if (tag == FieldTag::C || tag == FieldTag::R)
        return out;

    auto make_any = [&](int i, int page, const KClass& coeff, const std::string& cname) {
        DifferentialRule r;
        r.kind = Kind::MASS;
        r.page = page;
        r.tau_nu = i;
        r.tau_step = 1;
        r.match = SymbolMatch::Any;
        r.coeff = coeff;
        r.v_add.assign(n + 1, 0);
        r.v_add[0] = page;
        r.name = "d" + std::to_string(page) + " " + power_name("tau", 1 << i) + " = " + cname +
                 " " + power_name("tau", (1 << i) - 1) + (((1 << i) - 1) ? " " : "") + "v0^" +
                 std::to_string(page);
        out.push_back(std::move(r));
    };

    if (tag == FieldTag::Qp) {
        arith::OddPrime p(ctx.field().p);
        if (p.value % 4 == 1) {
            int eps = arith::epsilon(p);
            for (int i = 0; i <= max_nu; ++i)
                if (eps + i <= max_page)
                    make_any(i, eps + i, ctx.sym(1, "u"), "u");
        }
        else {
            int lam = arith::lambda(p);
            for (int i = 1; i <= max_nu; ++i)
                if (lam - 1 + i <= max_page)
                    make_any(i, lam - 1 + i, ctx.sym(1, "rho"), "rho");
        }
        return out;
    }
    if (tag == FieldTag::Q2) {
        KClass z = ctx.sym(1, "x");
        std::string zname = "x";
        if (mutate == MutateZ::y) {
            z = ctx.sym(1, "y");
            zname = "y";
        }
        else if (mutate == MutateZ::xy) {
            z = milnor::kclass_add(ctx.sym(1, "x"), ctx.sym(1, "y"));
            zname = "x + y";
        }
        for (int i = 1; i <= max_nu; ++i)
            if (2 + i <= max_page)
                make_any(i, 2 + i, z, zname);
        return out;
    }

    // Q: three families indexed by prime, plus the rho-free [2]-family
    auto make_exact = [&](long long p, int i, int page) {
        DifferentialRule r;
        r.kind = Kind::MASS;
        r.page = page;
        r.tau_nu = i;
        r.tau_step = 1;
        r.match = SymbolMatch::Exact;
        r.source_sdeg = 1;
        auto src = ctx.symbol_index(1, "[" + std::to_string(p) + "]");
        r.source_sym = *src;
        r.coeff = ctx.sym(2, "a_" + std::to_string(p));
        r.v_add.assign(n + 1, 0);
        r.v_add[0] = page;
        r.name = "d" + std::to_string(page) + " [" + std::to_string(p) + "] " +
                 power_name("tau", 1 << i) + " = a_" + std::to_string(p) + " " +
                 power_name("tau", (1 << i) - 1) + (((1 << i) - 1) ? " " : "") + "v0^" +
                 std::to_string(page);
        out.push_back(std::move(r));
    };
    for (long long p : ctx.odd_primes()) {
        arith::OddPrime op(p);
        if (p % 4 == 1) {
            int eps = arith::epsilon(op);
            for (int i = 0; i <= max_nu; ++i)
                if (eps + i <= max_page)
                    make_exact(p, i, eps + i);
        }
        else {
            int lam = arith::lambda(op);
            for (int i = 1; i <= max_nu; ++i)
                if (lam - 1 + i <= max_page)
                    make_exact(p, i, lam - 1 + i);
        }
    }
    // the [2]-family: every rho-free, symbol-free source tau^t v^E with t
    // even supports d_{2+nu2(t)} hitting [2] tau^{t-1} v0^{2+nu2(t)} v^E
    for (int i = 1; i <= max_nu; ++i) {
        if (2 + i > max_page)
            continue;
        DifferentialRule r;
        r.kind = Kind::MASS;
        r.page = 2 + i;
        r.tau_nu = i;
        r.tau_step = 1;
        r.match = SymbolMatch::Trivial;
        r.coeff = ctx.sym(1, "[2]");
        r.v_add.assign(n + 1, 0);
        r.v_add[0] = 2 + i;
        r.name = "d" + std::to_string(2 + i) + " " + power_name("tau", 1 << i) + " = [2] " +
                 power_name("tau", (1 << i) - 1) + (((1 << i) - 1) ? " " : "") + "v0^" +
                 std::to_string(2 + i);
        out.push_back(std::move(r));
    }
    return out;
}

void validate(const FieldCtx& ctx, const std::vector<DifferentialRule>& table, int n)
{
    for (const auto& rule : table) {
        Mono src;
        src.sdeg = rule.match == SymbolMatch::Exact ? rule.source_sdeg : 0;
        src.sym = rule.match == SymbolMatch::Exact ? rule.source_sym : 0;
        src.t = 1 << rule.tau_nu;
        src.e.assign(n + 1, 0);
        auto targets = apply_rules(ctx, table, rule.page, src);
        if (targets.empty())
            continue;  // coefficient vanished in this field
        TriDeg a = src.trideg(), b = targets.front().trideg();
        int ds = b.s - a.s, dm = b.m - a.m, dw = b.w - a.w;
        bool ok = rule.kind == Kind::rhoBSS ? (ds == 1 && dm == 0 && dw == 0)
                                            : (ds == rule.page && dm == rule.page - 1 && dw == 0);
        if (!ok)
            throw std::logic_error("differential rule violates the degree law: " + rule.name);
        for (const auto& t : targets)
            if (!(t.trideg() == b))
                throw std::logic_error("rule targets not homogeneous: " + rule.name);
    }
}

std::string dump_json(const FieldCtx& ctx, const std::vector<DifferentialRule>& table)
{
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < table.size(); ++i) {
        const auto& r = table[i];
        os << (i ? ",\n " : "\n ");
        os << "{\"kind\":\"" << (r.kind == Kind::rhoBSS ? "rhoBSS" : "MASS") << "\",\"page\":"
           << r.page << ",\"tau_nu\":" << r.tau_nu << ",\"match\":"
           << (r.match == SymbolMatch::Any ? "\"any\""
                                           : r.match == SymbolMatch::Exact ? "\"exact\"" : "\"trivial\"")
           << ",\"coeff\":\"" << ctx.to_string(r.coeff) << "\",\"name\":\"" << r.name << "\"}";
    }
    os << "\n]";
    return os.str();
}

/* ---------------- closed-form Ext dimensions ---------------- */

namespace {

struct TVSolution {
    int t;
    std::vector<uint8_t> e;
};

void enum_tv(int n, const TriDeg& T, std::vector<TVSolution>& out)
{
    for (int t = 0; t <= T.m; ++t) {
        std::vector<std::vector<uint8_t>> ev;
        std::vector<uint8_t> e(n + 1, 0);
        // reuse the slice enumerator's recursion via monomial::slice_basis shape
        struct Rec {
            int n;
            std::vector<std::vector<uint8_t>>* out;
            void go(int s_left, int m_left, std::vector<uint8_t>& e, size_t i)
            {
                if (i == size_t(n + 1)) {
                    if (s_left == 0 && m_left == 0)
                        out->push_back(e);
                    return;
                }
                int wt = 1 << i;
                int maxe = std::min(s_left, m_left / wt);
                for (int k = 0; k <= maxe; ++k) {
                    e[i] = uint8_t(k);
                    go(s_left - k, m_left - k * wt, e, i + 1);
                }
                e[i] = 0;
            }
        } rec{n, &ev};
        rec.go(T.s, T.m - t, e, 0);
        for (auto& x : ev)
            out.push_back({t, std::move(x)});
    }
}

int min_v_index(const std::vector<uint8_t>& e)
{
    for (size_t i = 0; i < e.size(); ++i)
        if (e[i])
            return int(i);
    return -1;
}

/* survivor condition for the rho-power sector over R (and the rho-sector
 * over Q): normal form iff the tau-power decomposes into decorations on the
 * lowest v-index plus tau^{2^{n+1}}-periods, with the rho-bound */
bool r_normal(int a, int t, const std::vector<uint8_t>& e, int n, bool inf_cap)
{
    int i0 = min_v_index(e);
    if (i0 < 0)
        return inf_cap ? t == 0 : t % (1 << (n + 1)) == 0;
    if (t % (1 << (i0 + 1)) != 0)
        return false;
    return a < (1 << (i0 + 1)) - 1;
}

}  // namespace

size_t ext_dimension(const FieldCtx& ctx, int n, bool inf_cap, const TriDeg& T)
{
    if (T.s < 0 || T.m < 0)
        return 0;
    std::vector<TVSolution> sols;
    enum_tv(n, T, sols);
    size_t dim = 0;
    auto tag = ctx.field().tag;
    for (const auto& sol : sols) {
        int D = T.m - 2 * sol.t - T.s - T.w;
        if (D < 0)
            continue;
        bool even = sol.t % 2 == 0;
        bool e0 = !sol.e.empty() && sol.e[0] > 0;
        switch (tag) {
            case FieldTag::C:
                if (D == 0)
                    dim += 1;
                break;
            case FieldTag::Qp:
                if (ctx.field().p % 4 == 1) {
                    dim += ctx.basis_size(D);
                }
                else {
                    // k^M[tau^2, v]/rho v0 (+) rho tau k^M[tau^2, v]
                    if (even) {
                        if (D == 0)
                            dim += 1;
                        else if (D == 1)
                            dim += 1 + (e0 ? 0 : 1);  // p always, rho if no v0
                        else if (D == 2)
                            dim += e0 ? 0 : 1;  // p^2
                    }
                    else {
                        if (D == 1 || D == 2)
                            dim += 1;  // rho tau^odd, p^2 tau^odd
                    }
                }
                break;
            case FieldTag::Q2:
                if (even) {
                    if (D == 0)
                        dim += 1;
                    else if (D == 1)
                        dim += 2 + (e0 ? 0 : 1);  // x, y, and rho if no v0
                    else if (D == 2)
                        dim += e0 ? 0 : 1;  // rho^2
                }
                else {
                    if (D == 1)
                        dim += 2;  // x, y
                    else if (D == 2)
                        dim += 1;  // rho^2
                }
                break;
            case FieldTag::R:
                if (r_normal(D, sol.t, sol.e, n, inf_cap))
                    dim += 1;
                break;
            case FieldTag::Q: {
                // rho-sector behaves exactly like R
                if (r_normal(D, sol.t, sol.e, n, inf_cap))
                    dim += 1;
                // [2] and [q] (q = 1 mod 4) survive everywhere; [p] (p = 3
                // mod 4) survives at even tau-powers
                size_t q1 = 0, q3 = 0;
                for (long long q : ctx.odd_primes())
                    (q % 4 == 1 ? q1 : q3) += 1;
                if (D == 1)
                    dim += 1 + q1 + (even ? q3 : 0);
                // one a_q-type class per odd q at every degree-2 slot
                if (D == 2)
                    dim += q1 + q3;
                break;
            }
        }
    }
    return dim;
}

/* ---------------- decorated-monomial rewriting ---------------- */

DecMono normal_form(DecMono m, int n)
{
    bool changed = true;
    while (changed) {
        changed = false;
        // drop trivial decorations
        for (size_t i = 0; i < m.decs.size(); ++i) {
            if (m.decs[i].second == 0) {
                m.e[m.decs[i].first] += 1;
                m.decs.erase(m.decs.begin() + long(i));
                changed = true;
                break;
            }
        }
        if (changed)
            continue;
        // periodicity: v_i(j) = tau^{2^{n+1}} v_i(j - 2^{n-i}) for j >= 2^{n-i}
        for (auto& d : m.decs) {
            int cap = 1 << (n - d.first);
            if (d.second >= cap) {
                d.second -= cap;
                m.tau_period_pow += 1;
                changed = true;
                break;
            }
        }
        if (changed)
            continue;
        // merge two decorations onto the smaller index
        if (m.decs.size() >= 2) {
            auto a = m.decs[0], b = m.decs[1];
            if (a.first > b.first)
                std::swap(a, b);
            // v_i(j) v_k(l) = v_i(j + 2^{k-i} l) v_k(0)
            m.decs.erase(m.decs.begin(), m.decs.begin() + 2);
            m.decs.insert(m.decs.begin(), {a.first, a.second + (1 << (b.first - a.first)) * b.second});
            m.e[b.first] += 1;
            changed = true;
            continue;
        }
        // pull decoration down past an undecorated smaller index
        if (m.decs.size() == 1) {
            auto d = m.decs[0];
            int i0 = min_v_index(m.e);
            if (i0 >= 0 && i0 < d.first) {
                m.e[i0] -= 1;
                m.e[d.first] += 1;
                m.decs[0] = {i0, (1 << (d.first - i0)) * d.second};
                changed = true;
                continue;
            }
        }
    }
    std::sort(m.decs.begin(), m.decs.end());
    return m;
}

bool dec_equal(const DecMono& a, const DecMono& b)
{
    return a.tau_period_pow == b.tau_period_pow && a.e == b.e && a.decs == b.decs;
}

}  // namespace bpq::rules
