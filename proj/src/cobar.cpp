#include "bpq/cobar.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bpq::cobar {

using milnor::KClass;

EnPresentation en_presentation(int n, bool inf_cap, milnor::BaseField field)
{
    if (n < 0)
        throw std::invalid_argument("en_presentation: n must be >= 0");
    return EnPresentation{n, inf_cap, field};
}

std::string EnPresentation::describe(const FieldCtx& ctx) const
{
    std::string s = "M*[";
    for (int i = 0; i <= n; ++i)
        s += (i ? ",tau" : "tau") + std::to_string(i);
    s += "]/(";
    for (int i = 0; i < n; ++i)
        s += "tau" + std::to_string(i) + "^2-rho tau" + std::to_string(i + 1) + ", ";
    s += inf_cap ? "...)" : "tau" + std::to_string(n) + "^2)";
    (void)ctx;
    return s;
}

TriDeg Cochain::trideg() const
{
    TriDeg d{int(words.size()), t, -sdeg - t};
    for (uint32_t w : words) {
        uint32_t x = w;
        while (x) {
            int i = __builtin_ctz(x);
            x &= x - 1;
            d.m += 1 << i;
            d.w += (1 << i) - 1;
        }
    }
    return d;
}

std::string render(const FieldCtx& ctx, const Cochain& c)
{
    std::string out;
    if (c.sdeg > 0)
        out += ctx.symbol_name(c.sdeg, c.sym) + " ";
    if (c.t == 1)
        out += "tau ";
    else if (c.t > 1)
        out += "tau^" + std::to_string(c.t) + " ";
    out += "[";
    for (size_t k = 0; k < c.words.size(); ++k) {
        if (k)
            out += "|";
        uint32_t x = c.words[k];
        while (x) {
            int i = __builtin_ctz(x);
            x &= x - 1;
            out += "t" + std::to_string(i);
        }
    }
    out += "]";
    return out;
}

namespace {

int word_m(uint32_t w)
{
    int m = 0;
    while (w) {
        int i = __builtin_ctz(w);
        w &= w - 1;
        m += 1 << i;
    }
    return m;
}

void enum_words(int n, int s_left, int m_left, std::vector<uint32_t>& acc,
                std::vector<std::vector<uint32_t>>& out)
{
    if (s_left == 0) {
        if (m_left == 0)
            out.push_back(acc);
        return;
    }
    if (m_left < s_left)
        return;  // each word has m >= 1
    for (uint32_t w = 1; w < (uint32_t(1) << (n + 1)); ++w) {
        int wm = word_m(w);
        if (wm > m_left - (s_left - 1))
            continue;
        acc.push_back(w);
        enum_words(n, s_left - 1, m_left - wm, acc, out);
        acc.pop_back();
    }
}

}  // namespace

std::vector<Cochain> cobar_slice_basis(const FieldCtx& ctx, const EnPresentation& en,
                                       const TriDeg& T)
{
    std::vector<Cochain> out;
    if (T.s < 0 || T.m < 0)
        return out;
    if (en.inf_cap && T.m >= en.validity_m_bound())
        throw std::domain_error("cobar: tridegree outside the infinity-cap validity bound");
    // words contribute (m_words, w_words) with w_words = m_words - #tau-factors;
    // coefficient sigma tau^t contributes (t, -sdeg - t).
    for (int t = 0; t <= T.m; ++t) {
        int mw = T.m - t;  // words' m-part
        // sdeg from the w-equation: T.w = -sdeg - t + sum over words (2^i - 1)
        // sum (2^i - 1) = mw - (total tau-factor count); enumerate by factor count
        std::vector<std::vector<uint32_t>> ws;
        std::vector<uint32_t> acc;
        enum_words(en.n, T.s, mw, acc, ws);
        for (auto& w : ws) {
            int factors = 0;
            for (uint32_t x : w)
                factors += __builtin_popcount(x);
            int sdeg = -(T.w + t - (mw - factors));
            if (sdeg < 0 || ctx.basis_size(sdeg) == 0)
                continue;
            for (size_t sidx = 0; sidx < ctx.basis_size(sdeg); ++sidx)
                out.push_back(Cochain{sdeg, uint16_t(sidx), t, w});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cochain> differential(const FieldCtx& ctx, const EnPresentation& en, const Cochain& c)
{
    std::vector<Cochain> out;
    auto toggle = [&out](Cochain x) {
        auto it = std::find(out.begin(), out.end(), x);
        if (it != out.end())
            out.erase(it);
        else
            out.push_back(std::move(x));
    };

    // coefficient term: eta_R(sigma tau^t) + sigma tau^t
    //   = sigma sum_{k>=1, C(t,k) odd} rho^{2k - s2(k)} tau^{t-k} tau_0^k-word
    for (int k = 1; k <= c.t; ++k) {
        if ((c.t & k) != k)
            continue;  // binomial C(t,k) even
        uint32_t bits = uint32_t(k);
        int top = 31 - __builtin_clz(bits);
        if (top > en.n) {
            if (en.inf_cap)
                throw std::domain_error("cobar: tau_0 power escapes the infinity cap");
            continue;  // passes through tau_n^2 = 0
        }
        int s2 = __builtin_popcount(bits);
        KClass coeff = ctx.mul(KClass{c.sdeg, {c.sym}}, ctx.rho_power(2 * k - s2));
        for (uint16_t s : coeff.sup) {
            Cochain x;
            x.sdeg = coeff.degree;
            x.sym = s;
            x.t = c.t - k;
            x.words.reserve(c.words.size() + 1);
            x.words.push_back(bits);
            x.words.insert(x.words.end(), c.words.begin(), c.words.end());
            toggle(std::move(x));
        }
    }
    // comultiplication terms: split each word into ordered nonempty pairs
    for (size_t i = 0; i < c.words.size(); ++i) {
        uint32_t w = c.words[i];
        for (uint32_t a = (w - 1) & w; a; a = (a - 1) & w) {
            uint32_t b = w ^ a;  // a, b nonempty
            Cochain x;
            x.sdeg = c.sdeg;
            x.sym = c.sym;
            x.t = c.t;
            x.words.reserve(c.words.size() + 1);
            x.words.insert(x.words.end(), c.words.begin(), c.words.begin() + long(i));
            x.words.push_back(a);
            x.words.push_back(b);
            x.words.insert(x.words.end(), c.words.begin() + long(i) + 1, c.words.end());
            toggle(std::move(x));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

gf2::Matrix build_matrix(const FieldCtx& ctx, const EnPresentation& en,
                         const std::vector<Cochain>& src, const std::vector<Cochain>& dst)
{
    gf2::Matrix M(src.size(), dst.size());
    for (size_t i = 0; i < src.size(); ++i) {
        for (const auto& tgt : differential(ctx, en, src[i])) {
            auto it = std::lower_bound(dst.begin(), dst.end(), tgt);
            if (it == dst.end() || !(*it == tgt))
                throw std::logic_error("cobar differential left the enumerated slice");
            M.row(i).flip(size_t(it - dst.begin()));
        }
    }
    return M;
}

}  // namespace

CobarSlice cobar_slice(const FieldCtx& ctx, const EnPresentation& en, const TriDeg& T)
{
    CobarSlice out;
    out.here = cobar_slice_basis(ctx, en, T);
    out.below = cobar_slice_basis(ctx, en, TriDeg{T.s - 1, T.m, T.w});
    out.above = cobar_slice_basis(ctx, en, TriDeg{T.s + 1, T.m, T.w});
    out.d_in = build_matrix(ctx, en, out.below, out.here);
    out.d_out = build_matrix(ctx, en, out.here, out.above);
    return out;
}

ExtResult ext_oracle(const FieldCtx& ctx, const EnPresentation& en, const TriDeg& T)
{
    CobarSlice sl = cobar_slice(ctx, en, T);
    size_t rank_in = sl.d_in.rank();
    auto ker = sl.d_out.kernel();
    ExtResult res;
    res.dim = ker.size() - rank_in;

    // representatives: kernel vectors reduced modulo the boundary space
    gf2::Echelon bnd(sl.here.size());
    for (size_t i = 0; i < sl.below.size(); ++i)
        bnd.insert(sl.d_in.row(i));
    gf2::Echelon reps(sl.here.size());
    for (const auto& kv : ker) {
        gf2::Vec v(sl.here.size());
        for (size_t j : kv.support())
            v.flip(j);
        v = bnd.reduce(v);
        if (reps.insert(v)) {
            const auto& row = reps.rows().back().second;
            std::string label;
            for (size_t j : row.support()) {
                if (!label.empty())
                    label += " + ";
                label += render(ctx, sl.here[j]);
            }
            res.representatives.push_back(label);
        }
    }
    return res;
}

}  // namespace bpq::cobar
