#include "bpq/monomial.hpp"

namespace bpq::monomial {

std::string render(const milnor::FieldCtx& ctx, const Mono& m)
{
    std::string out;
    auto app = [&out](const std::string& s) {
        if (!out.empty())
            out += " ";
        out += s;
    };
    if (m.sdeg > 0)
        app(ctx.symbol_name(m.sdeg, m.sym));
    if (m.t == 1)
        app("tau");
    else if (m.t > 1)
        app("tau^" + std::to_string(m.t));
    for (size_t i = 0; i < m.e.size(); ++i) {
        if (!m.e[i])
            continue;
        std::string v = "v" + std::to_string(i);
        if (m.e[i] > 1)
            v += "^" + std::to_string(int(m.e[i]));
        app(v);
    }
    return out.empty() ? "1" : out;
}

std::string render_collapsed(const milnor::FieldCtx& ctx, const Mono& m, int n, bool inf_cap)
{
    // only symbol-free / rho-power coefficients get decorated names
    bool rho_like = m.sdeg == 0;
    if (m.sdeg > 0) {
        const std::string nm = ctx.symbol_name(m.sdeg, m.sym);
        rho_like = nm.rfind("rho", 0) == 0;
    }
    int i0 = -1;
    for (size_t i = 0; i < m.e.size(); ++i)
        if (m.e[i]) {
            i0 = int(i);
            break;
        }
    if (!rho_like || i0 < 0)
        return render(ctx, m);

    int period = inf_cap ? 0 : 1 << (n + 1);
    int unit = 1 << (i0 + 1);
    if (m.t % unit != 0)
        return render(ctx, m);
    int j = m.t / unit, b = 0;
    if (!inf_cap) {
        int jmax = 1 << (n - i0);  // decorations run below the tau-period
        b = j / jmax;
        j = j % jmax;
    }
    int a = m.sdeg;

    std::string out;
    auto app = [&out](const std::string& s) {
        if (!out.empty())
            out += " ";
        out += s;
    };
    bool w_form = a >= 1 && j >= 1 && i0 >= 0;
    if (w_form)
        --a;
    if (a == 1)
        app("rho");
    else if (a > 1)
        app("rho^" + std::to_string(a));
    if (b >= 1)
        app("tau^" + std::to_string(period * b));
    for (size_t i = 0; i < m.e.size(); ++i) {
        if (!m.e[i])
            continue;
        int rest = m.e[i];
        std::string head;
        if (int(i) == i0) {
            if (w_form)
                head = "w" + std::to_string(i) + "(" + std::to_string(j) + ")";
            else if (j > 0)
                head = "v" + std::to_string(i) + "(" + std::to_string(j) + ")";
            if (!head.empty()) {
                app(head);
                --rest;
            }
        }
        if (rest > 0) {
            std::string v = "v" + std::to_string(i);
            if (rest > 1)
                v += "^" + std::to_string(rest);
            app(v);
        }
    }
    if (out.empty())
        out = "1";
    return out;
}

namespace {

void enumerate_v(int n, int s_left, int m_left, std::vector<uint8_t>& e, size_t i,
                 std::vector<std::vector<uint8_t>>& out)
{
    if (i == size_t(n + 1)) {
        if (s_left == 0 && m_left == 0)
            out.push_back(e);
        return;
    }
    int wt = 1 << i;
    int maxe = std::min(s_left, wt == 0 ? s_left : m_left / wt);
    for (int k = 0; k <= maxe; ++k) {
        e[i] = uint8_t(k);
        enumerate_v(n, s_left - k, m_left - k * wt, e, i + 1, out);
    }
    e[i] = 0;
}

}  // namespace

std::vector<Mono> slice_basis(const milnor::FieldCtx& ctx, int n, const TriDeg& T)
{
    std::vector<Mono> out;
    if (T.s < 0 || T.m < 0)
        return out;
    for (int t = 0; t <= T.m; ++t) {
        // symbol degree forced by (s, m, w) and t
        int D = T.m - 2 * t - T.s - T.w;
        if (D < 0 || ctx.basis_size(D) == 0)
            continue;
        std::vector<std::vector<uint8_t>> ev;
        std::vector<uint8_t> e(n + 1, 0);
        enumerate_v(n, T.s, T.m - t, e, 0, ev);
        for (const auto& ee : ev)
            for (size_t sidx = 0; sidx < ctx.basis_size(D); ++sidx)
                out.push_back(Mono{D, uint16_t(sidx), t, ee});
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace bpq::monomial
