#include "bpq/pages.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bpq::pages {

void AbelianGroup2::add_torsion(int k)
{
    if (k <= 0)
        return;
    torsion.push_back(k);
    std::sort(torsion.rbegin(), torsion.rend());
}

void AbelianGroup2::merge(const AbelianGroup2& o)
{
    z2_rank += o.z2_rank;
    indeterminate = indeterminate || o.indeterminate;
    for (int k : o.torsion)
        torsion.push_back(k);
    std::sort(torsion.rbegin(), torsion.rend());
}

std::string AbelianGroup2::to_string() const
{
    if (indeterminate)
        return "indeterminate";
    if (z2_rank == 0 && torsion.empty())
        return "0";
    std::string out;
    auto app = [&out](const std::string& s) {
        if (!out.empty())
            out += " + ";
        out += s;
    };
    if (z2_rank == 1)
        app("Z2");
    else if (z2_rank > 1)
        app("Z2^" + std::to_string(z2_rank));
    for (int k : torsion)
        app("Z/" + std::to_string(1LL << k));
    return out;
}

Engine::Engine(FieldCtx ctx, int n, bool inf_cap, Window win, int expected_pages)
    : ctx_(std::move(ctx)), n_(n), inf_cap_(inf_cap), win_(win)
{
    if (win_.m_min < 0)
        win_.m_min = 0;
    mat_m_max_ = win_.m_max + expected_pages + 2;
    mat_s_max_ = win_.s_max + std::max(expected_pages, 1) + 1;
    if (inf_cap_ && mat_m_max_ + mat_s_max_ >= (1 << (n_ + 1)) - 1)
        throw std::domain_error("window inconsistent with the infinity cap: raise N");
    for (int mh = -1; mh <= mat_m_max_; ++mh) {
        for (int s = 0; s <= mat_s_max_; ++s) {
            for (int w = win_.w_min; w <= win_.w_max; ++w) {
                TriDeg T{s, mh + s, w};
                auto basis = monomial::slice_basis(ctx_, n_, T);
                if (basis.empty())
                    continue;
                Slice sl;
                sl.boundaries = gf2::Echelon(basis.size());
                sl.reps.reserve(basis.size());
                for (size_t i = 0; i < basis.size(); ++i) {
                    gf2::Vec v(basis.size());
                    v.set(i);
                    sl.reps.push_back(std::move(v));
                }
                sl.basis = std::move(basis);
                slices_.emplace(T, std::move(sl));
            }
        }
    }
}

bool Engine::in_range(const TriDeg& T) const
{
    int mh = T.m - T.s;
    return mh >= -1 && mh <= mat_m_max_ && T.s >= 0 && T.s <= mat_s_max_ && T.w >= win_.w_min &&
           T.w <= win_.w_max;
}

const Engine::Slice* Engine::slice(const TriDeg& T) const
{
    auto it = slices_.find(T);
    return it == slices_.end() ? nullptr : &it->second;
}

std::vector<TriDeg> Engine::keys() const
{
    std::vector<TriDeg> out;
    out.reserve(slices_.size());
    for (const auto& [k, v] : slices_)
        out.push_back(k);
    return out;
}

size_t Engine::dim(const TriDeg& T) const
{
    const Slice* s = slice(T);
    return s ? s->reps.size() : 0;
}

long Engine::index_of(const std::vector<Mono>& basis, const Mono& m)
{
    auto it = std::lower_bound(basis.begin(), basis.end(), m);
    if (it == basis.end() || !(*it == m))
        return -1;
    return it - basis.begin();
}

gf2::Vec Engine::expand(const TriDeg& T, const std::vector<Mono>& monos) const
{
    const Slice* s = slice(T);
    if (!s) {
        if (!monos.empty())
            throw std::logic_error("expand: monomial outside materialized slice");
        return gf2::Vec(0);
    }
    gf2::Vec v(s->basis.size());
    for (const auto& m : monos) {
        long i = index_of(s->basis, m);
        if (i < 0)
            throw std::logic_error("expand: monomial not in slice basis");
        v.flip(size_t(i));
    }
    return v;
}

TriDeg Engine::shift(rules::Kind kind, int r, const TriDeg& src)
{
    if (kind == rules::Kind::rhoBSS)
        return TriDeg{src.s + 1, src.m, src.w};
    return TriDeg{src.s + r, src.m + r - 1, src.w};
}

std::map<TriDeg, std::vector<gf2::Vec>> Engine::rule_differentials(
    int r, const std::vector<rules::DifferentialRule>& table) const
{
    std::map<TriDeg, std::vector<gf2::Vec>> out;
    rules::Kind kind = table.empty() ? rules::Kind::MASS : table.front().kind;
    for (const auto& [key, sl] : slices_) {
        if (sl.reps.empty())
            continue;
        TriDeg tgt = shift(kind, r, key);
        const Slice* T = slice(tgt);
        bool have_any = false;
        std::vector<gf2::Vec> dvecs;
        dvecs.reserve(sl.reps.size());
        for (const auto& rep : sl.reps) {
            std::vector<Mono> image;
            for (size_t i : rep.support()) {
                for (auto& t : rules::apply_rules(ctx_, table, r, sl.basis[i])) {
                    auto it = std::find(image.begin(), image.end(), t);
                    if (it != image.end())
                        image.erase(it);
                    else
                        image.push_back(std::move(t));
                }
            }
            if (!image.empty())
                have_any = true;
            if (!T) {
                if (!image.empty())
                    throw std::logic_error("differential hits a non-materialized nonempty slice");
                dvecs.emplace_back(0);
                continue;
            }
            gf2::Vec v(T->basis.size());
            for (const auto& m : image) {
                long idx = index_of(T->basis, m);
                if (idx < 0)
                    throw std::logic_error("differential target missing from slice basis");
                v.flip(size_t(idx));
            }
            dvecs.push_back(std::move(v));
        }
        if (have_any)
            out.emplace(key, std::move(dvecs));
    }
    return out;
}

void Engine::rebuild_reps(Slice& s, std::vector<gf2::Vec> new_reps)
{
    gf2::Echelon ech(s.basis.size());
    for (auto& v : new_reps)
        ech.insert(s.boundaries.reduce(std::move(v)));
    s.reps.clear();
    for (const auto& [p, row] : ech.rows())
        s.reps.push_back(row);
}

void Engine::turn_page(rules::Kind kind, int r, const std::map<TriDeg, std::vector<gf2::Vec>>& diffs)
{
    // 1. residues and induced coordinates; detect rule/page mismatches
    struct Induced {
        TriDeg tgt;
        gf2::Matrix coords;  // rows: source reps, cols: target reps
    };
    std::map<TriDeg, Induced> induced;
    for (const auto& [src, dvecs] : diffs) {
        const Slice& S = slices_.at(src);
        TriDeg tgt = shift(kind, r, src);
        const Slice* T = slice(tgt);
        if (!T) {
            // beyond the filtration pad: the kill cannot be verified
            bool nonzero = false;
            for (const auto& v : dvecs)
                nonzero = nonzero || v.any();
            if (nonzero)
                slices_.at(src).flagged = true;
            continue;
        }
        gf2::Matrix M(S.reps.size(), T->reps.size());
        for (size_t i = 0; i < dvecs.size(); ++i) {
            gf2::Vec res = T->boundaries.reduce(dvecs[i]);
            // express in target reps
            for (size_t j = 0; j < T->reps.size(); ++j) {
                long p = T->reps[j].lead();
                if (p >= 0 && res.get(size_t(p))) {
                    res.xor_in(T->reps[j]);
                    M.row(i).flip(j);
                }
            }
            if (res.any())
                throw std::logic_error("differential image is not a page class (rule/page mismatch)");
        }
        induced.emplace(src, Induced{tgt, std::move(M)});
    }

    // 2. d^2 = 0 on page classes
    for (const auto& [src, ind] : induced) {
        auto next = induced.find(ind.tgt);
        if (next == induced.end())
            continue;
        const gf2::Matrix& A = ind.coords;
        const gf2::Matrix& B = next->second.coords;
        for (size_t i = 0; i < A.row_count(); ++i) {
            gf2::Vec comp(B.col_count());
            for (size_t j : A.row(i).support())
                comp.xor_in(B.row(j));
            if (comp.any())
                throw std::logic_error("d^2 != 0 at page " + std::to_string(r));
        }
    }

    // 3. kernels (new source reps) computed against the old state
    std::map<TriDeg, std::vector<gf2::Vec>> new_reps;
    for (const auto& [src, ind] : induced) {
        const Slice& S = slices_.at(src);
        std::vector<gf2::Vec> keep;
        for (const auto& comb : ind.coords.kernel()) {
            gf2::Vec v(S.basis.size());
            for (size_t i : comb.support())
                v.xor_in(S.reps[i]);
            keep.push_back(std::move(v));
        }
        new_reps.emplace(src, std::move(keep));
    }

    // 4. boundaries grow in targets; flags propagate along differentials
    std::set<TriDeg> touched;
    for (const auto& [src, dvecs] : diffs) {
        touched.insert(src);
        TriDeg tgt = shift(kind, r, src);
        auto it = slices_.find(tgt);
        if (it == slices_.end())
            continue;
        touched.insert(tgt);
        for (const auto& v : dvecs)
            it->second.boundaries.insert(v);
        if (slices_.at(src).flagged)
            it->second.flagged = true;
    }

    // 5. rebuild representative echelons of the touched slices only, so
    // untouched labels stay put
    for (const TriDeg& key : touched) {
        Slice& sl = slices_.at(key);
        auto nr = new_reps.find(key);
        rebuild_reps(sl, nr != new_reps.end() ? std::move(nr->second) : std::move(sl.reps));
    }
    ++fired_;
}

std::string Engine::label(const TriDeg& T, const gf2::Vec& rep, bool collapsed) const
{
    long p = rep.lead();
    if (p < 0)
        return "0";
    const Mono& m = slice(T)->basis[size_t(p)];
    return collapsed ? monomial::render_collapsed(ctx_, m, n_, inf_cap_) : monomial::render(ctx_, m);
}

bool Engine::express(const TriDeg& T, gf2::Vec v, std::vector<size_t>& coords) const
{
    const Slice* s = slice(T);
    if (!s)
        return !v.any();
    v = s->boundaries.reduce(std::move(v));
    for (size_t j = 0; j < s->reps.size(); ++j) {
        long p = s->reps[j].lead();
        if (p >= 0 && v.get(size_t(p))) {
            v.xor_in(s->reps[j]);
            coords.push_back(j);
        }
    }
    return !v.any();
}

PageSnapshot Engine::make_snapshot(rules::Kind kind, int r,
                                   const std::map<TriDeg, std::vector<gf2::Vec>>& diffs) const
{
    PageSnapshot snap;
    snap.kind = kind;
    snap.r = r;
    bool collapsed = kind == rules::Kind::MASS;
    for (const auto& [key, sl] : slices_) {
        if (sl.reps.empty())
            continue;
        SliceSnap ss;
        ss.T = key;
        ss.flagged = sl.flagged;
        for (const auto& rep : sl.reps)
            ss.basis.push_back(label(key, rep, collapsed));
        snap.slices.push_back(std::move(ss));
    }
    for (const auto& [src, dvecs] : diffs) {
        const Slice& S = slices_.at(src);
        TriDeg tgt = shift(kind, r, src);
        for (size_t i = 0; i < dvecs.size(); ++i) {
            if (!dvecs[i].any())
                continue;
            std::vector<size_t> coords;
            std::string to;
            if (slice(tgt) && express(tgt, dvecs[i], coords)) {
                for (size_t j : coords) {
                    if (!to.empty())
                        to += " + ";
                    to += label(tgt, slice(tgt)->reps[j], collapsed);
                }
            }
            if (to.empty())
                to = "?";
            snap.arrows.push_back(Arrow{src, label(src, S.reps[i], collapsed), to});
        }
    }
    return snap;
}

PageState Engine::current_state() const
{
    PageState st;
    for (const auto& [key, sl] : slices_) {
        if (sl.reps.empty() && sl.boundaries.dim() == 0)
            continue;
        PageStateSlice ps;
        for (const auto& [p, row] : sl.boundaries.rows())
            ps.boundary_rows.push_back(row);
        ps.reps = sl.reps;
        st.emplace(key, std::move(ps));
    }
    return st;
}

void Engine::run(rules::Kind kind, const std::vector<rules::DifferentialRule>& table,
                 const std::set<int>& state_pages)
{
    std::set<int> pages;
    for (const auto& rule : table)
        pages.insert(rule.page);
    std::set<int> all = pages;
    for (int p : state_pages)
        if (p >= 0)
            all.insert(p);
    for (int r : all) {
        if (state_pages.count(r))
            states_[r] = current_state();
        if (!pages.count(r))
            continue;
        auto diffs = rule_differentials(r, table);
        snaps_.push_back(make_snapshot(kind, r, diffs));
        turn_page(kind, r, diffs);
    }
    snaps_.push_back(make_snapshot(kind, 0, {}));
    if (state_pages.count(-1))
        states_[-1] = current_state();
}

bool Engine::column_trusted(int adams_m) const
{
    return adams_m <= mat_m_max_ - fired_ - 1;
}

bool Engine::v0_matrix(BiDeg d, int s, gf2::Matrix& out) const
{
    TriDeg src{s, d.m + s, d.w}, tgt{s + 1, d.m + s + 1, d.w};
    const Slice* S = slice(src);
    const Slice* T = slice(tgt);
    size_t sdim = S ? S->reps.size() : 0, tdim = T ? T->reps.size() : 0;
    out = gf2::Matrix(sdim, tdim);
    if (!S || sdim == 0)
        return true;
    if (!in_range(tgt))
        return false;
    for (size_t i = 0; i < sdim; ++i) {
        std::vector<Mono> image;
        for (size_t b : S->reps[i].support())
            image.push_back(monomial::mul_v(S->basis[b], 0));
        gf2::Vec v = T ? gf2::Vec(T->basis.size()) : gf2::Vec(0);
        for (const auto& m : image) {
            long idx = T ? index_of(T->basis, m) : -1;
            if (idx < 0)
                return false;
            v.flip(size_t(idx));
        }
        std::vector<size_t> coords;
        if (!express(tgt, v, coords))
            return false;
        for (size_t j : coords)
            out.row(i).flip(j);
    }
    return true;
}

AbelianGroup2 towers_to_groups(const Engine& eng, BiDeg d,
                               const std::function<bool(const Mono&)>& z2_cert)
{
    AbelianGroup2 out;
    int roof = eng.window().s_max;
    std::vector<size_t> dims(roof + 1, 0);
    std::vector<gf2::Matrix> V(roof);  // V[s] : level s -> s+1
    for (int s = 0; s <= roof; ++s) {
        TriDeg T{s, d.m + s, d.w};
        const auto* sl = eng.slice(T);
        dims[s] = sl ? sl->reps.size() : 0;
        if (sl && sl->flagged) {
            out.indeterminate = true;
            return out;
        }
    }
    for (int s = 0; s < roof; ++s) {
        if (!eng.v0_matrix(d, s, V[s])) {
            out.indeterminate = true;
            return out;
        }
    }
    // P[s][e] = rank of the composite V_{e-1} ... V_s (levels s..e)
    auto composite_rank = [&](int s, int e) -> size_t {
        if (e == s)
            return dims[s];
        gf2::Matrix M = V[s];
        for (int k = s + 1; k < e; ++k) {
            gf2::Matrix next(M.row_count(), V[k].col_count());
            for (size_t i = 0; i < M.row_count(); ++i)
                for (size_t j : M.row(i).support())
                    next.row(i).xor_in(V[k].row(j));
            M = std::move(next);
        }
        return M.rank();
    };
    std::vector<std::vector<size_t>> P(roof + 2, std::vector<size_t>(roof + 2, 0));
    for (int s = 0; s <= roof; ++s)
        for (int e = s; e <= roof; ++e)
            P[s][e] = composite_rank(s, e);
    auto alive = [&](int s, int e) -> long {
        // towers born at level s still alive at level e
        long a = long(P[s][e]);
        if (s > 0)
            a -= long(P[s - 1][e]);
        return a;
    };
    for (int s = 0; s <= roof; ++s) {
        long at_roof = alive(s, roof);
        if (at_roof > 0) {
            // reaching the roof: certify as honest 2-adic towers
            const auto* sl = eng.slice(TriDeg{s, d.m + s, d.w});
            long certified = 0;
            for (const auto& rep : sl->reps) {
                long p = rep.lead();
                if (p >= 0 && z2_cert(sl->basis[size_t(p)]))
                    ++certified;
            }
            if (certified < at_roof) {
                out.indeterminate = true;
                return out;
            }
            out.z2_rank += int(at_roof);
        }
        for (int e = s; e < roof; ++e) {
            long bars = alive(s, e) - alive(s, e + 1);
            for (long b = 0; b < bars; ++b)
                out.add_torsion(e - s + 1);
        }
    }
    return out;
}

std::string pages_to_json(const Engine& eng, bool collapsed_names)
{
    (void)collapsed_names;
    std::ostringstream os;
    os << "[";
    bool first_page = true;
    for (const auto& snap : eng.snapshots()) {
        if (!first_page)
            os << ",";
        first_page = false;
        os << "\n{\"kind\":\"" << (snap.kind == rules::Kind::rhoBSS ? "rhoBSS" : "MASS")
           << "\",\"r\":" << (snap.r == 0 ? std::string("\"infty\"") : std::to_string(snap.r))
           << ",\"slices\":[";
        bool first = true;
        for (const auto& sl : snap.slices) {
            int mh = sl.T.m - sl.T.s;
            if (mh < eng.window().m_min || mh > eng.window().m_max || sl.T.s > eng.window().s_max)
                continue;
            if (!first)
                os << ",";
            first = false;
            os << "{\"s\":" << sl.T.s << ",\"m\":" << sl.T.m << ",\"w\":" << sl.T.w
               << ",\"basis\":[";
            for (size_t i = 0; i < sl.basis.size(); ++i)
                os << (i ? "," : "") << "\"" << sl.basis[i] << "\"";
            os << "]}";
        }
        os << "],\"d\":[";
        first = true;
        for (const auto& a : snap.arrows) {
            int mh = a.from_deg.m - a.from_deg.s;
            if (mh < eng.window().m_min || mh > eng.window().m_max ||
                a.from_deg.s > eng.window().s_max)
                continue;
            if (!first)
                os << ",";
            first = false;
            os << "{\"from\":\"" << a.from << "\",\"to\":\"" << a.to << "\"}";
        }
        os << "]}";
    }
    os << "\n]";
    return os.str();
}

}  // namespace bpq::pages
