#ifndef BPQ_PAGES_HPP
#define BPQ_PAGES_HPP

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bpq/gf2.hpp"
#include "bpq/milnor.hpp"
#include "bpq/monomial.hpp"
#include "bpq/rules.hpp"

namespace bpq::pages {

using milnor::BiDeg;
using milnor::FieldCtx;
using monomial::Mono;
using monomial::TriDeg;

struct Window {
    int m_min = 0, m_max = 12;  // Adams column m - s
    int w_min = -13, w_max = 4;
    int s_max = 14;
};

/* Additive 2-group: finite cyclic orders 2^k plus 2-adic free rank. */
struct AbelianGroup2 {
    std::vector<int> torsion;  // exponents k (order 2^k), sorted descending
    int z2_rank = 0;
    bool indeterminate = false;

    bool operator==(const AbelianGroup2&) const = default;
    std::string to_string() const;
    void add_torsion(int k);
    void merge(const AbelianGroup2& o);
};

struct Arrow {
    TriDeg from_deg;
    std::string from, to;
};

struct SliceSnap {
    TriDeg T;
    std::vector<std::string> basis;
    bool flagged = false;
};

struct PageSnapshot {
    rules::Kind kind;
    int r = 0;  // 0 = terminal page of the phase
    std::vector<SliceSnap> slices;
    std::vector<Arrow> arrows;
};

/* Frozen copy of the subquotient state at one page (per nonempty slice). */
struct PageStateSlice {
    std::vector<gf2::Vec> boundary_rows;
    std::vector<gf2::Vec> reps;
};
using PageState = std::map<TriDeg, PageStateSlice>;

/* Windowed tri-graded F2 spectral sequence with E1-monomial coordinates.
 * Slices are exact; a padded window absorbs edge effects and anything the
 * pad could not protect is flagged, never reported. */
class Engine {
public:
    Engine(FieldCtx ctx, int n, bool inf_cap, Window win, int expected_pages);

    const FieldCtx& ctx() const { return ctx_; }
    int n() const { return n_; }
    bool inf_cap() const { return inf_cap_; }
    const Window& window() const { return win_; }
    int max_internal_m() const { return mat_m_max_ + mat_s_max_; }

    struct Slice {
        std::vector<Mono> basis;
        gf2::Echelon boundaries;
        std::vector<gf2::Vec> reps;  // echelon by lead, mutually reduced
        bool flagged = false;
    };

    bool in_range(const TriDeg& T) const;
    const Slice* slice(const TriDeg& T) const;
    std::vector<TriDeg> keys() const;
    size_t dim(const TriDeg& T) const;

    /* locate a monomial in a slice basis */
    static long index_of(const std::vector<Mono>& basis, const Mono& m);
    gf2::Vec expand(const TriDeg& T, const std::vector<Mono>& monos) const;

    static TriDeg shift(rules::Kind kind, int r, const TriDeg& src);

    /* rule-driven differential vectors for every slice at page r; outer map
     * keyed by source slice, one target-E1 vector per rep */
    std::map<TriDeg, std::vector<gf2::Vec>> rule_differentials(
        int r, const std::vector<rules::DifferentialRule>& table) const;

    /* homology step; diffs as produced by rule_differentials (or discovery) */
    void turn_page(rules::Kind kind, int r, const std::map<TriDeg, std::vector<gf2::Vec>>& diffs);

    /* run one phase; captures page snapshots (chart/serialization data) at
     * every differential-bearing page plus the terminal page, and deep state
     * copies at the requested page numbers (key -1 = terminal state) */
    void run(rules::Kind kind, const std::vector<rules::DifferentialRule>& table,
             const std::set<int>& state_pages = {});

    const std::vector<PageSnapshot>& snapshots() const { return snaps_; }
    const std::map<int, PageState>& states() const { return states_; }
    PageState current_state() const;

    std::string label(const TriDeg& T, const gf2::Vec& rep, bool collapsed) const;
    /* express an E1 vector in the current page basis of slice T; returns
     * rep indices; false if the vector is not a page class */
    bool express(const TriDeg& T, gf2::Vec v, std::vector<size_t>& coords) const;

    /* v0-multiplication matrix between consecutive filtration levels of one
     * Adams bidegree; false on failure (edge effect) */
    bool v0_matrix(BiDeg d, int s, gf2::Matrix& out) const;

    bool column_trusted(int adams_m) const;
    int pages_fired() const { return fired_; }

private:
    FieldCtx ctx_;
    int n_;
    bool inf_cap_;
    Window win_;
    int mat_m_max_, mat_s_max_;
    int fired_ = 0;
    std::map<TriDeg, Slice> slices_;
    std::vector<PageSnapshot> snaps_;
    std::map<int, PageState> states_;

    void rebuild_reps(Slice& s, std::vector<gf2::Vec> new_reps);
    PageSnapshot make_snapshot(rules::Kind kind, int r,
                               const std::map<TriDeg, std::vector<gf2::Vec>>& diffs) const;
};

/* v0-tower decomposition of one Adams bidegree at E_infty.  z2_cert decides
 * whether a tower that reaches the filtration roof is an honest Z2 (its
 * bottom class is v0-free in the closed-form presentation). */
AbelianGroup2 towers_to_groups(const Engine& eng, BiDeg d,
                               const std::function<bool(const Mono&)>& z2_cert);

std::string pages_to_json(const Engine& eng, bool collapsed_names);

}  // namespace bpq::pages

#endif
