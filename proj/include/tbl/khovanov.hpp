// Cube-of-resolutions Khovanov chain complex over GF(2), reduced via the
// subcomplex of labelings carrying u_- on the marked circle, the transverse
// chain psi, and homology by sparse elimination.
//
// Gradings: i(v) = |v| - n_minus and q(x) = (#u+ - #u-) + |v| + n_plus
// - 2 n_minus, so the oriented resolution labeled entirely by u_- sits at
// i = 0, q = sl. Mod 2 the cube differential needs no edge signs.
//
// States are enumerated in increasing numeric order, circles are numbered
// by smallest arc id, labelings run in colexicographic order of the u_+
// set, so every build is deterministic.
#pragma once

#include "tbl/braid.hpp"
#include "tbl/diagram.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace tbl {

struct ResolutionState {
    std::uint32_t bits = 0;  // bit t: resolution chosen at crossing t+1
    bool operator==(const ResolutionState&) const = default;
};

struct CircleSet {
    int count = 0;
    std::vector<int> arc_to_circle;  // circle ids ordered by smallest arc
    int marked_circle = 0;
};

// vertical (identity) smoothing at crossing t iff the chosen resolution is
// the oriented one there: bit 0 for a positive crossing, bit 1 for a
// negative crossing.
inline CircleSet resolve(const LinkDiagram& d, ResolutionState v) {
    int n = d.crossing_count(), b = d.strands;
    CircleSet cs;
    if (n == 0) {
        cs.count = b;
        cs.arc_to_circle.resize(b);
        for (int s = 0; s < b; s++) cs.arc_to_circle[s] = s;
        cs.marked_circle = 0;
        return cs;
    }
    int arcs = b * n;
    std::vector<int> par(arcs);
    for (int i = 0; i < arcs; i++) par[i] = i;
    auto find = [&](int x) {
        while (par[x] != x) { par[x] = par[par[x]]; x = par[x]; }
        return x;
    };
    auto unite = [&](int x, int y) {
        x = find(x); y = find(y);
        if (x != y) par[std::max(x, y)] = std::min(x, y);
    };
    for (int t = 0; t < n; t++) {
        int l = d.crossings[t].level - 1;  // 0-based strand position
        bool vertical = (d.crossings[t].sign > 0) == (((v.bits >> t) & 1) == 0);
        for (int s = 0; s < b; s++)
            if (s != l && s != l + 1) unite(d.arc_id(s, t - 1), d.arc_id(s, t));
        if (vertical) {
            unite(d.arc_id(l, t - 1), d.arc_id(l, t));
            unite(d.arc_id(l + 1, t - 1), d.arc_id(l + 1, t));
        } else {
            unite(d.arc_id(l, t - 1), d.arc_id(l + 1, t - 1));
            unite(d.arc_id(l, t), d.arc_id(l + 1, t));
        }
    }
    cs.arc_to_circle.assign(arcs, -1);
    int m = 0;
    for (int i = 0; i < arcs; i++)
        if (find(i) == i) cs.arc_to_circle[i] = m++;
    for (int i = 0; i < arcs; i++) cs.arc_to_circle[i] = cs.arc_to_circle[find(i)];
    cs.count = m;
    cs.marked_circle = cs.arc_to_circle[d.marked_arc()];
    return cs;
}

inline ResolutionState oriented_state(const LinkDiagram& d) {
    ResolutionState v;
    for (int t = 0; t < d.crossing_count(); t++)
        if (d.crossings[t].sign < 0) v.bits |= std::uint32_t(1) << t;
    return v;
}

struct KhOptions {
    int max_crossings_full = 20;
    int max_crossings_window = 24;
    std::uint64_t max_slice_generators = std::uint64_t(1) << 27;
    std::uint64_t d_squared_check_limit = std::uint64_t(1) << 21;
};

struct KhGenerator {
    std::uint32_t state;
    std::uint32_t labels;  // bit per circle, u+ = 1; marked circle bit is 0 (reduced)
};

// Bigraded complex; groups hold basis labels, the differential d^{i,q} is
// stored as sparse columns of local indices into group (i+1, q).
struct ChainComplexGF2 {
    int n_plus = 0, n_minus = 0, strands = 0;
    bool reduced = true;
    std::map<std::pair<int, int>, std::vector<KhGenerator>> groups;          // (i,q)
    std::map<std::pair<int, int>, std::vector<std::vector<std::uint32_t>>> diff;  // d^{i,q}

    std::uint64_t total_generators() const {
        std::uint64_t t = 0;
        for (auto& [k, g] : groups) t += g.size();
        return t;
    }
};

namespace kh_detail {

inline std::uint32_t binom(int n, int k) {
    static const auto table = [] {
        std::array<std::array<std::uint32_t, 33>, 33> t{};
        for (int i = 0; i < 33; i++) {
            t[i][0] = 1;
            for (int j = 1; j <= i; j++)
                t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
        }
        return t;
    }();
    if (k < 0 || k > n || n < 0 || n > 32) return 0;
    return table[n][k];
}

// colex rank of the u+ set among j-subsets of the free circles (all circles
// except the marked one when reduced)
inline std::uint32_t label_rank(std::uint32_t mask, int m, int marked) {
    std::uint32_t r = 0;
    int fi = 0, seen = 0;
    for (int c = 0; c < m; c++) {
        if (c == marked) continue;
        if ((mask >> c) & 1) r += binom(fi, ++seen);
        fi++;
    }
    return r;
}

// number of u+ choices for a state with m circles at quantum grading q
inline int jplus_for_q(int q, int m, int wt, int n_plus, int n_minus, bool reduced) {
    int s = q - wt - n_plus + 2 * n_minus + m;  // = 2 * #u+
    if (s < 0 || (s & 1)) return -1;
    int j = s / 2;
    if (j > (reduced ? m - 1 : m)) return -1;
    return j;
}

// Sparse GF(2) column reduction; pivot on the largest row index. Ranks of
// the slice matrices are accumulated column by column so nothing but the
// pivot columns is retained.
class ColumnReducer {
  public:
    explicit ColumnReducer(std::size_t rows) : pivots_(rows) {}
    // consumes col (sorted ascending, no duplicates)
    void add(std::vector<std::uint32_t>& col) {
        while (!col.empty()) {
            std::uint32_t p = col.back();
            if (pivots_[p].empty()) {
                pivots_[p] = col;
                rank_++;
                return;
            }
            xor_into(col, pivots_[p]);
        }
    }
    // reduces col in place without storing it; true iff it reduces to zero
    bool reduces_to_zero(std::vector<std::uint32_t>& col) const {
        while (!col.empty()) {
            std::uint32_t p = col.back();
            if (pivots_[p].empty()) return false;
            xor_into(col, pivots_[p]);
        }
        return true;
    }
    std::uint64_t rank() const { return rank_; }

  private:
    static void xor_into(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        static thread_local std::vector<std::uint32_t> tmp;
        tmp.clear();
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) tmp.push_back(a[i++]);
            else if (a[i] > b[j]) tmp.push_back(b[j++]);
            else { i++; j++; }
        }
        tmp.insert(tmp.end(), a.begin() + i, a.end());
        tmp.insert(tmp.end(), b.begin() + j, b.end());
        a.swap(tmp);
    }
    std::vector<std::vector<std::uint32_t>> pivots_;
    std::uint64_t rank_ = 0;
};

// Shared machinery for one diagram: per-state circle counts, state layers
// by weight, and streaming column generation for any (q, layer) block.
class CubeContext {
  public:
    CubeContext(const LinkDiagram& d, bool reduced) : d_(d), reduced_(reduced) {
        n_ = d.crossing_count();
        b_ = d.strands;
        if (n_ > 31) throw ResourceError("crossing count exceeds engine limit of 31");
        nplus_ = d.n_plus();
        nminus_ = d.n_minus();
        m_.assign(std::size_t(1) << n_, 0);
        CircleSet cs;
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << n_); v++) {
            cs = resolve(d_, ResolutionState{std::uint32_t(v)});
            m_[v] = std::uint8_t(cs.count);
        }
        layers_.resize(n_ + 1);
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << n_); v++)
            layers_[std::popcount(v)].push_back(std::uint32_t(v));
        qmin_ = 1 << 30;
        qmax_ = -(1 << 30);
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << n_); v++) {
            int wt = std::popcount(v), m = m_[v];
            int base = wt + nplus_ - 2 * nminus_;
            qmin_ = std::min(qmin_, base - m);
            qmax_ = std::max(qmax_, base + (reduced_ ? m - 2 : m));
        }
    }

    int n() const { return n_; }
    int n_plus() const { return nplus_; }
    int n_minus() const { return nminus_; }
    int qmin() const { return qmin_; }
    int qmax() const { return qmax_; }
    int homological_degree(int wt) const { return wt - nminus_; }
    const std::vector<std::uint32_t>& layer(int wt) const { return layers_[wt]; }
    int circle_count(std::uint32_t v) const { return m_[v]; }

    int q_of(std::uint32_t state, std::uint32_t labels) const {
        int m = m_[state];
        int j = std::popcount(labels);
        int wt = std::popcount(state);
        return (2 * j - m) + wt + nplus_ - 2 * nminus_;
    }

    // prefix offsets of generators per state in layer wt at grading q
    std::vector<std::uint64_t> offsets(int wt, int q) const {
        const auto& st = layers_[wt];
        std::vector<std::uint64_t> off(st.size() + 1, 0);
        for (std::size_t i = 0; i < st.size(); i++) {
            int m = m_[st[i]];
            int j = jplus_for_q(q, m, wt, nplus_, nminus_, reduced_);
            std::uint64_t c = (j < 0) ? 0 : binom((reduced_ ? m - 1 : m), j);
            off[i + 1] = off[i] + c;
        }
        return off;
    }

    // index of a state within its layer: numeric order over fixed popcount
    // equals colex order on the bit set
    static std::uint64_t state_rank(std::uint32_t v) {
        std::uint64_t r = 0;
        int k = 0;
        while (v) {
            int p = std::countr_zero(v);
            v &= v - 1;
            r += binom(p, ++k);
        }
        return r;
    }

    struct EdgeTransform {
        int t;
        std::uint32_t target;
        bool split;
        int a, b, c, dd;   // merge: circles a,b -> c ; split: a -> c,dd
        int markw;         // marked circle in the target
        std::vector<int> remap;
        std::uint64_t toff;  // offset of the target state's block
        int tm;
    };

    // Streams the columns of d^{wt,q} (sources in layer wt, targets in
    // layer wt+1) in generator order. sink(col) receives each column as
    // sorted local indices into the (wt+1, q) block.
    template <typename Sink>
    void for_each_column(int wt, int q,
                         const std::vector<std::uint64_t>& target_off,
                         Sink&& sink) const {
        const auto& st = layers_[wt];
        std::vector<EdgeTransform> edges;
        std::vector<std::uint32_t> col;
        CircleSet cv, cw;
        for (std::size_t si = 0; si < st.size(); si++) {
            std::uint32_t v = st[si];
            int m = m_[v];
            int j = jplus_for_q(q, m, wt, nplus_, nminus_, reduced_);
            if (j < 0) continue;
            int free = reduced_ ? m - 1 : m;
            if (binom(free, j) == 0) continue;
            cv = resolve(d_, ResolutionState{v});
            int marked = reduced_ ? cv.marked_circle : -1;
            edges.clear();
            for (int t = 0; t < n_; t++) {
                if ((v >> t) & 1) continue;
                std::uint32_t vw = v | (std::uint32_t(1) << t);
                cw = resolve(d_, ResolutionState{vw});
                EdgeTransform e;
                e.t = t;
                e.target = vw;
                e.tm = cw.count;
                e.markw = reduced_ ? cw.marked_circle : -1;
                e.split = (cw.count == m + 1);
                e.remap.assign(m, -1);
                e.a = e.b = e.c = e.dd = -1;
                if (!e.split) {
                    for (int s = 0; s < d_.arc_count(); s++) {
                        int x = cv.arc_to_circle[s];
                        if (e.remap[x] < 0) e.remap[x] = cw.arc_to_circle[s];
                    }
                    std::vector<int> hits(cw.count, 0);
                    for (int x = 0; x < m; x++) hits[e.remap[x]]++;
                    for (int y = 0; y < cw.count; y++)
                        if (hits[y] == 2) e.c = y;
                    for (int x = 0; x < m; x++)
                        if (e.remap[x] == e.c) (e.a < 0 ? e.a : e.b) = x;
                } else {
                    std::vector<int> first(m, -1);
                    for (int s = 0; s < d_.arc_count(); s++) {
                        int x = cv.arc_to_circle[s], y = cw.arc_to_circle[s];
                        if (first[x] < 0) { first[x] = y; e.remap[x] = y; }
                        else if (first[x] != y && e.a < 0) { e.a = x; e.c = first[x]; e.dd = y; }
                    }
                }
                e.toff = target_off[state_rank(vw)];
                edges.push_back(std::move(e));
            }
            // labelings: colex enumeration of j-subsets of the free circles
            std::vector<int> freev;
            for (int c = 0; c < m; c++)
                if (c != marked) freev.push_back(c);
            std::vector<int> comb(j);
            for (int x = 0; x < j; x++) comb[x] = x;
            while (true) {
                std::uint32_t mask = 0;
                for (int x : comb) mask |= std::uint32_t(1) << freev[x];
                col.clear();
                append_targets(edges, m, marked, mask, col);
                std::sort(col.begin(), col.end());
                // cancel duplicate entries mod 2
                std::size_t o = 0;
                for (std::size_t i2 = 0; i2 < col.size();) {
                    std::size_t j2 = i2;
                    while (j2 < col.size() && col[j2] == col[i2]) j2++;
                    if ((j2 - i2) & 1) col[o++] = col[i2];
                    i2 = j2;
                }
                col.resize(o);
                sink(v, mask, col);
                if (j == 0) break;  // single empty combination
                int x = j - 1;
                while (x >= 0 && comb[x] == int(freev.size()) - (j - x)) x--;
                if (x < 0) break;
                comb[x]++;
                for (int y = x + 1; y < j; y++) comb[y] = comb[y - 1] + 1;
            }
        }
    }

    // differential of a single labeled state (used for cycle checks)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> boundary(std::uint32_t v,
                                                                  std::uint32_t mask) const {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        CircleSet cv = resolve(d_, ResolutionState{v});
        int m = cv.count;
        int marked = reduced_ ? cv.marked_circle : -1;
        for (int t = 0; t < n_; t++) {
            if ((v >> t) & 1) continue;
            std::uint32_t vw = v | (std::uint32_t(1) << t);
            CircleSet cw = resolve(d_, ResolutionState{vw});
            bool split = (cw.count == m + 1);
            std::vector<int> remap(m, -1);
            int a = -1, b2 = -1, c = -1, dd = -1;
            if (!split) {
                for (int s = 0; s < d_.arc_count(); s++) {
                    int x = cv.arc_to_circle[s];
                    if (remap[x] < 0) remap[x] = cw.arc_to_circle[s];
                }
                std::vector<int> hits(cw.count, 0);
                for (int x = 0; x < m; x++) hits[remap[x]]++;
                for (int y = 0; y < cw.count; y++)
                    if (hits[y] == 2) c = y;
                for (int x = 0; x < m; x++)
                    if (remap[x] == c) (a < 0 ? a : b2) = x;
                std::uint32_t base = 0;
                for (int x = 0; x < m; x++)
                    if (x != a && x != b2 && ((mask >> x) & 1)) base |= std::uint32_t(1) << remap[x];
                bool pa = (mask >> a) & 1, pb = (mask >> b2) & 1;
                if (pa && pb) out.push_back({vw, base | (std::uint32_t(1) << c)});
                else if (pa || pb) out.push_back({vw, base});
                // u- u- merges to zero
            } else {
                std::vector<int> first(m, -1);
                for (int s = 0; s < d_.arc_count(); s++) {
                    int x = cv.arc_to_circle[s], y = cw.arc_to_circle[s];
                    if (first[x] < 0) { first[x] = y; remap[x] = y; }
                    else if (first[x] != y && a < 0) { a = x; c = first[x]; dd = y; }
                }
                std::uint32_t base = 0;
                for (int x = 0; x < m; x++)
                    if (x != a && ((mask >> x) & 1)) base |= std::uint32_t(1) << remap[x];
                if ((mask >> a) & 1) {
                    out.push_back({vw, base | (std::uint32_t(1) << c)});
                    out.push_back({vw, base | (std::uint32_t(1) << dd)});
                } else {
                    out.push_back({vw, base});
                }
            }
        }
        // mod 2
        std::sort(out.begin(), out.end());
        std::vector<std::pair<std::uint32_t, std::uint32_t>> red;
        for (std::size_t i = 0; i < out.size();) {
            std::size_t j = i;
            while (j < out.size() && out[j] == out[i]) j++;
            if ((j - i) & 1) red.push_back(out[i]);
            i = j;
        }
        return red;
    }

    bool reduced() const { return reduced_; }
    const LinkDiagram& diagram() const { return d_; }

  private:
    void append_targets(const std::vector<EdgeTransform>& edges, int m, int marked,
                        std::uint32_t mask, std::vector<std::uint32_t>& col) const {
        for (const auto& e : edges) {
            if (!e.split) {
                bool pa = (mask >> e.a) & 1, pb = (mask >> e.b) & 1;
                if (!pa && !pb) continue;  // u- u- -> 0
                std::uint32_t wm = 0;
                for (int x = 0; x < m; x++)
                    if (x != e.a && x != e.b && ((mask >> x) & 1))
                        wm |= std::uint32_t(1) << e.remap[x];
                if (pa && pb) wm |= std::uint32_t(1) << e.c;
                col.push_back(std::uint32_t(e.toff + label_rank(wm, e.tm, e.markw)));
            } else {
                std::uint32_t base = 0;
                for (int x = 0; x < m; x++)
                    if (x != e.a && ((mask >> x) & 1)) base |= std::uint32_t(1) << e.remap[x];
                if ((mask >> e.a) & 1) {
                    std::uint32_t w1 = base | (std::uint32_t(1) << e.c);
                    std::uint32_t w2 = base | (std::uint32_t(1) << e.dd);
                    col.push_back(std::uint32_t(e.toff + label_rank(w1, e.tm, e.markw)));
                    col.push_back(std::uint32_t(e.toff + label_rank(w2, e.tm, e.markw)));
                } else {
                    col.push_back(std::uint32_t(e.toff + label_rank(base, e.tm, e.markw)));
                }
            }
        }
    }

    LinkDiagram d_;
    bool reduced_;
    int n_, b_, nplus_, nminus_;
    int qmin_, qmax_;
    std::vector<std::uint8_t> m_;
    std::vector<std::vector<std::uint32_t>> layers_;
};

}  // namespace kh_detail

inline ChainComplexGF2 build_complex(const LinkDiagram& d, bool reduced,
                                     std::optional<std::pair<int, int>> q_window = std::nullopt,
                                     const KhOptions& opts = {}) {
    if (q_window && q_window->first > q_window->second)
        throw ParseError("empty q window");
    int cap = q_window ? opts.max_crossings_window : opts.max_crossings_full;
    if (d.crossing_count() > cap)
        throw ResourceError("crossing count " + std::to_string(d.crossing_count()) +
                            " over cap " + std::to_string(cap));
    kh_detail::CubeContext cube(d, reduced);
    ChainComplexGF2 cx;
    cx.n_plus = cube.n_plus();
    cx.n_minus = cube.n_minus();
    cx.strands = d.strands;
    cx.reduced = reduced;
    int qlo = q_window ? std::max(q_window->first, cube.qmin()) : cube.qmin();
    int qhi = q_window ? std::min(q_window->second, cube.qmax()) : cube.qmax();
    // parity of q is fixed by the diagram
    for (int q = qlo; q <= qhi; q++) {
        std::uint64_t slice = 0;
        std::vector<std::vector<std::uint64_t>> offs(cube.n() + 2);
        for (int wt = 0; wt <= cube.n(); wt++) {
            offs[wt] = cube.offsets(wt, q);
            slice += offs[wt].back();
        }
        if (slice == 0) continue;
        if (slice > opts.max_slice_generators)
            throw ResourceError("q-slice generator count over cap");
        for (int wt = 0; wt <= cube.n(); wt++) {
            if (offs[wt].back() == 0) continue;
            int i = cube.homological_degree(wt);
            auto& gens = cx.groups[{i, q}];
            gens.reserve(offs[wt].back());
            auto& cols = cx.diff[{i, q}];
            cols.reserve(offs[wt].back());
            const auto& target_off = (wt < cube.n()) ? offs[wt + 1] : offs[wt];
            cube.for_each_column(wt, q, target_off,
                                 [&](std::uint32_t v, std::uint32_t mask,
                                     std::vector<std::uint32_t>& col) {
                                     gens.push_back({v, mask});
                                     if (wt < cube.n()) cols.push_back(col);
                                     else cols.emplace_back();
                                 });
        }
    }
    if (cx.total_generators() <= opts.d_squared_check_limit) {
        for (auto& [iq, cols] : cx.diff) {
            auto next = cx.diff.find({iq.first + 1, iq.second});
            if (next == cx.diff.end()) continue;
            for (auto& col : cols) {
                std::vector<std::uint32_t> acc;
                for (auto t : col) {
                    const auto& c2 = next->second[t];
                    std::vector<std::uint32_t> merged;
                    std::set_symmetric_difference(acc.begin(), acc.end(), c2.begin(),
                                                  c2.end(), std::back_inserter(merged));
                    acc.swap(merged);
                }
                if (!acc.empty()) throw std::logic_error("d o d != 0");
            }
        }
    }
    return cx;
}

inline std::map<std::pair<int, int>, std::uint64_t> homology_dims(const ChainComplexGF2& cx) {
    std::map<std::pair<int, int>, std::uint64_t> ranks;
    for (auto& [iq, cols] : cx.diff) {
        auto next = cx.groups.find({iq.first + 1, iq.second});
        if (next == cx.groups.end()) continue;
        kh_detail::ColumnReducer red(next->second.size());
        std::vector<std::uint32_t> col;
        for (auto& c : cols) {
            col = c;
            red.add(col);
        }
        ranks[iq] = red.rank();
    }
    std::map<std::pair<int, int>, std::uint64_t> out;
    for (auto& [iq, gens] : cx.groups) {
        std::uint64_t r_out = ranks.count(iq) ? ranks[iq] : 0;
        std::uint64_t r_in = 0;
        auto prev = ranks.find({iq.first - 1, iq.second});
        if (prev != ranks.end()) r_in = prev->second;
        std::uint64_t h = gens.size() - r_out - r_in;
        if (h) out[iq] = h;
    }
    return out;
}

// Streams one q-slice at a time; memory stays bounded by the largest slice.
inline std::map<std::pair<int, int>, std::uint64_t> homology_table(
    const LinkDiagram& d, bool reduced, const KhOptions& opts = {},
    std::optional<std::pair<int, int>> q_window = std::nullopt) {
    int cap = q_window ? opts.max_crossings_window : opts.max_crossings_full;
    if (d.crossing_count() > cap)
        throw ResourceError("crossing count " + std::to_string(d.crossing_count()) +
                            " over cap " + std::to_string(cap));
    if (q_window && q_window->first > q_window->second)
        throw ParseError("empty q window");
    kh_detail::CubeContext cube(d, reduced);
    int qlo = q_window ? std::max(q_window->first, cube.qmin()) : cube.qmin();
    int qhi = q_window ? std::min(q_window->second, cube.qmax()) : cube.qmax();
    std::map<std::pair<int, int>, std::uint64_t> out;
    for (int q = qlo; q <= qhi; q++) {
        std::vector<std::uint64_t> dim(cube.n() + 1, 0), rank(cube.n() + 1, 0);
        std::vector<std::uint64_t> off_next = cube.offsets(0, q);
        std::uint64_t slice = 0;
        {
            std::vector<std::uint64_t> tmp;
            for (int wt = 0; wt <= cube.n(); wt++) {
                tmp = cube.offsets(wt, q);
                slice += tmp.back();
            }
        }
        if (slice == 0) continue;
        if (slice > opts.max_slice_generators)
            throw ResourceError("q-slice generator count over cap");
        for (int wt = 0; wt <= cube.n(); wt++) {
            std::vector<std::uint64_t> off = std::move(off_next);
            off_next = (wt < cube.n()) ? cube.offsets(wt + 1, q) : std::vector<std::uint64_t>{0};
            dim[wt] = off.back();
            if (dim[wt] == 0 || wt == cube.n() || off_next.back() == 0) continue;
            kh_detail::ColumnReducer red(off_next.back());
            cube.for_each_column(wt, q, off_next,
                                 [&](std::uint32_t, std::uint32_t,
                                     std::vector<std::uint32_t>& col) { red.add(col); });
            rank[wt] = red.rank();
        }
        for (int wt = 0; wt <= cube.n(); wt++) {
            if (dim[wt] == 0) continue;
            std::uint64_t h = dim[wt] - rank[wt] - (wt > 0 ? rank[wt - 1] : 0);
            if (h) out[{cube.homological_degree(wt), q}] = h;
        }
    }
    return out;
}

struct PsiChain {
    ResolutionState state;
    std::uint32_t labels = 0;  // every circle u-
    int i = 0;
    int q = 0;  // equals the self-linking number
    int circle_count = 0;
};

// The all-u_- labeling of the oriented resolution; verified to be a cycle.
inline PsiChain psi_chain(const LinkDiagram& d, bool reduced = true) {
    kh_detail::CubeContext cube(d, reduced);
    PsiChain psi;
    psi.state = oriented_state(d);
    psi.labels = 0;
    psi.circle_count = cube.circle_count(psi.state.bits);
    psi.i = cube.homological_degree(std::popcount(psi.state.bits));
    psi.q = cube.q_of(psi.state.bits, 0);
    if (!cube.boundary(psi.state.bits, 0).empty())
        throw std::logic_error("psi chain is not a cycle");
    return psi;
}

// Decides whether the class of psi survives in reduced homology: psi is
// nonzero iff it is outside the image of the incoming differential in its
// quantum grading. Only that single q-slice is materialized.
inline bool psi_nonzero(const LinkDiagram& d, const KhOptions& opts = {}) {
    if (d.crossing_count() > opts.max_crossings_window)
        throw ResourceError("crossing count over q-window cap");
    kh_detail::CubeContext cube(d, true);
    PsiChain psi = psi_chain(d, true);
    int wt = std::popcount(psi.state.bits);
    if (wt == 0) return true;  // no incoming differential: positive braid words
    auto off = cube.offsets(wt, psi.q);
    if (off.back() > opts.max_slice_generators)
        throw ResourceError("psi slice over generator cap");
    kh_detail::ColumnReducer red(off.back());
    cube.for_each_column(wt - 1, psi.q, off,
                         [&](std::uint32_t, std::uint32_t,
                             std::vector<std::uint32_t>& col) { red.add(col); });
    std::vector<std::uint32_t> psi_col{
        std::uint32_t(off[kh_detail::CubeContext::state_rank(psi.state.bits)] +
                      kh_detail::label_rank(0, psi.circle_count,
                                            resolve(d, psi.state).marked_circle))};
    return !red.reduces_to_zero(psi_col);
}

}  // namespace tbl
