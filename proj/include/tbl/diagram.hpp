// Closed-braid planar diagrams and their classical invariants: component
// count, checkerboard Goeritz matrix, link determinant, and the knot
// signature via the Gordon-Litherland correction. These serve as the
// independent oracle against the surgery-presentation and homology modules.
#pragma once

#include "tbl/braid.hpp"
#include "tbl/linalg.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tbl {

struct DiagramError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Crossing {
    int position;  // 1..n, strictly increasing
    int level;     // 1..b-1
    int sign;      // +1 or -1
};

// The closed braid drawn with strands oriented upward around the axis.
// Arcs are the strand segments between consecutive crossing heights:
// arc (s, t) is strand position s in the gap just above crossing t
// (gap n wraps around through the closure). With no crossings each strand
// is a single closed arc.
struct LinkDiagram {
    int strands = 1;
    std::vector<Crossing> crossings;

    int crossing_count() const { return int(crossings.size()); }
    int n_plus() const {
        int c = 0;
        for (auto& x : crossings) c += (x.sign > 0);
        return c;
    }
    int n_minus() const { return crossing_count() - n_plus(); }

    int arc_count() const {
        int n = crossing_count();
        return n == 0 ? strands : strands * n;
    }
    // arc ids: s*n + (t mod n) with s in 0..strands-1, gaps t in 0..n-1
    int arc_id(int s, int t) const {
        int n = crossing_count();
        return s * n + ((t % n) + n) % n;
    }
    // the marked point sits on the closure arc of strand 1
    int marked_arc() const {
        int n = crossing_count();
        return n == 0 ? 0 : arc_id(0, n - 1);
    }
};

inline LinkDiagram close_braid(const BraidWord& w) {
    validate(w);
    LinkDiagram d;
    d.strands = w.strands;
    d.crossings.reserve(w.letters.size());
    for (size_t t = 0; t < w.letters.size(); t++) {
        int k = w.letters[t];
        d.crossings.push_back({int(t) + 1, std::abs(k), k > 0 ? 1 : -1});
    }
    return d;
}

inline std::vector<int> strand_permutation(const LinkDiagram& d) {
    std::vector<int> p(d.strands);
    std::iota(p.begin(), p.end(), 0);
    for (auto& x : d.crossings) std::swap(p[x.level - 1], p[x.level]);
    return p;
}

inline int component_count(const LinkDiagram& d) {
    auto p = strand_permutation(d);
    std::vector<bool> seen(d.strands, false);
    int c = 0;
    for (int s = 0; s < d.strands; s++) {
        if (seen[s]) continue;
        c++;
        for (int t = s; !seen[t]; t = p[t]) seen[t] = true;
    }
    return c;
}

// Every occupied level carries a single sign and adjacent occupied levels
// alternate.
inline bool is_alternating_braid_diagram(const BraidWord& w) {
    std::vector<int> sign(w.strands, 0);  // 0 unused, +1/-1, 2 mixed
    for (int k : w.letters) {
        int l = std::abs(k), s = k > 0 ? 1 : -1;
        if (sign[l] == 0) sign[l] = s;
        else if (sign[l] != s) return false;
    }
    for (int l = 1; l + 1 < w.strands; l++)
        if (sign[l] != 0 && sign[l + 1] != 0 && sign[l] == sign[l + 1]) return false;
    return true;
}

inline bool is_connected_diagram(const LinkDiagram& d) {
    std::vector<bool> used(d.strands, false);
    for (auto& x : d.crossings) used[x.level] = true;
    for (int l = 1; l < d.strands; l++)
        if (!used[l]) return false;
    return true;
}

// Splits the strand interval at unused levels; each piece is a connected
// closed-braid diagram in its own right (free strands become 0-crossing
// unknot pieces).
inline std::vector<LinkDiagram> split_components(const LinkDiagram& d) {
    std::vector<bool> used(d.strands + 1, false);
    for (auto& x : d.crossings) used[x.level] = true;
    std::vector<LinkDiagram> out;
    int lo = 1;  // current piece spans strands lo..hi
    for (int hi = 1; hi <= d.strands; hi++) {
        if (hi < d.strands && used[hi]) continue;
        LinkDiagram piece;
        piece.strands = hi - lo + 1;
        int pos = 0;
        for (auto& x : d.crossings)
            if (x.level >= lo && x.level < hi)
                piece.crossings.push_back({++pos, x.level - lo + 1, x.sign});
        out.push_back(std::move(piece));
        lo = hi + 1;
    }
    return out;
}

struct GoeritzData {
    IntSymMatrix matrix;  // one white region deleted
    long long mu = 0;     // Gordon-Litherland correction
};

// Checkerboard coloring with the unbounded region black. The annular
// columns between adjacent strand circles alternate color, so the white
// regions are the faces of the odd columns (plus the inner disk when the
// strand count is odd). For a crossing at level l the white quadrants are
// N/S of the crossing when l is odd and E/W when l is even, which gives
//   eta(c) = sign(c) * (-1)^l,     type II  <=>  l even,
// pinned by the right trefoil's signature -2.
inline GoeritzData goeritz(const LinkDiagram& d) {
    int n = d.crossing_count();
    int b = d.strands;
    if (n == 0) throw DiagramError("goeritz: diagram without crossings");
    if (!is_connected_diagram(d))
        throw DiagramError("goeritz: split diagram; compute per split component");

    std::vector<std::vector<int>> times(b);  // level -> crossing indices in time order
    for (int i = 0; i < n; i++) times[d.crossings[i].level].push_back(i);

    // face ids for odd columns
    std::map<std::pair<int, int>, int> face;  // (level, gap index) -> id
    int nf = 0;
    for (int l = 1; l < b; l += 2)
        for (size_t j = 0; j < times[l].size(); j++) face[{l, int(j)}] = nf++;
    int inner = (b % 2 == 1) ? nf++ : -1;

    auto col_face = [&](int l, int t) {
        if (l == b) return inner;
        auto& ts = times[l];
        int k = int(ts.size());
        for (int j = 0; j < k; j++) {
            int a = d.crossings[ts[j]].position;
            int bb = d.crossings[ts[(j + 1) % k]].position;
            if (a < bb ? (a < t && t < bb) : (t > a || t < bb)) return face.at({l, j});
        }
        throw std::logic_error("goeritz: face lookup failed");
    };

    std::vector<std::vector<long long>> g(nf, std::vector<long long>(nf, 0));
    long long mu = 0;
    for (int i = 0; i < n; i++) {
        const auto& x = d.crossings[i];
        int l = x.level;
        long long eta = x.sign * (l % 2 == 1 ? -1 : 1);
        int u, v;
        if (l % 2 == 1) {
            auto& ts = times[l];
            int j = int(std::find(ts.begin(), ts.end(), i) - ts.begin());
            u = face.at({l, j});                                // face above
            v = face.at({l, (j - 1 + int(ts.size())) % int(ts.size())});  // below
        } else {
            mu += eta;  // type II
            u = col_face(l - 1, x.position);
            v = (l + 1 == b) ? inner : col_face(l + 1, x.position);
        }
        if (u != v) {
            g[u][v] -= eta;
            g[v][u] -= eta;
        }
    }
    for (int u = 0; u < nf; u++) {
        long long s = 0;
        for (int v = 0; v < nf; v++)
            if (v != u) s += g[u][v];
        g[u][u] = -s;
    }
    GoeritzData out;
    out.mu = mu;
    out.matrix = IntSymMatrix::zero(nf - 1);
    for (int i = 0; i + 1 < nf; i++)
        for (int j = 0; j + 1 < nf; j++) out.matrix.at(i, j) = g[i][j];
    return out;
}

// |det| of the Goeritz matrix. A split diagram presents a double cover with
// positive first Betti number, so its determinant is 0; the crossingless
// unknot contributes 1.
inline BigInt determinant(const LinkDiagram& d) {
    if (d.crossing_count() == 0) return d.strands == 1 ? 1 : 0;
    if (!is_connected_diagram(d)) return 0;
    BigInt det = det_bareiss(to_big(goeritz(d).matrix));
    return det < 0 ? -det : det;
}

// sigma(K) = sig(Goeritz) - mu, knots only. The convention is anchored by
// sigma(right trefoil) = -2.
inline int signature(const LinkDiagram& d) {
    if (component_count(d) != 1)
        throw DiagramError("signature: multi-component links unsupported");
    if (d.crossing_count() == 0) return 0;  // crossingless unknot (1 strand)
    auto g = goeritz(d);
    return symmetric_signature(g.matrix) - int(g.mu);
}

}  // namespace tbl
