// Braid words on the standard generators: parsing, self-linking number,
// stabilization, cyclic permutation, syntactic detectors, and exact word
// equality in the braid group via handle reduction.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tbl {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A word in the braid group B_b. Letter k > 0 means sigma_k, k < 0 means
// sigma_{|k|}^{-1}; every letter satisfies 1 <= |k| <= strands-1.
struct BraidWord {
    int strands = 1;
    std::vector<int> letters;

    int n_plus() const {
        int c = 0;
        for (int k : letters) c += (k > 0);
        return c;
    }
    int n_minus() const { return int(letters.size()) - n_plus(); }
    int length() const { return int(letters.size()); }

    bool operator==(const BraidWord&) const = default;
};

inline void validate(const BraidWord& w) {
    if (w.strands < 1) throw ParseError("strand count must be >= 1");
    for (int k : w.letters) {
        if (k == 0 || std::abs(k) > w.strands - 1)
            throw ParseError("letter " + std::to_string(k) + " out of range for " +
                             std::to_string(w.strands) + " strands");
    }
}

// Accepts whitespace/comma separated integers ("1 -2 1 -2") or the compact
// alphabetic form where a..z are sigma_1..sigma_26 and A..Z their inverses.
inline BraidWord parse_braid(const std::string& text,
                             std::optional<int> strands_override = std::nullopt) {
    std::vector<int> letters;
    bool alphabetic = std::any_of(text.begin(), text.end(),
                                  [](unsigned char c) { return std::isalpha(c); });
    if (alphabetic) {
        for (unsigned char c : text) {
            if (std::isspace(c) || c == ',') continue;
            if (c >= 'a' && c <= 'z') letters.push_back(c - 'a' + 1);
            else if (c >= 'A' && c <= 'Z') letters.push_back(-(c - 'A' + 1));
            else throw ParseError(std::string("unparseable character '") + char(c) + "'");
        }
    } else {
        std::string t = text;
        std::replace(t.begin(), t.end(), ',', ' ');
        std::istringstream in(t);
        std::string tok;
        while (in >> tok) {
            int k;
            try {
                size_t used = 0;
                k = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError("unparseable token '" + tok + "'");
            }
            if (k == 0) throw ParseError("zero is not a braid generator");
            letters.push_back(k);
        }
    }
    int maxgen = 0;
    for (int k : letters) maxgen = std::max(maxgen, std::abs(k));
    BraidWord w;
    if (strands_override) {
        if (*strands_override < 1) throw ParseError("strand count must be >= 1");
        if (maxgen >= *strands_override)
            throw ParseError("generator " + std::to_string(maxgen) + " needs more than " +
                             std::to_string(*strands_override) + " strands");
        w.strands = *strands_override;
    } else {
        w.strands = std::max(1, maxgen + 1);
    }
    w.letters = std::move(letters);
    return w;
}

inline std::string to_text(const BraidWord& w) {
    std::string s;
    for (size_t i = 0; i < w.letters.size(); i++) {
        if (i) s += ' ';
        s += std::to_string(w.letters[i]);
    }
    return s;
}

inline int self_linking(const BraidWord& w) {
    return w.n_plus() - w.n_minus() - w.strands;
}

enum class StabSign { positive, negative };

// Adds a strand and a kink at the new top level. The negative case is the
// transverse stabilization: sl drops by exactly 2.
inline BraidWord stabilize(const BraidWord& w, StabSign sign) {
    BraidWord out = w;
    out.strands = w.strands + 1;
    out.letters.push_back(sign == StabSign::positive ? w.strands : -w.strands);
    return out;
}

inline BraidWord cyclic_permute(const BraidWord& w, long k) {
    BraidWord out = w;
    if (w.letters.empty()) return out;
    long n = long(w.letters.size());
    long r = ((k % n) + n) % n;
    std::rotate(out.letters.begin(), out.letters.begin() + r, out.letters.end());
    return out;
}

// Smallest level i such that sigma_i^{-1} occurs but sigma_i does not.
inline std::optional<int> detect_isolated_negative_level(const BraidWord& w) {
    for (int i = 1; i < w.strands; i++) {
        bool neg = false, pos = false;
        for (int k : w.letters) {
            if (k == i) pos = true;
            if (k == -i) neg = true;
        }
        if (neg && !pos) return i;
    }
    return std::nullopt;
}

// True iff the top level b-1 carries exactly one crossing and it is
// negative: a syntactic destabilization witness, invariant under cyclic
// permutation. Sound but not complete.
inline bool detect_negative_kink(const BraidWord& w) {
    int top = w.strands - 1;
    if (top < 1) return false;
    int count = 0, sign = 0;
    for (int k : w.letters)
        if (std::abs(k) == top) { count++; sign = k; }
    return count == 1 && sign < 0;
}

// ---------------------------------------------------------------------------
// Word problem via handle reduction.
//
// A sigma_i-handle is a subword sigma_i^e v sigma_i^{-e} where v only uses
// generators of index > i. Reducing it deletes the two sigma_i letters and
// rewrites each sigma_{i+1}^d inside v as
// sigma_{i+1}^{-e} sigma_i^d sigma_{i+1}^{e}; letters of index > i+1 commute
// with sigma_i and pass through unchanged. Always reducing the handle whose
// closing letter is leftmost never rewrites across an inner handle, and the
// process terminates with the empty word exactly when the braid is trivial.
// ---------------------------------------------------------------------------

namespace detail {

inline void free_reduce(std::vector<int>& w) {
    std::vector<int> out;
    out.reserve(w.size());
    for (int k : w) {
        if (!out.empty() && out.back() == -k) out.pop_back();
        else out.push_back(k);
    }
    w.swap(out);
}

// Finds the handle with leftmost closing letter; returns {open, close} or
// nullopt when the word is handle-free.
inline std::optional<std::pair<size_t, size_t>> find_handle(const std::vector<int>& w) {
    // open_pos[i] = index of the most recent letter of index i still visible
    // (no smaller index has occurred since).
    std::vector<long> open_pos;
    for (size_t j = 0; j < w.size(); j++) {
        int i = std::abs(w[j]);
        if (size_t(i) >= open_pos.size()) open_pos.resize(i + 1, -1);
        long j0 = open_pos[i];
        if (j0 >= 0 && w[j0] == -w[j])
            return std::make_pair(size_t(j0), j);
        for (size_t ii = i + 1; ii < open_pos.size(); ii++) open_pos[ii] = -1;
        open_pos[i] = long(j);
    }
    return std::nullopt;
}

}  // namespace detail

inline bool is_trivial_braid_word(std::vector<int> w,
                                  std::uint64_t step_cap = 50'000'000) {
    detail::free_reduce(w);
    std::uint64_t steps = 0;
    while (!w.empty()) {
        auto h = detail::find_handle(w);
        if (!h) return false;  // handle-free and nonempty: sigma-positive or -negative
        auto [j0, j1] = *h;
        int e = w[j0] > 0 ? 1 : -1;
        int i = std::abs(w[j0]);
        std::vector<int> out(w.begin(), w.begin() + j0);
        for (size_t t = j0 + 1; t < j1; t++) {
            int k = w[t];
            if (std::abs(k) == i + 1) {
                int d = k > 0 ? 1 : -1;
                out.push_back(-e * (i + 1));
                out.push_back(d * i);
                out.push_back(e * (i + 1));
            } else {
                out.push_back(k);
            }
        }
        out.insert(out.end(), w.begin() + j1 + 1, w.end());
        w.swap(out);
        detail::free_reduce(w);
        if (++steps > step_cap)
            throw ResourceError("handle reduction exceeded step cap");
    }
    return true;
}

inline bool braid_words_equal(const BraidWord& u, const BraidWord& v) {
    std::vector<int> w = u.letters;
    for (auto it = v.letters.rbegin(); it != v.letters.rend(); ++it) w.push_back(-*it);
    return is_trivial_braid_word(std::move(w));
}

// ---------------------------------------------------------------------------
// Quasipositive certificates: a factorization into conjugates w sigma_i w^{-1}.
// ---------------------------------------------------------------------------

struct QuasipositiveCertificate {
    struct Factor {
        std::vector<int> conjugator;  // the word w
        int generator = 1;            // the index i of sigma_i, i >= 1
    };
    std::vector<Factor> factors;
};

inline BraidWord expand_certificate(const QuasipositiveCertificate& cert, int strands) {
    BraidWord out;
    out.strands = strands;
    for (const auto& f : cert.factors) {
        if (f.generator < 1 || f.generator > strands - 1)
            throw ParseError("certificate generator " + std::to_string(f.generator) +
                             " out of range");
        for (int k : f.conjugator) {
            if (k == 0 || std::abs(k) > strands - 1)
                throw ParseError("certificate conjugator letter out of range");
        }
        out.letters.insert(out.letters.end(), f.conjugator.begin(), f.conjugator.end());
        out.letters.push_back(f.generator);
        for (auto it = f.conjugator.rbegin(); it != f.conjugator.rend(); ++it)
            out.letters.push_back(-*it);
    }
    return out;
}

inline bool verify_quasipositive_certificate(const BraidWord& w,
                                             const QuasipositiveCertificate& cert) {
    return braid_words_equal(w, expand_certificate(cert, w.strands));
}

// The two 3-braids K1 = s1^{2p+1} s2^{2r} s1^{2q} s2^{-1} and
// K2 = s1^{2p+1} s2^{-1} s1^{2q} s2^{2r}: smoothly isotopic knots with equal
// self-linking number 2(p+q+r)-3, transversely distinct when p,q,r > 1 and
// p+1 != q != r.
struct BmPair {
    BraidWord k1, k2;
    std::optional<std::string> warning;
};

inline BmPair bm_pair(int p, int q, int r) {
    if (p <= 0 || q <= 0 || r <= 0)
        throw ParseError("bm_pair needs positive p, q, r");
    BmPair out;
    out.k1.strands = out.k2.strands = 3;
    auto rep = [](std::vector<int>& v, int letter, int count) {
        v.insert(v.end(), count, letter);
    };
    rep(out.k1.letters, 1, 2 * p + 1);
    rep(out.k1.letters, 2, 2 * r);
    rep(out.k1.letters, 1, 2 * q);
    out.k1.letters.push_back(-2);
    rep(out.k2.letters, 1, 2 * p + 1);
    out.k2.letters.push_back(-2);
    rep(out.k2.letters, 1, 2 * q);
    rep(out.k2.letters, 2, 2 * r);
    if (!(p > 1 && q > 1 && r > 1 && q != p + 1 && q != r))
        out.warning = "hypothesis p,q,r > 1 and p+1 != q != r violated; the pair may "
                      "be transversely isotopic";
    return out;
}

}  // namespace tbl
