// Rule-based classification of the covering contact structure and its
// Heegaard Floer contact invariant. Every rule is a sound one-directional
// implication; anything not forced stays Unknown.
#pragma once

#include "tbl/braid.hpp"
#include "tbl/cover.hpp"
#include "tbl/diagram.hpp"
#include "tbl/khovanov.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tbl {

enum class Fillability { SteinFillable, Overtwisted, Unknown };
enum class CInvariant { Zero, Nonzero, Unknown };

inline const char* to_string(Fillability f) {
    switch (f) {
        case Fillability::SteinFillable: return "SteinFillable";
        case Fillability::Overtwisted: return "Overtwisted";
        default: return "Unknown";
    }
}
inline const char* to_string(CInvariant c) {
    switch (c) {
        case CInvariant::Zero: return "Zero";
        case CInvariant::Nonzero: return "Nonzero";
        default: return "Unknown";
    }
}

struct RuleFired {
    std::string id;
    std::string statement;
};

struct ContactReport {
    int sl = 0;
    std::optional<H1Group> h1;
    std::optional<Rational> d3;
    bool c1_is_zero = true;
    Fillability fillability = Fillability::Unknown;
    CInvariant c_invariant = CInvariant::Unknown;
    std::optional<bool> psi_nonzero;  // empty when skipped over the resource cap
    std::vector<RuleFired> rules_fired;
    std::optional<std::string> conjecture_note;
    std::vector<std::string> notes;
};

struct ClassifyOptions {
    KhOptions kh;
    bool compute_psi = true;
    Rational d3_constant = Rational(-1);
};

namespace verdict_detail {

// literal match for (s1 ... s_{p-1})^q followed by k >= 1 negative
// stabilizations s_p^{-1} ... s_{p+k-1}^{-1}
inline bool is_stabilized_positive_torus_braid(const BraidWord& w) {
    int b = w.strands;
    for (int p = 2; p < b; p++) {
        int k = b - p;
        int head = int(w.letters.size()) - k;
        if (head <= 0 || head % (p - 1) != 0) continue;
        int q = head / (p - 1);
        if (q < 1) continue;
        bool ok = true;
        for (int t = 0; t < head && ok; t++)
            ok = (w.letters[t] == t % (p - 1) + 1);
        for (int j = 0; j < k && ok; j++)
            ok = (w.letters[head + j] == -(p + j));
        if (ok) return true;
    }
    return false;
}

}  // namespace verdict_detail

inline ContactReport classify(const BraidWord& w,
                              std::optional<QuasipositiveCertificate> cert = std::nullopt,
                              const ClassifyOptions& opts = {}) {
    ContactReport rep;
    rep.sl = self_linking(w);

    bool all_positive = !w.letters.empty() && w.n_minus() == 0;
    bool cert_ok = false;
    if (cert) cert_ok = verify_quasipositive_certificate(w, *cert);
    if (w.letters.empty()) all_positive = true;  // trivial braid closes a Stein fillable cover

    // R1: positive or certified quasipositive words give Stein fillable
    // covers with nonvanishing contact invariant.
    if (all_positive || cert_ok) {
        rep.fillability = Fillability::SteinFillable;
        rep.c_invariant = CInvariant::Nonzero;
        rep.rules_fired.push_back(
            {"R1-quasipositive",
             all_positive ? "every letter is positive, so the braid is quasipositive; "
                            "the cover is Stein fillable and c is nonzero"
                          : "the supplied quasipositive factorization verifies; the "
                            "cover is Stein fillable and c is nonzero"});
    }
    // R2: a top-level negative kink is a transverse stabilization witness.
    if (rep.fillability == Fillability::Unknown && detect_negative_kink(w)) {
        rep.fillability = Fillability::Overtwisted;
        rep.c_invariant = CInvariant::Zero;
        rep.rules_fired.push_back(
            {"R2-negative-kink",
             "the word is a negative braid stabilization, so the cover is an "
             "overtwisted connected sum and c vanishes"});
    }
    // R3: a level carrying only negative crossings forces c = 0.
    if (auto lvl = detect_isolated_negative_level(w)) {
        if (rep.c_invariant != CInvariant::Nonzero) {
            rep.c_invariant = CInvariant::Zero;
            rep.rules_fired.push_back(
                {"R3-isolated-negative-level",
                 "level " + std::to_string(*lvl) +
                     " carries inverse generators only, so c vanishes"});
        }
    }
    // R4: a positive torus braid with extra negative stabilizations has
    // self-linking below the maximum, so the cover is overtwisted.
    if (rep.fillability == Fillability::Unknown &&
        verdict_detail::is_stabilized_positive_torus_braid(w)) {
        rep.fillability = Fillability::Overtwisted;
        if (rep.c_invariant != CInvariant::Nonzero) rep.c_invariant = CInvariant::Zero;
        rep.rules_fired.push_back(
            {"R4-stabilized-torus-braid",
             "a stabilized positive torus braid has self-linking below the maximum, "
             "so the cover is overtwisted and c vanishes"});
    }

    try {
        auto sp = linking_matrix(chord_presentation(w));
        rep.h1 = h1(sp);
        rep.d3 = d3(sp, rep.sl, opts.d3_constant);
    } catch (const DeterminantMismatch& e) {
        rep.notes.push_back(std::string("surgery presentation withheld: ") + e.what());
    }

    if (opts.compute_psi) {
        try {
            rep.psi_nonzero = psi_nonzero(close_braid(w), opts.kh);
        } catch (const ResourceError& e) {
            rep.notes.push_back(std::string("psi skipped: ") + e.what());
        }
    }

    if (rep.psi_nonzero.value_or(false) && rep.c_invariant == CInvariant::Unknown)
        rep.conjecture_note =
            "psi is nonzero; a conjectural correspondence with the contact invariant "
            "would make c nonzero, but no proven rule applies";

    // structural consistency: the two one-directional theorems
    if (rep.fillability == Fillability::SteinFillable && rep.c_invariant == CInvariant::Zero)
        throw std::logic_error("contradictory report: Stein fillable with c = 0");
    if (rep.fillability == Fillability::Overtwisted && rep.c_invariant == CInvariant::Nonzero)
        throw std::logic_error("contradictory report: overtwisted with c != 0");
    return rep;
}

}  // namespace tbl
