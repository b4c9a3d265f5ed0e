#include <catch2/catch_amalgamated.hpp>

#include "tbl/cover.hpp"
#include "tbl/diagram.hpp"

#include <random>

using namespace tbl;

namespace {

BraidWord random_word(std::mt19937& rng, int bmax, int nmax) {
    int b = 2 + int(rng() % (bmax - 1));
    int n = int(rng() % (nmax + 1));
    BraidWord w{b, {}};
    for (int i = 0; i < n; i++) {
        int l = 1 + int(rng() % (b - 1));
        w.letters.push_back(rng() % 2 ? l : -l);
    }
    return w;
}

std::vector<std::vector<long long>> rows_of(const IntSymMatrix& m) {
    std::vector<std::vector<long long>> out(m.n, std::vector<long long>(m.n));
    for (int i = 0; i < m.n; i++)
        for (int j = 0; j < m.n; j++) out[i][j] = m.at(i, j);
    return out;
}

}  // namespace

TEST_CASE("chord presentations of the basic words") {
    auto t = chord_presentation({2, {1, 1, 1}});
    CHECK(t.normalized.letters == std::vector<int>{1, 1, 1});
    CHECK(t.distinguished.at(1) == 1);
    REQUIRE(t.chords.size() == 2);
    CHECK(t.chords[0].position == 2);
    CHECK(t.chords[1].position == 3);
    REQUIRE(t.endpoint_order.size() == 4);
    // the two chords interleave along the traversal of the unknot
    CHECK(t.endpoint_order == std::vector<int>{0, 1, 0, 1});

    auto u = chord_presentation({2, {1}});
    CHECK(u.chords.empty());
    CHECK(u.inserted_levels.empty());

    auto m = chord_presentation({2, {-1}});
    CHECK(m.normalized.letters == std::vector<int>{-1, 1, -1});
    CHECK(m.inserted_levels == std::vector<int>{1});
    CHECK(m.distinguished.at(1) == 2);
    REQUIRE(m.chords.size() == 2);
    CHECK(m.chords[0].sign == -1);
    CHECK(m.chords[1].sign == -1);

    auto one = chord_presentation({1, {}});
    CHECK(one.chords.empty());
}

TEST_CASE("linking matrices of the anchor examples") {
    auto t = linking_matrix(chord_presentation({2, {1, 1, 1}}));
    CHECK(rows_of(t.linking_matrix) ==
          std::vector<std::vector<long long>>{{-2, 1}, {1, -2}});
    CHECK(t.components[0].contact_coeff == -1);
    CHECK(t.components[0].smooth_framing == -2);

    auto m = linking_matrix(chord_presentation({2, {-1}}));
    CHECK(rows_of(m.linking_matrix) ==
          std::vector<std::vector<long long>>{{0, 1}, {1, 0}});
    CHECK(m.components[0].contact_coeff == 1);
    CHECK(m.components[0].smooth_framing == 0);
}

TEST_CASE("torus links give the chain with -2 framings") {
    for (int n = 2; n <= 8; n++) {
        BraidWord w{2, std::vector<int>(n, 1)};
        auto sp = linking_matrix(chord_presentation(w));
        REQUIRE(sp.linking_matrix.n == n - 1);
        for (int i = 0; i < n - 1; i++)
            for (int j = 0; j < n - 1; j++) {
                long long want = i == j ? -2 : (std::abs(i - j) == 1 ? 1 : 0);
                CHECK(sp.linking_matrix.at(i, j) == want);
            }
        BigInt det = det_bareiss(to_big(sp.linking_matrix));
        CHECK((det < 0 ? -det : det) == n);
        CHECK(h1(sp).describe() == "Z/" + std::to_string(n));
    }
}

TEST_CASE("H1 of the standard covers") {
    CHECK(h1(linking_matrix(chord_presentation({2, {1, 1, 1}}))).describe() == "Z/3");
    CHECK(h1(linking_matrix(chord_presentation({2, {1, 1}}))).describe() == "Z/2");
    CHECK(h1(linking_matrix(chord_presentation({3, {1, 2}}))).describe() == "0");
    // a split word has a free factor
    CHECK(h1(linking_matrix(chord_presentation({2, {}}))).free_rank == 1);
}

TEST_CASE("d3 anchors") {
    auto at = [](const BraidWord& w, Rational constant = Rational(-1)) {
        auto sp = linking_matrix(chord_presentation(w));
        return d3(sp, self_linking(w), constant);
    };
    CHECK(at({2, {1}}) == Rational(-1, 2));
    CHECK(at({2, {-1}}) == Rational(1, 2));
    CHECK(at({2, {1, 1, 1}}) == Rational(0));
    // the alternative printed constant shifts every value by +1/2
    CHECK(at({2, {1}}, Rational(-1, 2)) == Rational(0));
    CHECK(at({2, {1, 1, 1}}, Rational(-1, 2)) == Rational(1, 2));
    // infinite H1: undefined
    CHECK_FALSE(at({2, {}}).has_value());
    CHECK_FALSE(at({2, {1, -1}}).has_value());
}

TEST_CASE("structural invariants of the presentation") {
    std::mt19937 rng(89);
    for (int trial = 0; trial < 200; trial++) {
        BraidWord w = random_word(rng, 5, 10);
        auto cp = chord_presentation(w);
        // every level has exactly one distinguished position
        CHECK(int(cp.distinguished.size()) == w.strands - 1);
        // two endpoint events per chord
        CHECK(cp.endpoint_order.size() == 2 * cp.chords.size());
        std::map<int, int> cnt;
        for (int c : cp.endpoint_order) cnt[c]++;
        for (auto& [c, k] : cnt) CHECK(k == 2);
        // chord count l + m
        int l = cp.normalized.n_plus() - (w.strands - 1);
        int mm = cp.normalized.n_minus();
        CHECK(int(cp.chords.size()) == l + mm);

        auto sp = linking_matrix(cp);  // throws on determinant mismatch
        for (int i = 0; i < sp.linking_matrix.n; i++)
            for (int j = 0; j < sp.linking_matrix.n; j++) {
                if (i == j) {
                    long long want = cp.chords[i].sign > 0 ? -2 : 0;
                    CHECK(sp.linking_matrix.at(i, i) == want);
                } else {
                    CHECK(std::abs(sp.linking_matrix.at(i, j)) <= 1);
                }
            }
    }
}

TEST_CASE("linking matrix signature equals the diagram signature on knots") {
    std::mt19937 rng(97);
    int found = 0;
    while (found < 60) {
        BraidWord w = random_word(rng, 4, 10);
        LinkDiagram d = close_braid(w);
        if (component_count(d) != 1) continue;
        found++;
        INFO("word " << to_text(w));
        auto sp = linking_matrix(chord_presentation(w));
        CHECK(symmetric_signature(sp.linking_matrix) == signature(d));
    }
}

TEST_CASE("d3 laws under cyclic moves and stabilizations") {
    std::mt19937 rng(101);
    auto value = [](const BraidWord& w) {
        return d3(linking_matrix(chord_presentation(w)), self_linking(w));
    };
    for (int trial = 0; trial < 100; trial++) {
        BraidWord w = random_word(rng, 4, 12);
        auto base = value(w);
        CHECK(value(cyclic_permute(w, 1 + long(rng() % 6))) == base);
        CHECK(value(stabilize(w, StabSign::positive)) == base);
        auto neg = value(stabilize(w, StabSign::negative));
        if (base) {
            REQUIRE(neg.has_value());
            CHECK(*neg == *base + 1);
        } else {
            CHECK_FALSE(neg.has_value());
        }
    }
}

TEST_CASE("insertion point of the normalization pair does not matter") {
    // inserting sigma_l sigma_l^{-1} anywhere produces the same cover data
    std::mt19937 rng(103);
    for (int trial = 0; trial < 40; trial++) {
        BraidWord w = random_word(rng, 4, 8);
        int l = 1 + int(rng() % (w.strands - 1));
        BraidWord v = w;
        std::size_t pos = rng() % (v.letters.size() + 1);
        v.letters.insert(v.letters.begin() + pos, {l, -l});
        auto a = linking_matrix(chord_presentation(w));
        auto b = linking_matrix(chord_presentation(v));
        CHECK(h1(a).describe() == h1(b).describe());
        CHECK(d3(a, self_linking(w)) == d3(b, self_linking(v)));
    }
}

TEST_CASE("split words give block-diagonal matrices with vanishing determinant") {
    auto sp = linking_matrix(chord_presentation({3, {1, 1}}));
    CHECK(determinant(close_braid({3, {1, 1}})) == 0);
    BigInt det = det_bareiss(to_big(sp.linking_matrix));
    CHECK(det == 0);
    // chords of the two levels do not link
    for (std::size_t a = 0; a < sp.components.size(); a++)
        for (std::size_t b = 0; b < sp.components.size(); b++) {
            const Chord& ca = sp.chords.chords[sp.components[a].chord];
            const Chord& cb = sp.chords.chords[sp.components[b].chord];
            if (ca.level != cb.level)
                CHECK(sp.linking_matrix.at(int(a), int(b)) == 0);
        }
}

TEST_CASE("the two-braid family agrees on every computed invariant") {
    for (int p = 2; p <= 4; p++)
        for (int q = 2; q <= 4; q++)
            for (int r = 2; r <= 4; r++) {
                if (q == p + 1 || q == r) continue;
                BmPair pair = bm_pair(p, q, r);
                auto s1 = linking_matrix(chord_presentation(pair.k1));
                auto s2 = linking_matrix(chord_presentation(pair.k2));
                INFO("triple " << p << "," << q << "," << r);
                CHECK(self_linking(pair.k1) == self_linking(pair.k2));
                CHECK(h1(s1).describe() == h1(s2).describe());
                CHECK(symmetric_signature(s1.linking_matrix) ==
                      symmetric_signature(s2.linking_matrix));
                CHECK(d3(s1, self_linking(pair.k1)) == d3(s2, self_linking(pair.k2)));
            }
}

TEST_CASE("rational formatting") {
    CHECK(to_string(Rational(-1, 2)) == "-1/2");
    CHECK(to_string(Rational(3)) == "3");
    CHECK(to_string(Rational(2, 4)) == "1/2");
}
