#include <catch2/catch_amalgamated.hpp>

#include "tbl/khovanov.hpp"
#include "oracles.hpp"

#include <random>

using namespace tbl;

namespace {

BraidWord random_word(std::mt19937& rng, int bmax, int nmax, bool allow_empty = true) {
    int b = 2 + int(rng() % (bmax - 1));
    int n = int(rng() % (nmax + 1));
    if (!allow_empty && n == 0) n = 1;
    BraidWord w{b, {}};
    for (int i = 0; i < n; i++) {
        int l = 1 + int(rng() % (b - 1));
        w.letters.push_back(rng() % 2 ? l : -l);
    }
    return w;
}

std::uint64_t total_dim(const std::map<std::pair<int, int>, std::uint64_t>& dims) {
    std::uint64_t t = 0;
    for (auto& [iq, d] : dims) t += d;
    return t;
}

}  // namespace

TEST_CASE("resolutions of the trefoil closure") {
    LinkDiagram d = close_braid({2, {1, 1, 1}});
    CHECK(resolve(d, oriented_state(d)).count == 2);
    CHECK(oriented_state(d).bits == 0);
    // explicit smoothing: the all-1 state of the 2-braid closure is a chain
    // of three circles
    CHECK(resolve(d, {0b111}).count == 3);
    CHECK(resolve(d, {0b001}).count == 1);
}

TEST_CASE("resolutions of the one-crossing unknots") {
    LinkDiagram d = close_braid({2, {1}});
    CHECK(resolve(d, {0}).count == 2);
    CHECK(resolve(d, {1}).count == 1);
    LinkDiagram dn = close_braid({2, {-1}});
    CHECK(oriented_state(dn).bits == 1);
    CHECK(resolve(dn, {1}).count == 2);
}

TEST_CASE("oriented state bit pattern") {
    LinkDiagram d = close_braid({3, {1, -2, 1, -2}});
    CHECK(oriented_state(d).bits == 0b1010);
    CHECK(resolve(d, oriented_state(d)).count == 3);
}

TEST_CASE("reduced homology of small links") {
    // unknot: a single class at (0, sl)
    auto u = homology_dims(build_complex(close_braid({2, {1}}), true));
    REQUIRE(u.size() == 1);
    CHECK(u.at({0, -1}) == 1);

    // trefoil: dims 1 at i = 0, 2, 3
    auto t = homology_dims(build_complex(close_braid({2, {1, 1, 1}}), true));
    CHECK(total_dim(t) == 3);
    std::map<int, std::uint64_t> by_i;
    for (auto& [iq, dd] : t) by_i[iq.first] += dd;
    CHECK(by_i == std::map<int, std::uint64_t>{{0, 1}, {2, 1}, {3, 1}});

    // sigma1 sigma1^{-1} closes to the two-component unlink
    auto unlink = homology_dims(build_complex(close_braid({2, {1, -1}}), true));
    CHECK(total_dim(unlink) == 2);

    // a genuine two-crossing unknot closure
    auto u2 = homology_dims(build_complex(close_braid({3, {1, -2}}), true));
    CHECK(total_dim(u2) == 1);

    // T(2,4): total reduced dimension equals the determinant 4
    auto t24 = homology_dims(build_complex(close_braid({2, {1, 1, 1, 1}}), true));
    CHECK(total_dim(t24) == 4);
}

TEST_CASE("homology agrees with the dense quotient oracle") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; trial++) {
        BraidWord w = random_word(rng, 4, 8);
        LinkDiagram d = close_braid(w);
        INFO("word " << to_text(w) << " on " << w.strands);
        auto fast = homology_dims(build_complex(d, true));
        auto slow = oracle::dense_homology(d, oracle::Flavor::reduced_quotient);
        CHECK(fast == slow);
        auto fast_un = homology_dims(build_complex(d, false));
        auto slow_un = oracle::dense_homology(d, oracle::Flavor::unreduced);
        CHECK(fast_un == slow_un);
    }
}

TEST_CASE("streamed table equals materialized homology") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 30; trial++) {
        BraidWord w = random_word(rng, 4, 9);
        LinkDiagram d = close_braid(w);
        CHECK(homology_table(d, true) == homology_dims(build_complex(d, true)));
    }
}

TEST_CASE("q windows restrict the table") {
    LinkDiagram d = close_braid({2, {1, 1, 1}});
    auto full = homology_table(d, true);
    auto window = homology_table(d, true, {}, std::make_pair(1, 5));
    for (auto& [iq, dd] : window) {
        CHECK(iq.second >= 1);
        CHECK(iq.second <= 5);
        CHECK(full.at(iq) == dd);
    }
    for (auto& [iq, dd] : full)
        if (iq.second >= 1 && iq.second <= 5) CHECK(window.count(iq));
    CHECK(homology_table(d, true, {}, std::make_pair(100, 200)).empty());
    CHECK_THROWS_AS(build_complex(d, true, std::make_pair(3, 1)), ParseError);
}

TEST_CASE("resource caps") {
    BraidWord big{2, std::vector<int>(21, 1)};
    CHECK_THROWS_AS(build_complex(close_braid(big), true), ResourceError);
    KhOptions opts;
    opts.max_crossings_full = 22;
    CHECK_NOTHROW(homology_table(close_braid({2, {1, 1, 1}}), true, opts));
}

TEST_CASE("psi chain gradings and cycle property") {
    auto p1 = psi_chain(close_braid({2, {1}}));
    CHECK(p1.i == 0);
    CHECK(p1.q == -1);
    CHECK(p1.circle_count == 2);

    auto p3 = psi_chain(close_braid({2, {1, 1, 1}}));
    CHECK(p3.i == 0);
    CHECK(p3.q == 1);

    auto pm = psi_chain(close_braid({2, {-1}}));
    CHECK(pm.state.bits == 1);
    CHECK(pm.i == 0);
    CHECK(pm.q == -3);
    CHECK(pm.circle_count == 1);

    std::mt19937 rng(31);
    for (int trial = 0; trial < 60; trial++) {
        BraidWord w = random_word(rng, 5, 10);
        auto psi = psi_chain(close_braid(w));  // throws if not a cycle
        CHECK(psi.i == 0);
        CHECK(psi.q == self_linking(w));
    }
}

TEST_CASE("psi nonvanishing on the one-crossing unknots") {
    CHECK(psi_nonzero(close_braid({2, {1}})));
    CHECK_FALSE(psi_nonzero(close_braid({2, {-1}})));
    CHECK_FALSE(psi_nonzero(close_braid({3, {1, 1, -2}})));
}

TEST_CASE("psi class membership agrees with the dense image computation") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 40; trial++) {
        BraidWord w = random_word(rng, 4, 8);
        LinkDiagram d = close_braid(w);
        bool fast = psi_nonzero(d);
        // dense route inside the materialized complex: psi vanishes iff it is
        // in the image of the incoming differential
        auto cx = build_complex(d, true);
        PsiChain psi = psi_chain(d);
        auto key = std::make_pair(psi.i, psi.q);
        auto prev = cx.diff.find({psi.i - 1, psi.q});
        bool dense_zero = false;
        if (prev != cx.diff.end() && cx.groups.count(key)) {
            auto& gens = cx.groups.at(key);
            SparseGF2Matrix m(gens.size(), prev->second.size());
            for (std::size_t c = 0; c < prev->second.size(); c++)
                for (auto r : prev->second[c]) m.flip(r, c);
            std::vector<bool> target(gens.size(), false);
            for (std::size_t g = 0; g < gens.size(); g++)
                if (gens[g].state == psi.state.bits && gens[g].labels == psi.labels)
                    target[g] = true;
            dense_zero = gf2_in_image(m, target).has_value();
        }
        INFO("word " << to_text(w));
        CHECK(fast == !dense_zero);
    }
}

TEST_CASE("psi under cyclic permutation and stabilization") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 60; trial++) {
        BraidWord w = random_word(rng, 4, 8);
        bool base = psi_nonzero(close_braid(w));
        CHECK(psi_nonzero(close_braid(cyclic_permute(w, 1 + long(rng() % 5)))) == base);
        CHECK(psi_nonzero(close_braid(stabilize(w, StabSign::positive))) == base);
        CHECK_FALSE(psi_nonzero(close_braid(stabilize(w, StabSign::negative))));
    }
}

TEST_CASE("positive words always carry a nonzero psi") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 40; trial++) {
        BraidWord w = random_word(rng, 5, 10);
        for (auto& k : w.letters) k = std::abs(k);
        CHECK(psi_nonzero(close_braid(w)));
    }
}

TEST_CASE("isolated negative levels kill psi") {
    std::mt19937 rng(47);
    int found = 0;
    while (found < 40) {
        BraidWord w = random_word(rng, 4, 9);
        if (!detect_isolated_negative_level(w)) continue;
        found++;
        INFO("word " << to_text(w));
        CHECK_FALSE(psi_nonzero(close_braid(w)));
    }
}

TEST_CASE("split words multiply dimensions and psi") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 12; trial++) {
        // levels of the two factors separated by an unused level
        BraidWord w1 = random_word(rng, 3, 4, false);
        BraidWord w2 = random_word(rng, 3, 4, false);
        BraidWord joint{w1.strands + w2.strands, {}};
        joint.letters = w1.letters;
        for (int k : w2.letters) {
            int shift = w1.strands;
            joint.letters.push_back(k > 0 ? k + shift : k - shift);
        }
        auto d1 = homology_dims(build_complex(close_braid(w1), true));
        auto d2 = homology_dims(build_complex(close_braid(w2), true));
        auto dj = homology_dims(build_complex(close_braid(joint), true));
        CHECK(total_dim(dj) == 2 * total_dim(d1) * total_dim(d2));
        CHECK(psi_nonzero(close_braid(joint)) ==
              (psi_nonzero(close_braid(w1)) && psi_nonzero(close_braid(w2))));
    }
}

TEST_CASE("reduced total dimension matches the determinant on alternating words") {
    std::mt19937 rng(59);
    int found = 0;
    while (found < 25) {
        BraidWord w = random_word(rng, 4, 9, false);
        LinkDiagram d = close_braid(w);
        if (!is_alternating_braid_diagram(w) || !is_connected_diagram(d)) continue;
        found++;
        INFO("word " << to_text(w));
        CHECK(BigInt(total_dim(homology_dims(build_complex(d, true)))) == determinant(d));
    }
}
