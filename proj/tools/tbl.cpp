// tbl: invariants of transverse links presented as closed braids.
//
// Subcommands: sl, kh, psi, cover, d3, verdict, bm, report, batch.
// Results are emitted as a JSON envelope on stdout (or --format text);
// diagnostics and timings go to stderr. Exit codes: 0 ok, 2 parse error,
// 3 resource cap, 4 linking-matrix determinant mismatch.

#include <CLI11.hpp>

#include "tbl/braid.hpp"
#include "tbl/cover.hpp"
#include "tbl/diagram.hpp"
#include "tbl/khovanov.hpp"
#include "tbl/reporting.hpp"
#include "tbl/verdict.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace tbl;

namespace {

struct GlobalOpts {
    std::optional<int> strands;
    std::optional<int> max_crossings;
    std::optional<std::string> cache_dir;
    std::string format = "json";
    bool paper_d3_constant = false;
    bool verbose = false;

    KhOptions kh_options() const {
        KhOptions k;
        if (max_crossings) {
            k.max_crossings_full = *max_crossings;
            k.max_crossings_window = std::max(k.max_crossings_window, *max_crossings);
        }
        return k;
    }
    Rational d3_const() const { return paper_d3_constant ? Rational(-1, 2) : Rational(-1); }
};

json options_json(const GlobalOpts& g) {
    json j = json::object();
    if (g.strands) j["strands"] = *g.strands;
    if (g.max_crossings) j["max_crossings"] = *g.max_crossings;
    j["d3_constant"] = g.paper_d3_constant ? "-1/2" : "-1";
    return j;
}

json envelope(const GlobalOpts& g, const BraidWord& w, const std::string& op, json results) {
    return json{{"tool_version", kToolVersion},
                {"input_word", to_text(w)},
                {"subcommand", op},
                {"options", options_json(g)},
                {"results", std::move(results)}};
}

void emit(const GlobalOpts& g, const json& env) {
    if (g.format == "text") {
        std::cout << env.dump(2) << "\n";
    } else {
        std::cout << env.dump() << "\n";
    }
}

std::optional<std::pair<int, int>> parse_q_window(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto colon = s.find(':');
    if (colon == std::string::npos) {
        int q = std::stoi(s);
        return std::make_pair(q, q);
    }
    return std::make_pair(std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1)));
}

json kh_payload(const GlobalOpts& g, const ResultCache& cache, const BraidWord& w,
                bool reduced, const std::string& q_window) {
    json opts{{"reduced", reduced}, {"q_window", q_window}};
    std::string key = cache.key("kh", to_text(w) + "#" + std::to_string(w.strands), opts);
    if (auto hit = cache.load(key)) {
        if (g.verbose) std::cerr << "cache hit: " << key << "\n";
        return *hit;
    }
    auto dims = homology_table(close_braid(w), reduced, g.kh_options(), parse_q_window(q_window));
    json payload = dims_to_json(dims);
    payload["reduced"] = reduced;
    cache.store(key, payload);
    return payload;
}

json psi_payload(const GlobalOpts& g, const ResultCache& cache, const BraidWord& w) {
    json opts = json::object();
    std::string key = cache.key("psi", to_text(w) + "#" + std::to_string(w.strands), opts);
    if (auto hit = cache.load(key)) {
        if (g.verbose) std::cerr << "cache hit: " << key << "\n";
        return *hit;
    }
    LinkDiagram d = close_braid(w);
    PsiChain psi = psi_chain(d, true);
    bool nz = psi_nonzero(d, g.kh_options());
    json payload{{"i", psi.i}, {"q", psi.q}, {"nonzero", nz}};
    cache.store(key, payload);
    return payload;
}

json cover_payload(const GlobalOpts& g, const BraidWord& w) {
    auto sp = linking_matrix(chord_presentation(w));
    json j = to_json(sp);
    j["h1"] = to_json(h1(sp));
    auto v = d3(sp, self_linking(w), g.d3_const());
    j["d3"] = v ? json(to_string(*v)) : json(nullptr);
    j["c1_is_zero"] = true;
    return j;
}

json report_payload(const GlobalOpts& g, const ResultCache& cache, const BraidWord& w,
                    bool with_kh) {
    json j;
    j["sl"] = self_linking(w);
    LinkDiagram d = close_braid(w);
    j["components"] = component_count(d);
    j["alternating"] = is_alternating_braid_diagram(w);
    j["determinant"] = determinant(d).str();
    if (component_count(d) == 1) j["signature"] = signature(d);
    ClassifyOptions copts;
    copts.kh = g.kh_options();
    copts.d3_constant = g.d3_const();
    j["verdict"] = to_json(classify(w, std::nullopt, copts));
    try {
        j["cover"] = cover_payload(g, w);
    } catch (const DeterminantMismatch& e) {
        j["cover"] = json{{"error", e.what()}};
    }
    if (with_kh) {
        try {
            j["kh_reduced"] = kh_payload(g, cache, w, true, "");
        } catch (const ResourceError& e) {
            j["kh_reduced"] = json{{"skipped", e.what()}};
        }
        try {
            j["psi"] = psi_payload(g, cache, w);
        } catch (const ResourceError& e) {
            j["psi"] = json{{"skipped", e.what()}};
        }
    }
    return j;
}

json bm_payload(const GlobalOpts& g, const ResultCache& cache, int p, int q, int r,
                bool with_kh) {
    BmPair pair = bm_pair(p, q, r);
    json j;
    j["p"] = p;
    j["q"] = q;
    j["r"] = r;
    if (pair.warning) j["warning"] = *pair.warning;
    json cmp = json::object();
    json sides = json::array();
    for (const BraidWord* wp : {&pair.k1, &pair.k2}) {
        const BraidWord& w = *wp;
        json side;
        side["word"] = to_text(w);
        side["sl"] = self_linking(w);
        LinkDiagram d = close_braid(w);
        side["determinant"] = determinant(d).str();
        auto sp = linking_matrix(chord_presentation(w));
        side["h1"] = to_json(h1(sp));
        auto v = d3(sp, self_linking(w), g.d3_const());
        side["d3"] = v ? json(to_string(*v)) : json(nullptr);
        side["psi"] = psi_payload(g, cache, w);
        if (with_kh) side["kh_reduced"] = kh_payload(g, cache, w, true, "");
        sides.push_back(side);
    }
    j["k1"] = sides[0];
    j["k2"] = sides[1];
    for (auto& field : {"sl", "determinant", "h1", "d3", "psi"})
        cmp[field] = (sides[0][field] == sides[1][field]);
    if (with_kh) cmp["kh_reduced"] = (sides[0]["kh_reduced"] == sides[1]["kh_reduced"]);
    j["equal"] = cmp;
    return j;
}

int run_batch(const GlobalOpts& g, const ResultCache& cache, const std::string& file,
              int jobs) {
    std::ifstream in(file);
    if (!in) {
        std::cerr << "cannot open batch file: " << file << "\n";
        return 2;
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    std::vector<std::string> outputs(lines.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= lines.size()) break;
            json env;
            try {
                BraidWord w = parse_braid(lines[i], g.strands);
                env = envelope(g, w, "report", report_payload(g, cache, w, true));
            } catch (const std::exception& e) {
                env = json{{"tool_version", kToolVersion},
                           {"input_word", lines[i]},
                           {"error", e.what()}};
            }
            outputs[i] = env.dump();
        }
    };
    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; t++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& s : outputs) std::cout << s << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariants of transverse links given as closed braid words"};
    app.require_subcommand(1);

    GlobalOpts g;
    int strands_flag = 0, max_crossings_flag = 0;
    app.add_option("--strands", strands_flag, "strand count override for parsing");
    app.add_option("--max-crossings", max_crossings_flag, "crossing cap override");
    std::string cache_dir_flag;
    app.add_option("--cache-dir", cache_dir_flag,
                   "result cache directory (default: TBL_CACHE_DIR)");
    app.add_option("--format", g.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--paper-d3-constant", g.paper_d3_constant,
                 "use the d3 normalization constant -1/2 instead of the calibrated -1 "
                 "(comparison runs)");
    app.add_flag("--verbose", g.verbose, "timing and cache diagnostics on stderr");

    std::string word_arg, q_window_arg, batch_file;
    bool reduced_flag = false, with_kh = false;
    int bp = 0, bq = 0, br = 0, jobs = 1;

    auto add_word = [&](CLI::App* sub) {
        sub->add_option("word", word_arg, "braid word, e.g. \"1 1 1\" or aAbB")->required();
    };
    auto* c_sl = app.add_subcommand("sl", "self-linking number");
    add_word(c_sl);
    auto* c_kh = app.add_subcommand("kh", "Khovanov homology dimensions over GF(2)");
    add_word(c_kh);
    c_kh->add_flag("--reduced", reduced_flag, "reduced homology");
    c_kh->add_option("--q-window", q_window_arg, "restrict to quantum gradings a:b");
    auto* c_psi = app.add_subcommand("psi", "transverse class in reduced Khovanov homology");
    add_word(c_psi);
    auto* c_cover = app.add_subcommand("cover", "surgery presentation of the branched double cover");
    add_word(c_cover);
    auto* c_d3 = app.add_subcommand("d3", "d3 invariant of the covering contact structure");
    add_word(c_d3);
    auto* c_verdict = app.add_subcommand("verdict", "rule-based tightness/fillability report");
    add_word(c_verdict);
    auto* c_bm = app.add_subcommand("bm", "the two-braid family with contactomorphic covers");
    c_bm->add_option("--p", bp)->required();
    c_bm->add_option("--q", bq)->required();
    c_bm->add_option("--r", br)->required();
    c_bm->add_flag("--with-kh", with_kh, "include full reduced homology tables");
    auto* c_report = app.add_subcommand("report", "all invariants");
    add_word(c_report);
    auto* c_batch = app.add_subcommand("batch", "process a file of braid words");
    c_batch->add_option("--file", batch_file, "one braid word per line")->required();
    c_batch->add_option("--jobs", jobs, "parallel workers (output order is preserved)");

    CLI11_PARSE(app, argc, argv);

    if (strands_flag > 0) g.strands = strands_flag;
    if (max_crossings_flag > 0) g.max_crossings = max_crossings_flag;
    if (!cache_dir_flag.empty()) g.cache_dir = cache_dir_flag;
    else if (const char* env = std::getenv("TBL_CACHE_DIR")) g.cache_dir = env;
    ResultCache cache(g.cache_dir);

    auto started = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (c_batch->parsed()) {
            rc = run_batch(g, cache, batch_file, jobs);
        } else if (c_bm->parsed()) {
            BmPair pair = bm_pair(bp, bq, br);
            emit(g, envelope(g, pair.k1, "bm", bm_payload(g, cache, bp, bq, br, with_kh)));
        } else {
            BraidWord w = parse_braid(word_arg, g.strands);
            if (c_sl->parsed()) {
                emit(g, envelope(g, w, "sl", json{{"sl", self_linking(w)}}));
            } else if (c_kh->parsed()) {
                emit(g, envelope(g, w, "kh", kh_payload(g, cache, w, reduced_flag, q_window_arg)));
            } else if (c_psi->parsed()) {
                emit(g, envelope(g, w, "psi", psi_payload(g, cache, w)));
            } else if (c_cover->parsed()) {
                emit(g, envelope(g, w, "cover", cover_payload(g, w)));
            } else if (c_d3->parsed()) {
                auto sp = linking_matrix(chord_presentation(w));
                auto v = d3(sp, self_linking(w), g.d3_const());
                emit(g, envelope(g, w, "d3",
                                 json{{"d3", v ? json(to_string(*v)) : json(nullptr)}}));
            } else if (c_verdict->parsed()) {
                ClassifyOptions copts;
                copts.kh = g.kh_options();
                copts.d3_constant = g.d3_const();
                emit(g, envelope(g, w, "verdict", to_json(classify(w, std::nullopt, copts))));
            } else if (c_report->parsed()) {
                emit(g, envelope(g, w, "report", report_payload(g, cache, w, true)));
            }
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        rc = 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        rc = 3;
    } catch (const DeterminantMismatch& e) {
        std::cerr << "determinant mismatch: " << e.what() << "\n";
        rc = 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 1;
    }
    if (g.verbose) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
        std::cerr << "elapsed: " << ms << " ms\n";
    }
    return rc;
}
