// JSON serialization of results, the report envelope, and a small
// content-addressed result cache (write-temp-then-rename, version-keyed).
#pragma once

#include "tbl/braid.hpp"
#include "tbl/cover.hpp"
#include "tbl/diagram.hpp"
#include "tbl/khovanov.hpp"
#include "tbl/verdict.hpp"

#include <json.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace tbl {

inline constexpr const char* kToolVersion = "1.0.0";

using json = nlohmann::ordered_json;

inline json to_json(const BraidWord& w) {
    return json{{"strands", w.strands}, {"letters", w.letters}};
}

inline json to_json(const H1Group& h) {
    json t = json::array();
    for (auto& d : h.torsion) t.push_back(d.str());
    return json{{"torsion", t}, {"free_rank", h.free_rank}, {"group", h.describe()}};
}

inline json dims_to_json(const std::map<std::pair<int, int>, std::uint64_t>& dims) {
    json rows = json::array();
    std::uint64_t total = 0;
    for (auto& [iq, d] : dims) {
        rows.push_back(json{{"i", iq.first}, {"q", iq.second}, {"dim", d}});
        total += d;
    }
    return json{{"table", rows}, {"total_dim", total}};
}

inline json to_json(const SurgeryPresentation& sp) {
    json chords = json::array();
    for (auto& comp : sp.components) {
        const Chord& c = sp.chords.chords[comp.chord];
        chords.push_back(json{{"position", c.position},
                              {"level", c.level},
                              {"sign", c.sign},
                              {"contact_framing", comp.contact_coeff},
                              {"smooth_framing", comp.smooth_framing}});
    }
    json dist = json::array();
    for (auto& [l, t] : sp.chords.distinguished)
        dist.push_back(json{{"level", l}, {"position", t}});
    json mat = json::array();
    for (int i = 0; i < sp.linking_matrix.n; i++) {
        json row = json::array();
        for (int j = 0; j < sp.linking_matrix.n; j++) row.push_back(sp.linking_matrix.at(i, j));
        mat.push_back(row);
    }
    return json{{"normalized_word", to_text(sp.chords.normalized)},
                {"inserted_levels", sp.chords.inserted_levels},
                {"distinguished", dist},
                {"chords", chords},
                {"endpoint_order", sp.chords.endpoint_order},
                {"linking_matrix", mat}};
}

inline json to_json(const ContactReport& r) {
    json j{{"sl", r.sl},
           {"c1_is_zero", r.c1_is_zero},
           {"fillability", to_string(r.fillability)},
           {"c_invariant", to_string(r.c_invariant)}};
    j["h1"] = r.h1 ? to_json(*r.h1) : json(nullptr);
    j["d3"] = r.d3 ? json(to_string(*r.d3)) : json(nullptr);
    j["psi_nonzero"] = r.psi_nonzero ? json(*r.psi_nonzero) : json(nullptr);
    json rules = json::array();
    for (auto& rule : r.rules_fired)
        rules.push_back(json{{"id", rule.id}, {"statement", rule.statement}});
    j["rules_fired"] = rules;
    if (r.conjecture_note) j["conjecture_note"] = *r.conjecture_note;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

// --- cache -----------------------------------------------------------------

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

class ResultCache {
  public:
    explicit ResultCache(std::optional<std::string> dir) : dir_(std::move(dir)) {
        if (dir_) std::filesystem::create_directories(*dir_);
    }

    bool enabled() const { return dir_.has_value(); }

    std::string key(const std::string& op, const std::string& word,
                    const json& options) const {
        std::string payload = std::string(kToolVersion) + "\n" + op + "\n" + word + "\n" +
                              options.dump();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx",
                      (unsigned long long)fnv1a(payload));
        return op + "-" + buf;
    }

    std::optional<json> load(const std::string& key) const {
        if (!dir_) return std::nullopt;
        std::ifstream in(*dir_ + "/" + key + ".json");
        if (!in) return std::nullopt;
        json j;
        try {
            in >> j;
        } catch (...) {
            return std::nullopt;
        }
        if (!j.contains("tool_version") || j["tool_version"] != kToolVersion)
            return std::nullopt;  // stale version
        return j["payload"];
    }

    void store(const std::string& key, const json& payload) const {
        if (!dir_) return;
        json j{{"tool_version", kToolVersion}, {"payload", payload}};
        std::string final_path = *dir_ + "/" + key + ".json";
        std::string tmp_path = final_path + ".tmp" + std::to_string(::getpid());
        {
            std::ofstream out(tmp_path);
            out << j.dump();
        }
        std::filesystem::rename(tmp_path, final_path);
    }

  private:
    std::optional<std::string> dir_;
};

}  // namespace tbl
