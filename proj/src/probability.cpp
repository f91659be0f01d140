#include "tseg/probability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "tseg/error.hpp"
#include "tseg/text.hpp"

namespace tseg {

using nlohmann::json;

ProbabilityMap read_external_probs(std::istream& in, std::string_view source,
                                   std::optional<std::span<const Document>> corpus) {
    ProbabilityMap out;
    std::set<std::pair<std::string, std::size_t>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
        ProbabilityRecord rec;
        try {
            const json j = json::parse(line);
            rec.doc_id = j.at("doc_id").get<std::string>();
            const auto& g = j.at("gap_index");
            if (!g.is_number_integer() || g.get<long long>() < 0)
                throw ValidationError("gap_index must be a non-negative integer");
            rec.gap_index = g.get<std::size_t>();
            const auto& p = j.at("p_not_next");
            if (!p.is_number()) throw ValidationError("p_not_next must be a number");
            rec.p_not_next = p.get<double>();
        } catch (const json::exception& e) {
            throw ValidationError(where + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        }
        if (!(rec.p_not_next >= 0.0 && rec.p_not_next <= 1.0))
            throw ValidationError(where + "p_not_next out of range [0, 1] for document '" +
                                  rec.doc_id + "' gap " + std::to_string(rec.gap_index));
        if (!seen.emplace(rec.doc_id, rec.gap_index).second)
            throw ValidationError(where + "duplicate record for document '" + rec.doc_id +
                                  "' gap " + std::to_string(rec.gap_index));
        out[rec.doc_id].push_back(std::move(rec));
    }
    for (auto& [id, recs] : out)
        std::sort(recs.begin(), recs.end(),
                  [](const auto& a, const auto& b) { return a.gap_index < b.gap_index; });

    if (corpus) {
        std::set<std::string> known;
        for (const auto& d : *corpus) known.insert(d.doc_id);
        for (const auto& [id, recs] : out)
            if (!known.count(id))
                throw ValidationError(std::string(source) + ": probabilities for unknown document '" +
                                      id + "'");
        std::vector<Document> listed;
        for (const auto& d : *corpus)
            if (out.count(d.doc_id)) listed.push_back(d);
        check_coverage(out, listed);
    }
    return out;
}

ProbabilityMap read_external_probs(const std::string& path,
                                   std::optional<std::span<const Document>> corpus) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open probability file '" + path + "'");
    return read_external_probs(in, path, corpus);
}

void check_coverage(const ProbabilityMap& probs, std::span<const Document> docs) {
    for (const auto& d : docs) {
        const std::size_t gaps = d.gap_count();
        const auto it = probs.find(d.doc_id);
        if (it == probs.end()) {
            if (gaps == 0) continue;
            throw ValidationError("no probabilities for document '" + d.doc_id + "'");
        }
        const auto& recs = it->second;
        for (std::size_t g = 0; g < std::max(gaps, recs.size()); ++g) {
            if (g >= recs.size())
                throw ValidationError("document '" + d.doc_id + "': missing probability for gap " +
                                      std::to_string(g));
            if (recs[g].gap_index != g) {
                if (recs[g].gap_index >= gaps)
                    throw ValidationError("document '" + d.doc_id + "': gap " +
                                          std::to_string(recs[g].gap_index) +
                                          " out of range for " + std::to_string(d.size()) +
                                          " sentences");
                throw ValidationError("document '" + d.doc_id + "': missing probability for gap " +
                                      std::to_string(g));
            }
            if (g >= gaps)
                throw ValidationError("document '" + d.doc_id + "': gap " + std::to_string(g) +
                                      " out of range for " + std::to_string(d.size()) +
                                      " sentences");
        }
    }
}

void write_probs(const ProbabilityMap& probs, std::ostream& out) {
    for (const auto& [id, recs] : probs)
        for (const auto& r : recs) {
            json j;
            j["doc_id"] = r.doc_id;
            j["gap_index"] = r.gap_index;
            j["p_not_next"] = r.p_not_next;
            out << j.dump() << '\n';
        }
}

void write_probs(const ProbabilityMap& probs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write probability file '" + path + "'");
    write_probs(probs, out);
}

}  // namespace tseg
