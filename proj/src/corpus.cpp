#include "tseg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "tseg/error.hpp"
#include "tseg/text.hpp"

namespace tseg {

using nlohmann::json;

std::size_t Segmentation::sentence_count() const noexcept {
    return std::accumulate(masses.begin(), masses.end(), std::size_t{0});
}

namespace {

// "a, b, c, d, e and 195 more" keeps error messages readable on large corpora.
std::string id_list(const std::vector<std::string>& ids) {
    constexpr std::size_t kShown = 5;
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < kShown; ++i) out += (i ? ", " : "") + ids[i];
    if (ids.size() > kShown) out += " and " + std::to_string(ids.size() - kShown) + " more";
    return out;
}

bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (s[i] < '0' || s[i] > '9') return false;
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

Document document_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("expected a JSON object");
    Document doc;
    const auto id = j.find("doc_id");
    if (id == j.end() || !id->is_string()) throw ValidationError("missing string field 'doc_id'");
    doc.doc_id = id->get<std::string>();

    if (auto g = j.find("group"); g != j.end() && !g->is_null()) {
        if (!g->is_string()) throw ValidationError("'group' must be a string or null");
        doc.group = g->get<std::string>();
    }
    if (auto d = j.find("date"); d != j.end() && !d->is_null()) {
        if (!d->is_string()) throw ValidationError("'date' must be a string or null");
        doc.date = d->get<std::string>();
    }
    const auto sents = j.find("sentences");
    if (sents == j.end() || !sents->is_array())
        throw ValidationError("missing array field 'sentences'");
    for (const auto& s : *sents) {
        if (!s.is_string()) throw ValidationError("sentences must be strings");
        doc.sentences.push_back(s.get<std::string>());
    }
    if (auto b = j.find("boundaries"); b != j.end()) {
        if (!b->is_array()) throw ValidationError("'boundaries' must be an array");
        for (const auto& v : *b) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw ValidationError("document '" + doc.doc_id +
                                      "': boundaries must be non-negative integers");
            doc.boundaries.push_back(v.get<std::size_t>());
        }
    }
    return doc;
}

}  // namespace

void validate_document(const Document& doc) {
    const std::string where = "document '" + doc.doc_id + "': ";
    if (doc.doc_id.empty()) throw ValidationError("document with empty doc_id");
    if (doc.sentences.empty()) throw ValidationError(where + "no sentences");
    for (std::size_t i = 0; i < doc.sentences.size(); ++i)
        if (text::trim(doc.sentences[i]).empty())
            throw ValidationError(where + "sentence " + std::to_string(i) + " is empty");
    if (doc.date && !is_iso_date(*doc.date))
        throw ValidationError(where + "date '" + *doc.date + "' is not YYYY-MM-DD");
    const std::size_t n = doc.sentences.size();
    for (std::size_t i = 0; i < doc.boundaries.size(); ++i) {
        const std::size_t b = doc.boundaries[i];
        if (b + 1 >= n)
            throw ValidationError(where + "boundary " + std::to_string(b) +
                                  " out of range for " + std::to_string(n) + " sentences");
        if (i > 0 && b <= doc.boundaries[i - 1])
            throw ValidationError(where + "boundaries must be strictly increasing");
    }
}

std::vector<Document> parse_corpus(std::istream& in, std::string_view source) {
    std::vector<Document> docs;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ValidationError(where + "malformed JSON (" + e.what() + ")");
        }
        try {
            Document doc = document_from_json(j);
            validate_document(doc);
            if (!seen.insert(doc.doc_id).second)
                throw ValidationError("duplicate doc_id '" + doc.doc_id + "'");
            docs.push_back(std::move(doc));
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        } catch (const json::exception& e) {
            throw ValidationError(where + e.what());
        }
    }
    return docs;
}

std::vector<Document> parse_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file '" + path + "'");
    return parse_corpus(in, path);
}

std::string document_to_json_line(const Document& doc) {
    json j;
    j["doc_id"] = doc.doc_id;
    j["group"] = doc.group ? json(*doc.group) : json(nullptr);
    j["date"] = doc.date ? json(*doc.date) : json(nullptr);
    j["sentences"] = doc.sentences;
    j["boundaries"] = doc.boundaries;
    return j.dump();
}

void write_corpus(const std::vector<Document>& docs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write corpus file '" + path + "'");
    for (const auto& doc : docs) out << document_to_json_line(doc) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<std::string> split_sentences(std::string_view input,
                                         std::span<const std::string> abbreviations) {
    std::vector<std::string> out;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    auto emit = [&](std::string_view piece) {
        const auto t = text::trim(piece);
        if (!t.empty()) out.emplace_back(t);
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const char c = input[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 >= input.size() || !is_space(input[i + 1])) continue;
        std::size_t next = i + 1;
        while (next < input.size() && is_space(input[next])) ++next;
        if (next >= input.size()) continue;
        std::size_t probe = next;
        const char32_t cp = text::decode_utf8(input, probe);
        if (!(text::is_upper(cp) || (cp >= '0' && cp <= '9'))) continue;

        std::size_t tok_begin = i;
        while (tok_begin > start && !is_space(input[tok_begin - 1])) --tok_begin;
        const std::string_view token = input.substr(tok_begin, i + 1 - tok_begin);
        if (std::find(abbreviations.begin(), abbreviations.end(), token) != abbreviations.end())
            continue;

        emit(input.substr(start, i + 1 - start));
        start = i + 1;
    }
    if (start < input.size()) emit(input.substr(start));
    return out;
}

std::vector<std::string> default_abbreviations() {
    return {// Portuguese
            "Sr.", "Sra.", "Srs.", "Sras.", "Dr.", "Dra.", "Drs.", "Exmo.", "Exma.", "Prof.",
            "Profa.", "Eng.", "Arq.", "Art.", "art.", "n.", "n.º", "nº.", "Av.", "Lda.",
            "p.", "pág.", "etc.", "V.Exa.", "Ex.",
            // English
            "Mr.", "Mrs.", "Ms.", "St.", "Jr.", "Sr.", "vs.", "e.g.", "i.e.", "No.", "Fig.",
            "Inc.", "Ltd.", "Co.", "Mt.", "approx."};
}

std::vector<std::string> load_abbreviations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open abbreviation file '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        out.emplace_back(t);
    }
    return out;
}

Segmentation boundaries_to_masses(std::span<const std::size_t> boundaries, std::size_t n) {
    Segmentation seg;
    std::size_t prev_end = 0;  // first sentence of the current segment
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        const std::size_t b = boundaries[i];
        if (b + 1 >= n)
            throw ValidationError("boundary " + std::to_string(b) + " out of range for n=" +
                                  std::to_string(n));
        if (b + 1 <= prev_end) throw ValidationError("boundaries must be strictly increasing");
        seg.masses.push_back(b + 1 - prev_end);
        prev_end = b + 1;
    }
    if (n == 0) throw ValidationError("segmentation of an empty document");
    seg.masses.push_back(n - prev_end);
    return seg;
}

std::vector<std::size_t> masses_to_boundaries(const Segmentation& seg) {
    std::vector<std::size_t> out;
    if (seg.masses.empty()) return out;
    out.reserve(seg.masses.size() - 1);
    std::size_t cum = 0;
    for (std::size_t i = 0; i + 1 < seg.masses.size(); ++i) {
        cum += seg.masses[i];
        out.push_back(cum - 1);
    }
    return out;
}

CorpusSplit chronological_split(std::span<const Document> docs, SplitFractions f) {
    if (f.train < 0 || f.val < 0 || f.test < 0 || std::abs(f.train + f.val + f.test - 1.0) > 1e-9)
        throw ValidationError("split fractions must be non-negative and sum to 1");

    std::vector<std::string> missing;
    for (const auto& d : docs)
        if (!d.date) missing.push_back(d.doc_id);
    if (!missing.empty())
        throw ValidationError("chronological split requires dates; missing for: " + id_list(missing));

    std::vector<const Document*> order;
    order.reserve(docs.size());
    for (const auto& d : docs) order.push_back(&d);
    std::sort(order.begin(), order.end(), [](const Document* a, const Document* b) {
        if (*a->date != *b->date) return *a->date < *b->date;
        return a->doc_id < b->doc_id;
    });

    const double total = static_cast<double>(docs.size());
    const auto n_train = static_cast<std::size_t>(std::floor(f.train * total + 1e-9));
    const auto n_val =
        std::min(static_cast<std::size_t>(std::floor(f.val * total + 1e-9)), docs.size() - n_train);

    CorpusSplit split;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& bucket = i < n_train ? split.train : (i < n_train + n_val ? split.val : split.test);
        bucket.push_back(order[i]->doc_id);
    }
    return split;
}

std::vector<GroupFold> group_folds(std::span<const Document> docs) {
    std::vector<std::string> missing;
    std::map<std::string, std::vector<std::string>> by_group;
    for (const auto& d : docs) {
        if (!d.group) {
            missing.push_back(d.doc_id);
            continue;
        }
        by_group[*d.group].push_back(d.doc_id);
    }
    if (!missing.empty())
        throw ValidationError("group folds require a group on every document; missing for: " +
                              id_list(missing));
    if (by_group.size() < 2)
        throw ValidationError("group folds need at least two groups (a single group leaves "
                              "nothing to train on)");

    std::vector<GroupFold> folds;
    for (const auto& [group, ids] : by_group) {
        GroupFold fold;
        fold.held_out_group = group;
        fold.test = ids;
        for (const auto& d : docs)
            if (*d.group != group) fold.train.push_back(d.doc_id);
        folds.push_back(std::move(fold));
    }
    return folds;
}

CorpusSplit load_predefined_split(const std::string& path, std::span<const Document> docs) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open split file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("split file '" + path + "': " + e.what());
    }
    std::set<std::string> known;
    for (const auto& d : docs) known.insert(d.doc_id);

    CorpusSplit split;
    std::set<std::string> used;
    auto read = [&](const char* key, std::vector<std::string>& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_array()) throw ValidationError(std::string("split '") + key + "' must be a list");
        for (const auto& v : j[key]) {
            const auto id = v.get<std::string>();
            if (!known.count(id))
                throw ValidationError("split file references unknown doc_id '" + id + "'");
            if (!used.insert(id).second)
                throw ValidationError("doc_id '" + id + "' appears in more than one split");
            dst.push_back(id);
        }
    };
    read("train", split.train);
    read("val", split.val);
    read("test", split.test);
    if (used.size() != known.size())
        throw ValidationError("split file leaves " + std::to_string(known.size() - used.size()) +
                              " corpus document(s) unassigned");
    return split;
}

std::vector<Document> select_documents(std::span<const Document> docs,
                                       std::span<const std::string> ids) {
    std::unordered_map<std::string_view, const Document*> index;
    for (const auto& d : docs) index.emplace(d.doc_id, &d);
    std::vector<Document> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        const auto it = index.find(id);
        if (it == index.end()) throw ValidationError("unknown doc_id '" + id + "'");
        out.push_back(*it->second);
    }
    return out;
}

}  // namespace tseg
