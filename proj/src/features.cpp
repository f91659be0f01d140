#include "tseg/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "tseg/text.hpp"

namespace tseg {

std::uint32_t hash_feature(std::string_view key) noexcept {
    return static_cast<std::uint32_t>(text::fnv1a64(key) % kSparseDim);
}

bool has_structure_marker(std::string_view sentence) {
    const auto s = text::trim(sentence);
    if (s.empty()) return false;

    std::size_t pos = 0;
    const char32_t first = text::decode_utf8(s, pos);
    if (first == '-' || first == '*' || first == 0x2013 || first == 0x2014 || first == 0x2022)
        return true;

    if (first >= '0' && first <= '9') {
        std::size_t i = 1;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        while (i < s.size() && s[i] == ' ') ++i;
        if (i < s.size()) {
            const char c = s[i];
            if (c == '.' || c == ')' || c == '-' || c == ':') return true;
            std::size_t p = i;
            const char32_t cp = text::decode_utf8(s, p);
            if (cp == 0x2013 || cp == 0x2014 || cp == 0xBA) return true;
        }
        return false;
    }

    // all-caps first word with at least two letters
    std::size_t letters = 0;
    pos = 0;
    while (pos < s.size()) {
        const std::size_t before = pos;
        const char32_t cp = text::decode_utf8(s, pos);
        if (cp == ' ' || cp == '\t') {
            pos = before;
            break;
        }
        if (text::is_letter(cp)) {
            if (!text::is_upper(cp)) return false;
            ++letters;
        }
    }
    return letters >= 2;
}

namespace {

void add_side(std::string_view prefix, const std::vector<std::string>& tokens,
              std::map<std::uint32_t, double>& acc) {
    std::string key;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        key.assign(prefix);
        key += tokens[i];
        acc[hash_feature(key)] += 1.0;
        if (i + 1 < tokens.size()) {
            key += ' ';
            key += tokens[i + 1];
            acc[hash_feature(key)] += 1.0;
        }
    }
}

}  // namespace

PairFeatures featurize(std::string_view text_a, std::string_view text_b) {
    const auto ta = text::tokenize(text_a);
    const auto tb = text::tokenize(text_b);

    PairFeatures f;
    std::map<std::uint32_t, double> sparse;
    add_side("A:", ta, sparse);
    add_side("B:", tb, sparse);
    f.index.reserve(sparse.size());
    f.value.reserve(sparse.size());
    for (const auto& [i, v] : sparse) {
        f.index.push_back(i);
        f.value.push_back(v);
    }

    std::unordered_map<std::string_view, double> ca, cb;
    for (const auto& t : ta) ca[t] += 1.0;
    for (const auto& t : tb) cb[t] += 1.0;

    std::size_t inter = 0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, c] : ca) {
        na += c * c;
        if (auto it = cb.find(t); it != cb.end()) {
            ++inter;
            dot += c * it->second;
        }
    }
    for (const auto& [t, c] : cb) nb += c * c;
    const std::size_t uni = ca.size() + cb.size() - inter;

    f.dense[0] = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    f.dense[1] = (na == 0.0 || nb == 0.0) ? 0.0 : std::min(1.0, dot / std::sqrt(na * nb));
    const auto la = static_cast<double>(ta.size()), lb = static_cast<double>(tb.size());
    f.dense[2] = std::max(la, lb) == 0.0 ? 1.0 : std::min(la, lb) / std::max(la, lb);
    f.dense[3] = has_structure_marker(text_a) ? 1.0 : 0.0;
    f.dense[4] = has_structure_marker(text_b) ? 1.0 : 0.0;
    return f;
}

}  // namespace tseg
