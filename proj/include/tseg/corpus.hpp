#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tseg {

/// A document as an ordered list of sentences with gold boundaries.
///
/// Boundaries are gap indices: boundary `i` separates sentences `i` and
/// `i + 1` (0-based), so valid values lie in `[0, n - 2]`.
struct Document {
    std::string doc_id;
    std::optional<std::string> group;
    std::optional<std::string> date;  // YYYY-MM-DD
    std::vector<std::string> sentences;
    std::vector<std::size_t> boundaries;

    std::size_t size() const noexcept { return sentences.size(); }
    std::size_t gap_count() const noexcept { return sentences.empty() ? 0 : sentences.size() - 1; }
};

/// Segment lengths in sentences. Sum equals the document length.
struct Segmentation {
    std::vector<std::size_t> masses;

    std::size_t sentence_count() const noexcept;
    std::size_t segment_count() const noexcept { return masses.size(); }
    bool operator==(const Segmentation&) const = default;
};

struct CorpusSplit {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

struct GroupFold {
    std::string held_out_group;
    std::vector<std::string> train;
    std::vector<std::string> test;
};

/// Throws ValidationError if the document breaks any structural invariant.
void validate_document(const Document& doc);

std::vector<Document> parse_corpus(const std::string& path);
std::vector<Document> parse_corpus(std::istream& in, std::string_view source = "<stream>");
void write_corpus(const std::vector<Document>& docs, const std::string& path);
std::string document_to_json_line(const Document& doc);

std::vector<std::string> split_sentences(std::string_view text,
                                         std::span<const std::string> abbreviations);
std::vector<std::string> default_abbreviations();
std::vector<std::string> load_abbreviations(const std::string& path);

Segmentation boundaries_to_masses(std::span<const std::size_t> boundaries, std::size_t n);
std::vector<std::size_t> masses_to_boundaries(const Segmentation& seg);

struct SplitFractions {
    double train = 0.6;
    double val = 0.2;
    double test = 0.2;
};

CorpusSplit chronological_split(std::span<const Document> docs, SplitFractions fractions = {});
std::vector<GroupFold> group_folds(std::span<const Document> docs);

/// Reads {"train": [...], "val": [...], "test": [...]} and checks every id
/// exists in `docs` and the lists are disjoint.
CorpusSplit load_predefined_split(const std::string& path, std::span<const Document> docs);

/// Selects documents by id, in the order of `ids`.
std::vector<Document> select_documents(std::span<const Document> docs,
                                       std::span<const std::string> ids);

}  // namespace tseg
