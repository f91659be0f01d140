#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tseg {

inline constexpr std::uint32_t kSparseDim = 1u << 18;
inline constexpr std::size_t kDenseDim = 5;
inline constexpr std::array<std::string_view, kDenseDim> kDenseNames{
    "token_jaccard", "tf_cosine", "length_ratio", "marker_a", "marker_b"};

/// Features of one sentence pair: hashed n-gram counts plus five dense
/// similarity/shape features (see kDenseNames).
struct PairFeatures {
    std::vector<std::uint32_t> index;  // ascending, < kSparseDim
    std::vector<double> value;
    std::array<double, kDenseDim> dense{};

    double token_jaccard() const noexcept { return dense[0]; }
    double tf_cosine() const noexcept { return dense[1]; }
    double length_ratio() const noexcept { return dense[2]; }
    double marker_a() const noexcept { return dense[3]; }
    double marker_b() const noexcept { return dense[4]; }
};

PairFeatures featurize(std::string_view text_a, std::string_view text_b);

/// True when the sentence opens like a list item or heading: leading digits
/// followed by a delimiter, a dash/bullet, or an all-caps first word.
bool has_structure_marker(std::string_view sentence);

std::uint32_t hash_feature(std::string_view key) noexcept;

}  // namespace tseg
