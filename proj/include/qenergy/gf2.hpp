#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace qenergy::gf2 {

using word = std::uint32_t;

inline int dot(word a, word b) { return std::popcount(a & b) & 1; }

// Reduced row echelon form of the span. Rows are sorted by pivot (highest bit first),
// so the result depends only on the span, not on the input order.
inline std::vector<word> rref(const std::vector<word>& vectors, unsigned n) {
    std::vector<word> rows;
    for (word v : vectors) {
        v &= n >= 32 ? ~word{0} : ((word{1} << n) - 1);
        for (word r : rows)
            if (v & (word{1} << (std::bit_width(r) - 1))) v ^= r;
        if (v == 0) continue;
        const word pivot = word{1} << (std::bit_width(v) - 1);
        for (word& r : rows)
            if (r & pivot) r ^= v;
        rows.push_back(v);
    }
    std::sort(rows.begin(), rows.end(), [](word a, word b) { return a > b; });
    return rows;
}

inline std::size_t rank(const std::vector<word>& vectors, unsigned n) { return rref(vectors, n).size(); }

// A nonzero s with y.s = 0 for every vector y, built from the lowest free column.
// None when the vectors span the whole space.
inline std::optional<word> kernel_vector(const std::vector<word>& vectors, unsigned n) {
    const auto rows = rref(vectors, n);
    if (rows.size() >= n) return std::nullopt;
    word pivots = 0;
    for (word r : rows) pivots |= word{1} << (std::bit_width(r) - 1);
    unsigned free_col = 0;
    while (pivots & (word{1} << free_col)) ++free_col;
    const word free_bit = word{1} << free_col;
    word s = free_bit;
    for (word r : rows)
        if (r & free_bit) s |= word{1} << (std::bit_width(r) - 1);
    return s;
}

}  // namespace qenergy::gf2
