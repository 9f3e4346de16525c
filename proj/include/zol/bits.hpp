// Copyright 2026 The zol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zol/error.hpp"

namespace zol {

/// A fixed-width string of bits. Position 0 is the leftmost character of the
/// textual form and the most significant bit of `value()`.
class BitString {
   public:
    BitString() = default;
    BitString(uint64_t value, int width) : width_(width), value_(value) {
        if (width < 0 || width > 64) {
            throw InvalidArgument("bit string width " + std::to_string(width) + " outside [0, 64]");
        }
        if (width < 64 && (value >> width) != 0) {
            throw InvalidArgument("value does not fit in " + std::to_string(width) + " bits");
        }
    }

    static BitString parse(std::string_view text) {
        if (text.size() > 64) {
            throw InvalidArgument("bit string longer than 64 characters");
        }
        uint64_t v = 0;
        for (char c : text) {
            if (c != '0' && c != '1') {
                throw InvalidArgument("bit string '" + std::string(text) + "' contains a character other than 0/1");
            }
            v = (v << 1) | static_cast<uint64_t>(c == '1');
        }
        return BitString(v, static_cast<int>(text.size()));
    }

    uint64_t value() const { return value_; }
    int width() const { return width_; }

    bool bit(int pos) const { return (value_ >> (width_ - 1 - pos)) & 1U; }

    /// Bits [pos, pos + len) read left to right.
    uint64_t slice(int pos, int len) const {
        if (len == 0) {
            return 0;
        }
        uint64_t shifted = value_ >> (width_ - pos - len);
        return len == 64 ? shifted : shifted & ((uint64_t{1} << len) - 1);
    }

    std::string str() const {
        std::string s(static_cast<size_t>(width_), '0');
        for (int i = 0; i < width_; i++) {
            if (bit(i)) {
                s[static_cast<size_t>(i)] = '1';
            }
        }
        return s;
    }

    auto operator<=>(const BitString&) const = default;

   private:
    int width_ = 0;
    uint64_t value_ = 0;
};

inline std::string to_bits(uint64_t value, int width) { return BitString(value, width).str(); }

inline int parity(uint64_t x) { return std::popcount(x) & 1; }

inline uint64_t low_mask(int width) { return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1; }

/// Reduced row echelon form; zero rows dropped. Pivots are leading (most
/// significant) bits.
inline std::vector<uint64_t> gf2_rref(std::vector<uint64_t> rows) {
    std::vector<uint64_t> out;
    for (uint64_t r : rows) {
        for (uint64_t o : out) {
            if (r & std::bit_floor(o)) {
                r ^= o;
            }
        }
        if (r == 0) {
            continue;
        }
        uint64_t pivot = std::bit_floor(r);
        for (uint64_t& o : out) {
            if (o & pivot) {
                o ^= r;
            }
        }
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

/// Rank over GF(2) of a set of row masks.
inline int gf2_rank(const std::vector<uint64_t>& rows) { return static_cast<int>(gf2_rref(rows).size()); }

/// Basis of {x in GF(2)^cols : parity(row & x) = 0 for every row}.
inline std::vector<uint64_t> gf2_null_space(const std::vector<uint64_t>& rows, int cols) {
    std::vector<uint64_t> reduced = gf2_rref(rows);
    uint64_t pivots = 0;
    for (uint64_t r : reduced) {
        pivots |= std::bit_floor(r);
    }
    std::vector<uint64_t> basis;
    for (int c = cols - 1; c >= 0; c--) {
        uint64_t free_bit = uint64_t{1} << c;
        if (pivots & free_bit) {
            continue;
        }
        uint64_t v = free_bit;
        for (uint64_t r : reduced) {
            if (r & free_bit) {
                v |= std::bit_floor(r);
            }
        }
        basis.push_back(v);
    }
    return basis;
}

/// All elements of the span of `basis`, in no particular order.
inline std::vector<uint64_t> gf2_span(const std::vector<uint64_t>& basis) {
    std::vector<uint64_t> members{0};
    for (uint64_t b : basis) {
        size_t n = members.size();
        bool fresh = std::find(members.begin(), members.end(), b) == members.end();
        if (!fresh) {
            continue;
        }
        for (size_t i = 0; i < n; i++) {
            members.push_back(members[i] ^ b);
        }
    }
    return members;
}

/// A k x cols binary matrix acting on bit strings of length cols. Row masks use
/// the BitString convention: column 0 is the most significant bit.
class Gf2Matrix {
   public:
    Gf2Matrix() = default;
    Gf2Matrix(int cols, std::vector<uint64_t> rows) : cols_(cols), rows_(std::move(rows)) {
        if (cols < 0 || cols > 64) {
            throw InvalidArgument("matrix column count outside [0, 64]");
        }
        for (uint64_t r : rows_) {
            if ((r & ~low_mask(cols_)) != 0) {
                throw InvalidArgument("matrix row wider than " + std::to_string(cols_) + " columns");
            }
        }
    }

    /// Rows given as bit strings, e.g. {"10", "01"}.
    static Gf2Matrix from_rows(int cols, const std::vector<std::string>& rows) {
        std::vector<uint64_t> masks;
        for (const auto& r : rows) {
            BitString b = BitString::parse(r);
            if (b.width() != cols) {
                throw InvalidArgument("matrix row '" + r + "' does not have " + std::to_string(cols) + " columns");
            }
            masks.push_back(b.value());
        }
        return Gf2Matrix(cols, std::move(masks));
    }

    static Gf2Matrix identity(int cols) {
        std::vector<uint64_t> rows;
        for (int c = 0; c < cols; c++) {
            rows.push_back(uint64_t{1} << (cols - 1 - c));
        }
        return Gf2Matrix(cols, std::move(rows));
    }

    /// Reads the listed positions (0 = leftmost) in the given order.
    static Gf2Matrix coordinates(int cols, const std::vector<int>& positions) {
        std::vector<uint64_t> rows;
        for (int p : positions) {
            if (p < 0 || p >= cols) {
                throw InvalidArgument("coordinate " + std::to_string(p) + " outside [0, " + std::to_string(cols) + ")");
            }
            rows.push_back(uint64_t{1} << (cols - 1 - p));
        }
        return Gf2Matrix(cols, std::move(rows));
    }

    /// Reads the positions whose bit is set in `mask` (BitString convention).
    static Gf2Matrix coordinate_mask(int cols, uint64_t mask) {
        std::vector<int> positions;
        for (int p = 0; p < cols; p++) {
            if ((mask >> (cols - 1 - p)) & 1U) {
                positions.push_back(p);
            }
        }
        return coordinates(cols, positions);
    }

    int cols() const { return cols_; }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    const std::vector<uint64_t>& rows() const { return rows_; }
    int rank() const { return gf2_rank(rows_); }

    /// M x; row 0 gives the most significant output bit.
    uint64_t apply(uint64_t x) const {
        uint64_t out = 0;
        for (uint64_t r : rows_) {
            out = (out << 1) | static_cast<uint64_t>(parity(r & x));
        }
        return out;
    }

    BitString apply(const BitString& x) const {
        if (x.width() != cols_) {
            throw InvalidArgument("matrix has " + std::to_string(cols_) + " columns, input has " +
                                  std::to_string(x.width()) + " bits");
        }
        return BitString(apply(x.value()), num_rows());
    }

    Gf2Matrix stacked(const Gf2Matrix& below) const {
        if (below.cols_ != cols_) {
            throw InvalidArgument("cannot stack matrices with different column counts");
        }
        std::vector<uint64_t> rows = rows_;
        rows.insert(rows.end(), below.rows_.begin(), below.rows_.end());
        return Gf2Matrix(cols_, std::move(rows));
    }

    /// Basis of the kernel {x : M x = 0}.
    std::vector<uint64_t> kernel_basis() const { return gf2_null_space(rows_, cols_); }

    /// True when every row selects a single coordinate.
    bool is_coordinate_map() const {
        return std::all_of(rows_.begin(), rows_.end(), [](uint64_t r) { return std::has_single_bit(r); });
    }

    uint64_t coordinate_support() const {
        uint64_t s = 0;
        for (uint64_t r : rows_) {
            s |= r;
        }
        return s;
    }

    /// "[10;01]"
    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < rows_.size(); i++) {
            if (i) {
                s += ';';
            }
            s += to_bits(rows_[i], cols_);
        }
        return s + "]";
    }

    bool operator==(const Gf2Matrix&) const = default;

   private:
    int cols_ = 0;
    std::vector<uint64_t> rows_;
};

/// A linear subspace of GF(2)^dim given by an RREF basis.
struct Subspace {
    int dim_ambient = 0;
    std::vector<uint64_t> basis;

    int dim() const { return static_cast<int>(basis.size()); }
};

/// Every subspace of GF(2)^m, enumerated through reduced row echelon bases
/// (each subspace appears exactly once).
inline std::vector<Subspace> enumerate_subspaces(int m) {
    if (m < 0 || m > 10) {
        throw CapExceeded("subspace enumeration limited to ambient dimension <= 10");
    }
    std::vector<Subspace> out;
    // Pivot sets as masks over columns; column c <-> bit (m - 1 - c).
    for (uint64_t pivots = 0; pivots < (uint64_t{1} << m); pivots++) {
        std::vector<int> pivot_cols;
        for (int c = 0; c < m; c++) {
            if ((pivots >> (m - 1 - c)) & 1U) {
                pivot_cols.push_back(c);
            }
        }
        // Free slots: for row i, non-pivot columns to the right of its pivot.
        std::vector<std::pair<size_t, int>> slots;
        for (size_t i = 0; i < pivot_cols.size(); i++) {
            for (int c = pivot_cols[i] + 1; c < m; c++) {
                if (!((pivots >> (m - 1 - c)) & 1U)) {
                    slots.emplace_back(i, c);
                }
            }
        }
        for (uint64_t fill = 0; fill < (uint64_t{1} << slots.size()); fill++) {
            Subspace s{m, {}};
            for (int p : pivot_cols) {
                s.basis.push_back(uint64_t{1} << (m - 1 - p));
            }
            for (size_t k = 0; k < slots.size(); k++) {
                if ((fill >> k) & 1U) {
                    s.basis[slots[k].first] |= uint64_t{1} << (m - 1 - slots[k].second);
                }
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace zol
