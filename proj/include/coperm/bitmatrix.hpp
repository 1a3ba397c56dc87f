#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace coperm {

/// Dense 0/1 matrix with 64-bit row words.
class BitMatrix {
public:
    BitMatrix() : rows_(0), cols_(0), words_(0) {}
    BitMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64),
          bits_(static_cast<std::size_t>(rows) * static_cast<std::size_t>((cols + 63) / 64), 0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("BitMatrix: negative dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int words_per_row() const { return words_; }

    bool get(int r, int c) const {
        return (word(r, c / 64) >> (c % 64)) & 1ULL;
    }
    void set(int r, int c, bool v) {
        std::uint64_t& w = bits_[idx(r, c / 64)];
        const std::uint64_t m = 1ULL << (c % 64);
        if (v) w |= m; else w &= ~m;
    }

    const std::uint64_t* row(int r) const { return bits_.data() + idx(r, 0); }
    std::uint64_t* row(int r) { return bits_.data() + idx(r, 0); }

    int row_degree(int r) const {
        int d = 0;
        for (int w = 0; w < words_; ++w) d += std::popcount(word(r, w));
        return d;
    }
    int col_degree(int c) const {
        int d = 0;
        for (int r = 0; r < rows_; ++r) d += get(r, c) ? 1 : 0;
        return d;
    }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }

private:
    std::size_t idx(int r, int w) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(words_) +
               static_cast<std::size_t>(w);
    }
    std::uint64_t word(int r, int w) const { return bits_[idx(r, w)]; }

    int rows_, cols_, words_;
    std::vector<std::uint64_t> bits_;
};

}  // namespace coperm
