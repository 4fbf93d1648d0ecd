#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "plnc/errors.hpp"

namespace plnc {

// Dense matrix over F2. Rows are stored one machine word each (LSB =
// column 0), which caps dimensions at 64; that covers every use here
// (level counts <= 4, block algebra up to N = 64).
class BinMatrix {
  public:
    BinMatrix() = default;
    BinMatrix(int rows, int cols);

    static BinMatrix identity(int n);
    static BinMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
    static BinMatrix from_words(int rows, int cols, std::vector<std::uint64_t> words);
    // Row-major packed bits: entry (i, j) lives at bit i*cols + j.
    static BinMatrix from_packed(int rows, int cols, std::uint64_t bits);
    static BinMatrix random(int rows, int cols, class Rng& rng);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const { return (words_[r] >> c) & 1; }
    void set(int r, int c, bool v) {
        if (v)
            words_[r] |= std::uint64_t(1) << c;
        else
            words_[r] &= ~(std::uint64_t(1) << c);
    }

    std::uint64_t row_word(int r) const { return words_[r]; }
    void set_row_word(int r, std::uint64_t w) { words_[r] = w; }

    bool operator==(const BinMatrix& o) const = default;

    BinMatrix operator*(const BinMatrix& rhs) const;
    BinMatrix operator^(const BinMatrix& rhs) const;  // entrywise xor

    // Matrix times column vector; vector component j is bit j.
    std::uint64_t apply(std::uint64_t x) const;

    BinMatrix transpose() const;
    BinMatrix hstack(const BinMatrix& right) const;
    BinMatrix vstack(const BinMatrix& below) const;
    BinMatrix submatrix_rows(int first, int count) const;

    int rank() const;
    bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }
    BinMatrix inverse() const;  // throws SingularMatrix

    std::uint64_t packed() const;
    std::string to_string() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::uint64_t> words_;
};

// Relay decoding function f(x_a, x_b) = D_a x_a xor D_b x_b with both
// blocks invertible, i.e. a member of the class F.
class DecodeFunction {
  public:
    DecodeFunction(BinMatrix d_a, BinMatrix d_b);

    int ell() const { return d_a_.rows(); }
    const BinMatrix& d_a() const { return d_a_; }
    const BinMatrix& d_b() const { return d_b_; }

    // [D_a D_b], the ell x 2*ell map applied to stacked (x_a, x_b).
    BinMatrix combined() const { return d_a_.hstack(d_b_); }

    std::uint64_t label_of(std::uint64_t addr_a, std::uint64_t addr_b) const {
        return d_a_.apply(addr_a) ^ d_b_.apply(addr_b);
    }

    // "f_<hexA>_<hexB>" with row-major packed bits; the two componentwise
    // examples get the aliases "xor" and "rxor".
    std::string id() const;

    bool operator==(const DecodeFunction& o) const = default;

    static DecodeFunction xor_function(int ell);
    static DecodeFunction rotated_xor();

  private:
    BinMatrix d_a_;
    BinMatrix d_b_;
};

// One bound term index: a nonempty subset S of {1..ell} split into
// disjoint nonempty blocks S_1..S_p. Levels are bits: level k <-> bit k-1.
// Blocks are canonicalized by ascending smallest element; the collection
// is unordered.
class PartitionSpec {
  public:
    PartitionSpec(int ell, std::vector<std::uint64_t> block_masks);

    int ell() const { return ell_; }
    int p() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::uint64_t>& blocks() const { return blocks_; }
    std::uint64_t s_mask() const { return s_mask_; }
    std::uint64_t sbar_mask() const { return ~s_mask_ & ((std::uint64_t(1) << ell_) - 1); }

    std::string to_string() const;  // e.g. "{1}{2,3}"

    bool operator==(const PartitionSpec& o) const = default;

  private:
    int ell_ = 0;
    std::vector<std::uint64_t> blocks_;
    std::uint64_t s_mask_ = 0;
};

// All invertible ell x ell matrices, ascending packed order. ell <= 4.
std::vector<BinMatrix> enumerate_invertible(int ell);

// The full function class F = D x D for the given level count.
std::vector<DecodeFunction> enumerate_functions(int ell);

// Every (S, {S_1..S_p}) with S a nonempty subset of {1..ell} and the
// blocks an unordered set partition of S, each exactly once. ell <= 4.
std::vector<PartitionSpec> enumerate_partitions(int ell);

// The change of basis that turns a block-common error pattern into a
// single-row error pattern: column t_k (smallest element of S_k) has ones
// on the rows of S_k, every other column is a unit column.
BinMatrix partition_transform(const PartitionSpec& spec);

// GF(4) = F2[w]/(w^2 + w + 1), elements a0 + a1*w packed as a0 | a1<<1.
class Gf4 {
  public:
    constexpr Gf4() = default;
    explicit constexpr Gf4(unsigned v) : v_(static_cast<std::uint8_t>(v & 3)) {}

    constexpr unsigned value() const { return v_; }
    static constexpr Gf4 omega() { return Gf4(2); }

    friend constexpr Gf4 operator+(Gf4 a, Gf4 b) { return Gf4(a.v_ ^ b.v_); }
    friend constexpr Gf4 operator*(Gf4 a, Gf4 b) {
        const unsigned a0 = a.v_ & 1, a1 = a.v_ >> 1;
        const unsigned b0 = b.v_ & 1, b1 = b.v_ >> 1;
        const unsigned c0 = (a0 & b0) ^ (a1 & b1);
        const unsigned c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
        return Gf4(c0 | (c1 << 1));
    }
    constexpr bool operator==(const Gf4&) const = default;

    Gf4 inverse() const;  // throws ZeroCoefficient on 0

    // Matrix of multiplication by this element in the basis {1, w}.
    BinMatrix mul_matrix() const;

  private:
    std::uint8_t v_ = 0;
};

// The GF(4) linear-combination functions sit inside F: multiplication by
// alpha and beta become the invertible bit matrices of the embedding.
DecodeFunction gf4_embed(Gf4 alpha, Gf4 beta);

}  // namespace plnc
