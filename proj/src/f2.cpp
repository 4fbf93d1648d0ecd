#include "plnc/f2.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>

#include "plnc/rng.hpp"

namespace plnc {

namespace {

std::uint64_t col_mask(int cols) {
    return cols >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << cols) - 1;
}

void check_dims(int rows, int cols) {
    if (rows < 0 || cols < 0 || rows > 64 || cols > 64)
        throw DimensionMismatch("BinMatrix dimensions must be within 0..64");
}

}  // namespace

BinMatrix::BinMatrix(int rows, int cols) : rows_(rows), cols_(cols), words_(rows, 0) {
    check_dims(rows, cols);
}

BinMatrix BinMatrix::identity(int n) {
    BinMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.words_[i] = std::uint64_t(1) << i;
    return m;
}

BinMatrix BinMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    BinMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c)
            throw DimensionMismatch("ragged row list");
        int j = 0;
        for (int v : row) m.set(i, j++, v != 0);
        ++i;
    }
    return m;
}

BinMatrix BinMatrix::from_words(int rows, int cols, std::vector<std::uint64_t> words) {
    check_dims(rows, cols);
    if (static_cast<int>(words.size()) != rows)
        throw DimensionMismatch("word count != row count");
    BinMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) m.words_[i] = words[i] & col_mask(cols);
    return m;
}

BinMatrix BinMatrix::from_packed(int rows, int cols, std::uint64_t bits) {
    check_dims(rows, cols);
    if (rows * cols > 64) throw DimensionMismatch("packed form needs rows*cols <= 64");
    BinMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        m.words_[i] = (bits >> (i * cols)) & col_mask(cols);
    return m;
}

BinMatrix BinMatrix::random(int rows, int cols, Rng& rng) {
    BinMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) m.words_[i] = rng.next_bits(cols);
    return m;
}

BinMatrix BinMatrix::operator*(const BinMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product shape mismatch");
    BinMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        std::uint64_t acc = 0;
        std::uint64_t w = words_[i];
        while (w) {
            const int j = std::countr_zero(w);
            acc ^= rhs.words_[j];
            w &= w - 1;
        }
        out.words_[i] = acc;
    }
    return out;
}

BinMatrix BinMatrix::operator^(const BinMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw DimensionMismatch("xor shape mismatch");
    BinMatrix out = *this;
    for (int i = 0; i < rows_; ++i) out.words_[i] ^= rhs.words_[i];
    return out;
}

std::uint64_t BinMatrix::apply(std::uint64_t x) const {
    std::uint64_t y = 0;
    for (int i = 0; i < rows_; ++i)
        y |= std::uint64_t(std::popcount(words_[i] & x) & 1) << i;
    return y;
}

BinMatrix BinMatrix::transpose() const {
    BinMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (get(i, j)) out.set(j, i, true);
    return out;
}

BinMatrix BinMatrix::hstack(const BinMatrix& right) const {
    if (rows_ != right.rows_) throw DimensionMismatch("hstack row mismatch");
    BinMatrix out(rows_, cols_ + right.cols_);
    for (int i = 0; i < rows_; ++i)
        out.words_[i] = words_[i] | (right.words_[i] << cols_);
    return out;
}

BinMatrix BinMatrix::vstack(const BinMatrix& below) const {
    if (cols_ != below.cols_) throw DimensionMismatch("vstack column mismatch");
    BinMatrix out(rows_ + below.rows_, cols_);
    for (int i = 0; i < rows_; ++i) out.words_[i] = words_[i];
    for (int i = 0; i < below.rows_; ++i) out.words_[rows_ + i] = below.words_[i];
    return out;
}

BinMatrix BinMatrix::submatrix_rows(int first, int count) const {
    if (first < 0 || count < 0 || first + count > rows_)
        throw DimensionMismatch("row slice out of range");
    BinMatrix out(count, cols_);
    for (int i = 0; i < count; ++i) out.words_[i] = words_[first + i];
    return out;
}

int BinMatrix::rank() const {
    std::vector<std::uint64_t> w = words_;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
        int pivot = -1;
        for (int i = r; i < rows_; ++i)
            if ((w[i] >> c) & 1) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(w[r], w[pivot]);
        for (int i = 0; i < rows_; ++i)
            if (i != r && ((w[i] >> c) & 1)) w[i] ^= w[r];
        ++r;
    }
    return r;
}

BinMatrix BinMatrix::inverse() const {
    if (rows_ != cols_) throw SingularMatrix("inverse of non-square matrix");
    const int n = rows_;
    std::vector<std::uint64_t> a = words_;
    std::vector<std::uint64_t> inv(n);
    for (int i = 0; i < n; ++i) inv[i] = std::uint64_t(1) << i;
    for (int c = 0; c < n; ++c) {
        int pivot = -1;
        for (int i = c; i < n; ++i)
            if ((a[i] >> c) & 1) {
                pivot = i;
                break;
            }
        if (pivot < 0) throw SingularMatrix("matrix is singular over F2");
        std::swap(a[c], a[pivot]);
        std::swap(inv[c], inv[pivot]);
        for (int i = 0; i < n; ++i) {
            if (i != c && ((a[i] >> c) & 1)) {
                a[i] ^= a[c];
                inv[i] ^= inv[c];
            }
        }
    }
    return from_words(n, n, std::move(inv));
}

std::uint64_t BinMatrix::packed() const {
    if (rows_ * cols_ > 64) throw DimensionMismatch("packed form needs rows*cols <= 64");
    std::uint64_t bits = 0;
    for (int i = 0; i < rows_; ++i) bits |= words_[i] << (i * cols_);
    return bits;
}

std::string BinMatrix::to_string() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
        s += i ? ",[" : "[";
        for (int j = 0; j < cols_; ++j) {
            if (j) s += ',';
            s += get(i, j) ? '1' : '0';
        }
        s += ']';
    }
    s += ']';
    return s;
}

DecodeFunction::DecodeFunction(BinMatrix d_a, BinMatrix d_b)
    : d_a_(std::move(d_a)), d_b_(std::move(d_b)) {
    if (d_a_.rows() != d_a_.cols() || d_b_.rows() != d_b_.cols() ||
        d_a_.rows() != d_b_.rows())
        throw DimensionMismatch("decode function blocks must be square and equal-sized");
    if (!d_a_.is_invertible() || !d_b_.is_invertible())
        throw SingularMatrix("decode function blocks must be invertible");
}

std::string DecodeFunction::id() const {
    if (*this == xor_function(ell())) return "xor";
    if (ell() == 2 && *this == rotated_xor()) return "rxor";
    char buf[40];
    std::snprintf(buf, sizeof buf, "f_%llx_%llx",
                  static_cast<unsigned long long>(d_a_.packed()),
                  static_cast<unsigned long long>(d_b_.packed()));
    return buf;
}

DecodeFunction DecodeFunction::xor_function(int ell) {
    return {BinMatrix::identity(ell), BinMatrix::identity(ell)};
}

DecodeFunction DecodeFunction::rotated_xor() {
    return {BinMatrix::identity(2), BinMatrix::from_rows({{0, 1}, {1, 0}})};
}

PartitionSpec::PartitionSpec(int ell, std::vector<std::uint64_t> block_masks)
    : ell_(ell), blocks_(std::move(block_masks)) {
    if (ell < 1 || ell > 64) throw DimensionMismatch("bad level count");
    if (blocks_.empty()) throw DimensionMismatch("partition needs at least one block");
    const std::uint64_t level_mask = col_mask(ell);
    for (std::uint64_t b : blocks_) {
        if (b == 0) throw DimensionMismatch("empty partition block");
        if (b & ~level_mask) throw DimensionMismatch("block outside level range");
        if (s_mask_ & b) throw DimensionMismatch("partition blocks must be disjoint");
        s_mask_ |= b;
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](std::uint64_t a, std::uint64_t b) {
                  return std::countr_zero(a) < std::countr_zero(b);
              });
}

std::string PartitionSpec::to_string() const {
    std::string s;
    for (std::uint64_t b : blocks_) {
        s += '{';
        bool first = true;
        for (int k = 0; k < ell_; ++k)
            if ((b >> k) & 1) {
                if (!first) s += ',';
                s += std::to_string(k + 1);
                first = false;
            }
        s += '}';
    }
    return s;
}

std::vector<BinMatrix> enumerate_invertible(int ell) {
    if (ell < 1 || ell > 4)
        throw EllTooLarge("exhaustive enumeration is limited to 1 <= ell <= 4");
    std::vector<BinMatrix> out;
    const std::uint64_t total = std::uint64_t(1) << (ell * ell);
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        BinMatrix m = BinMatrix::from_packed(ell, ell, bits);
        if (m.is_invertible()) out.push_back(std::move(m));
    }
    return out;
}

std::vector<DecodeFunction> enumerate_functions(int ell) {
    const std::vector<BinMatrix> d = enumerate_invertible(ell);
    std::vector<DecodeFunction> out;
    out.reserve(d.size() * d.size());
    for (const BinMatrix& a : d)
        for (const BinMatrix& b : d) out.emplace_back(a, b);
    return out;
}

namespace {

// Set partitions of the elements listed in `elems`, emitted via
// restricted-growth strings so each unordered partition appears once.
void emit_partitions(int ell, const std::vector<int>& elems,
                     std::vector<PartitionSpec>& out) {
    const int n = static_cast<int>(elems.size());
    std::vector<int> rgs(n, 0);
    while (true) {
        int nblocks = 0;
        for (int i = 0; i < n; ++i) nblocks = std::max(nblocks, rgs[i] + 1);
        std::vector<std::uint64_t> masks(nblocks, 0);
        for (int i = 0; i < n; ++i) masks[rgs[i]] |= std::uint64_t(1) << elems[i];
        out.emplace_back(ell, std::move(masks));

        // next restricted-growth string
        int i = n - 1;
        for (; i > 0; --i) {
            int max_prefix = 0;
            for (int j = 0; j < i; ++j) max_prefix = std::max(max_prefix, rgs[j]);
            if (rgs[i] <= max_prefix) {
                ++rgs[i];
                for (int j = i + 1; j < n; ++j) rgs[j] = 0;
                break;
            }
        }
        if (i == 0) break;
    }
}

}  // namespace

std::vector<PartitionSpec> enumerate_partitions(int ell) {
    if (ell < 1 || ell > 4)
        throw EllTooLarge("partition enumeration is limited to 1 <= ell <= 4");
    std::vector<PartitionSpec> out;
    const std::uint64_t top = std::uint64_t(1) << ell;
    for (std::uint64_t s = 1; s < top; ++s) {
        std::vector<int> elems;
        for (int k = 0; k < ell; ++k)
            if ((s >> k) & 1) elems.push_back(k);
        emit_partitions(ell, elems, out);
    }
    return out;
}

BinMatrix partition_transform(const PartitionSpec& spec) {
    const int ell = spec.ell();
    BinMatrix d = BinMatrix::identity(ell);
    for (std::uint64_t block : spec.blocks()) {
        const int t = std::countr_zero(block);
        for (int r = 0; r < ell; ++r) d.set(r, t, (block >> r) & 1);
    }
    return d;
}

Gf4 Gf4::inverse() const {
    if (v_ == 0) throw ZeroCoefficient("0 has no inverse in GF(4)");
    // 1^-1 = 1, w^-1 = w^2, (w^2)^-1 = w.
    static constexpr std::uint8_t inv[4] = {0, 1, 3, 2};
    return Gf4(inv[v_]);
}

BinMatrix Gf4::mul_matrix() const {
    BinMatrix m(2, 2);
    const Gf4 self(v_);
    const Gf4 images[2] = {self * Gf4(1), self * omega()};
    for (int j = 0; j < 2; ++j) {
        m.set(0, j, images[j].value() & 1);
        m.set(1, j, (images[j].value() >> 1) & 1);
    }
    return m;
}

DecodeFunction gf4_embed(Gf4 alpha, Gf4 beta) {
    if (alpha == Gf4(0) || beta == Gf4(0))
        throw ZeroCoefficient("GF(4) combination coefficients must be nonzero");
    return {alpha.mul_matrix(), beta.mul_matrix()};
}

}  // namespace plnc
