#include "plnc/mlc.hpp"

namespace plnc {

CosetCode::CosetCode(BinMatrix g, BinMatrix lambda)
    : g_(std::move(g)), lambda_(std::move(lambda)) {
    if (g_.rows() < 1 || g_.rows() > g_.cols())
        throw DimensionMismatch("generator needs 0 < K <= N");
    if (lambda_.cols() != g_.cols())
        throw DimensionMismatch("coset-leader length must equal N");
    if (g_.rank() != g_.rows())
        throw RankDeficient("generator matrix must have full row rank");
}

BinMatrix encode(const CosetCode& code, const BinMatrix& u) {
    if (u.cols() != code.k() || u.rows() != code.ell())
        throw DimensionMismatch("message must be ell x K");
    return (u * code.g()) ^ code.lambda();
}

EffectiveCode relay_effective_code(const CosetCode& code_a, const CosetCode& code_b,
                                   const DecodeFunction& f, const BinMatrix& u_a,
                                   const BinMatrix& u_b) {
    if (!(code_a.g() == code_b.g()))
        throw GeneratorMismatch("both nodes must use the same linear code");
    const BinMatrix combined = f.combined();
    EffectiveCode out;
    out.u_fr = combined * u_a.vstack(u_b);
    out.lambda_fr = combined * code_a.lambda().vstack(code_b.lambda());
    out.x_fr = (out.u_fr * code_a.g()) ^ out.lambda_fr;
    return out;
}

BinMatrix recover_peer(const BinMatrix& x_fr, const BinMatrix& own,
                       const DecodeFunction& f, Side side) {
    if (side == Side::A)
        return f.d_b().inverse() * (x_fr ^ (f.d_a() * own));
    return f.d_a().inverse() * (x_fr ^ (f.d_b() * own));
}

bool check_unambiguous(std::span<const std::uint32_t> table, int ell) {
    const std::uint64_t n = std::uint64_t(1) << ell;
    if (table.size() != n * n)
        throw DimensionMismatch("table must cover all 2^ell x 2^ell pairs");
    for (std::uint64_t fixed = 0; fixed < n; ++fixed) {
        std::uint64_t seen_b = 0, seen_a = 0;
        for (std::uint64_t v = 0; v < n; ++v) {
            const std::uint32_t with_b = table[fixed | (v << ell)];  // x_a fixed
            const std::uint32_t with_a = table[v | (fixed << ell)];  // x_b fixed
            if (seen_b & (std::uint64_t(1) << with_b)) return false;
            if (seen_a & (std::uint64_t(1) << with_a)) return false;
            seen_b |= std::uint64_t(1) << with_b;
            seen_a |= std::uint64_t(1) << with_a;
        }
    }
    return true;
}

}  // namespace plnc
