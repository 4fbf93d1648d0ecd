#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plnc/errors.hpp"
#include "plnc/f2.hpp"

namespace plnc {

// A linear code C (full-row-rank K x N generator) together with the ell
// coset-leader rows used by one transmitter; level k transmits the coset
// lambda^k + C.
class CosetCode {
  public:
    CosetCode(BinMatrix g, BinMatrix lambda);

    const BinMatrix& g() const { return g_; }
    const BinMatrix& lambda() const { return lambda_; }
    int k() const { return g_.rows(); }
    int n() const { return g_.cols(); }
    int ell() const { return lambda_.rows(); }
    double rate() const { return static_cast<double>(k()) / n(); }

  private:
    BinMatrix g_;
    BinMatrix lambda_;
};

// X = U G + Lambda, row per level. U is ell x K.
BinMatrix encode(const CosetCode& code, const BinMatrix& u);

struct EffectiveCode {
    BinMatrix u_fr;       // [D_a D_b] [U_a; U_b]
    BinMatrix lambda_fr;  // [D_a D_b] [Lambda_a; Lambda_b]
    BinMatrix x_fr;       // u_fr G + lambda_fr
};

// The relay-side codeword algebra: both nodes must use the same linear
// code C; the result rows are coset codewords of C again.
EffectiveCode relay_effective_code(const CosetCode& code_a, const CosetCode& code_b,
                                   const DecodeFunction& f, const BinMatrix& u_a,
                                   const BinMatrix& u_b);

enum class Side { A, B };

// Node A holds X_a and the decoded X_fr and solves for X_b (and
// symmetrically); exact because the blocks are invertible.
BinMatrix recover_peer(const BinMatrix& x_fr, const BinMatrix& own,
                       const DecodeFunction& f, Side side);

// True iff the complete table (indexed addr_a | addr_b<<ell) collides on
// neither argument when the other is held fixed.
bool check_unambiguous(std::span<const std::uint32_t> table, int ell);

}  // namespace plnc
