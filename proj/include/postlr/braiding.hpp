#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "postlr/algebroid.hpp"

namespace postlr {

// Braiding operator r(x ⊠ y) = x1▷y1 ⊠ θ(x2▷y2)*▷x3*▷y3 on the Grossman–Larson algebroid.
//
// ⊠ is the tensor product of R-bimodules, with the right action x·f = x*▷ι(f). Since
// (x*▷ι(f)) ⊠ y = x ⊠ f·y, every element has a unique normal form with all coefficients on
// the left factor and pure right factors. TensorElement, Tensor<3> and Tensor<4> values passed
// to or returned by this class are in that normal form: key[0] carries the coefficient, the
// other keys are pure words. In Tensor<4> the pairs (k0 ⊠ k1) ⊗_R (k2 ⊠ k3) are joined by the
// left-module tensor, so the coefficient of the second pair also moves to k0.
class Braiding {
public:
    explicit Braiding(const PostHopfAlgebroid& h);
    ~Braiding();
    Braiding(const Braiding&) = delete;
    Braiding& operator=(const Braiding&) = delete;

    const PostHopfAlgebroid& algebroid() const noexcept { return h_; }

    // Normal forms of x ⊠ y and x ⊠ y ⊠ z.
    TensorElement box(const AlgebroidElement& x, const AlgebroidElement& y) const;
    Tensor<3> box3(const AlgebroidElement& x, const AlgebroidElement& y, const AlgebroidElement& z) const;
    // (P) ⊗_R (Q) for normal-form pairs.
    Tensor<4> join(const TensorElement& p, const TensorElement& q) const;

    // Memoized on word pairs; extended to normal forms by left R-linearity.
    TensorElement r(const TensorElement& p) const;
    // The defining formula on arbitrary elements, summed over Sweedler triples of both factors.
    // No memo and no linearity shortcut; used to cross-check r.
    TensorElement r_direct(const AlgebroidElement& x, const AlgebroidElement& y) const;
    TensorElement r_words(const Forest& a, const Forest& b) const;

    // m(x ⊠ y) = x *▷ y.
    AlgebroidElement multiply(const TensorElement& p) const;
    // (x ⊠ y) *▷ ι(f) = x ⊠ (y *▷ ι(f)).
    TensorElement right_scalar(const TensorElement& p, const CoeffPoly& f) const;
    // (id ⊗ τ ⊗ id)(Δ ⊗ Δ).
    Tensor<4> split(const TensorElement& p) const;
    Tensor<4> r_pair(const Tensor<4>& q) const;  // r ⊗ r

    TensorElement m_left(const Tensor<3>& t) const;   // m ⊠ id
    TensorElement m_right(const Tensor<3>& t) const;  // id ⊠ m
    Tensor<3> r_left(const Tensor<3>& t) const;       // r ⊠ id
    Tensor<3> r_right(const Tensor<3>& t) const;      // id ⊠ r

private:
    // Σ θ(a1▷b1) *▷ a2 *▷ b2 on words; the right factor of r after splitting Δ² as (id ⊗ Δ)Δ.
    AlgebroidElement tail(const Forest& a, const Forest& b) const;

    const PostHopfAlgebroid& h_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<Forest, Forest>, TensorElement> r_memo_;
    mutable std::map<std::pair<Forest, Forest>, AlgebroidElement> tail_memo_;
};

}  // namespace postlr
