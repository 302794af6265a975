#include "postlr/braiding.hpp"

namespace postlr {

namespace {

using E = AlgebroidElement;

E word(const Forest& w, const CoeffPoly& c = CoeffPoly(1)) { return E::word(w, c); }

}  // namespace

Braiding::Braiding(const PostHopfAlgebroid& h) : h_(h) {}
Braiding::~Braiding() = default;

TensorElement Braiding::box(const E& x, const E& y) const {
    TensorElement out;
    for (const auto& [v, g] : y.terms()) {
        const E moved = h_.gl_right_scalar(x, g);
        for (const auto& [u, c] : moved.terms()) out.add_term({u, v}, c);
    }
    return out;
}

Tensor<3> Braiding::box3(const E& x, const E& y, const E& z) const {
    Tensor<3> out;
    for (const auto& [w, g] : z.terms()) {
        const TensorElement p = box(x, h_.gl_right_scalar(y, g));
        for (const auto& [k, c] : p.terms()) out.add_term({k[0], k[1], w}, c);
    }
    return out;
}

Tensor<4> Braiding::join(const TensorElement& p, const TensorElement& q) const {
    Tensor<4> out;
    for (const auto& [a, c] : p.terms()) {
        for (const auto& [b, d] : q.terms()) out.add_term({a[0], a[1], b[0], b[1]}, c * d);
    }
    return out;
}

AlgebroidElement Braiding::tail(const Forest& a, const Forest& b) const {
    const auto key = std::make_pair(a, b);
    {
        std::lock_guard lock(mutex_);
        if (auto it = tail_memo_.find(key); it != tail_memo_.end()) return it->second;
    }
    E out;
    const TensorElement da = coproduct(word(a));
    const TensorElement db = coproduct(word(b));
    for (const auto& [ka, ca] : da.terms()) {
        for (const auto& [kb, cb] : db.terms()) {
            const E t = h_.theta(h_.triangle_words(ka[0], kb[0]));
            out += (ca * cb) * h_.gl_product(h_.gl_product(t, word(ka[1])), word(kb[1]));
        }
    }
    std::lock_guard lock(mutex_);
    tail_memo_.emplace(key, out);
    return out;
}

TensorElement Braiding::r_words(const Forest& a, const Forest& b) const {
    const auto key = std::make_pair(a, b);
    {
        std::lock_guard lock(mutex_);
        if (auto it = r_memo_.find(key); it != r_memo_.end()) return it->second;
    }
    // Δ² = (id ⊗ Δ)Δ: the last two Sweedler legs are folded into tail().
    TensorElement out;
    const TensorElement da = coproduct(word(a));
    const TensorElement db = coproduct(word(b));
    for (const auto& [ka, ca] : da.terms()) {
        for (const auto& [kb, cb] : db.terms()) {
            out += (ca * cb) * box(h_.triangle_words(ka[0], kb[0]), tail(ka[1], kb[1]));
        }
    }
    std::lock_guard lock(mutex_);
    r_memo_.emplace(key, out);
    return out;
}

TensorElement Braiding::r(const TensorElement& p) const {
    TensorElement out;
    for (const auto& [k, c] : p.terms()) out += c * r_words(k[0], k[1]);
    return out;
}

TensorElement Braiding::r_direct(const E& x, const E& y) const {
    TensorElement out;
    const Tensor<3> dx = coproduct2(x);
    const Tensor<3> dy = coproduct2(y);
    for (const auto& [kx, cx] : dx.terms()) {
        for (const auto& [ky, cy] : dy.terms()) {
            const E left = h_.triangle(word(kx[0], cx), word(ky[0], cy));
            const E t = h_.theta(h_.triangle(word(kx[1]), word(ky[1])));
            const E right = h_.gl_product(h_.gl_product(t, word(kx[2])), word(ky[2]));
            out += box(left, right);
        }
    }
    return out;
}

AlgebroidElement Braiding::multiply(const TensorElement& p) const {
    E out;
    for (const auto& [k, c] : p.terms()) out += h_.gl_product(word(k[0], c), word(k[1]));
    return out;
}

TensorElement Braiding::right_scalar(const TensorElement& p, const CoeffPoly& f) const {
    TensorElement out;
    for (const auto& [k, c] : p.terms()) out += box(word(k[0], c), h_.gl_right_scalar(word(k[1]), f));
    return out;
}

Tensor<4> Braiding::split(const TensorElement& p) const {
    // Pure right factors have rational coproduct coefficients, so no renormalization is needed.
    Tensor<4> out;
    for (const auto& [k, c] : p.terms()) {
        const TensorElement da = coproduct(word(k[0], c));
        const TensorElement db = coproduct(word(k[1]));
        for (const auto& [ka, ca] : da.terms()) {
            for (const auto& [kb, cb] : db.terms()) out.add_term({ka[0], kb[0], ka[1], kb[1]}, ca * cb);
        }
    }
    return out;
}

Tensor<4> Braiding::r_pair(const Tensor<4>& q) const {
    Tensor<4> out;
    for (const auto& [k, c] : q.terms()) out += join(c * r_words(k[0], k[1]), r_words(k[2], k[3]));
    return out;
}

TensorElement Braiding::m_left(const Tensor<3>& t) const {
    TensorElement out;
    for (const auto& [k, c] : t.terms()) out += box(h_.gl_product(word(k[0], c), word(k[1])), word(k[2]));
    return out;
}

TensorElement Braiding::m_right(const Tensor<3>& t) const {
    TensorElement out;
    for (const auto& [k, c] : t.terms()) out += box(word(k[0], c), h_.gl_words(k[1], k[2]));
    return out;
}

Tensor<3> Braiding::r_left(const Tensor<3>& t) const {
    Tensor<3> out;
    for (const auto& [k, c] : t.terms()) {
        const TensorElement inner = r_words(k[0], k[1]);
        for (const auto& [p, d] : inner.terms()) out.add_term({p[0], p[1], k[2]}, c * d);
    }
    return out;
}

Tensor<3> Braiding::r_right(const Tensor<3>& t) const {
    Tensor<3> out;
    for (const auto& [k, c] : t.terms()) {
        const TensorElement inner = r_words(k[1], k[2]);
        for (const auto& [p, d] : inner.terms()) {
            // a ⊠ (d·u) ⊠ v = (a *▷ ι(d)) ⊠ u ⊠ v
            const E moved = h_.gl_right_scalar(word(k[0], c), d);
            for (const auto& [u, e] : moved.terms()) out.add_term({u, p[0], p[1]}, e);
        }
    }
    return out;
}

}  // namespace postlr
