#include "postlr/algebroid.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "postlr/errors.hpp"

namespace postlr {

AlgebroidElement AlgebroidElement::word(const Forest& w, const CoeffPoly& c) {
    AlgebroidElement a;
    a.add_term(w, c);
    return a;
}

AlgebroidElement AlgebroidElement::parse(std::string_view text, const GeneratorRegistry& registry) {
    AlgebroidElement out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find_first_of(";\n", pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        const std::size_t lead = line.find_first_not_of(' ');
        if (lead != std::string_view::npos) {
            const std::size_t trail = line.find_last_not_of(' ');
            const std::size_t base = pos + lead;
            line = line.substr(lead, trail - lead + 1);
            const std::size_t bar = line.find('|');
            try {
                if (bar == std::string_view::npos) {
                    out.add_term(Forest::parse(line), CoeffPoly(1));
                } else {
                    std::string_view coeff = line.substr(0, bar);
                    std::string_view forest = line.substr(bar + 1);
                    while (!coeff.empty() && coeff.back() == ' ') coeff.remove_suffix(1);
                    std::size_t skip = 0;
                    while (skip < forest.size() && forest[skip] == ' ') ++skip;
                    const CoeffPoly c = CoeffPoly::parse(coeff, registry);
                    try {
                        out.add_term(Forest::parse(forest.substr(skip)), c);
                    } catch (const ParseError& e) {
                        throw ParseError("malformed forest", bar + 1 + skip + e.offset());
                    }
                }
            } catch (const ParseError& e) {
                throw ParseError("malformed element term", base + e.offset());
            }
        }
        pos = end + 1;
    }
    return out;
}

bool AlgebroidElement::is_pure() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.is_constant(); });
}

int AlgebroidElement::max_grade() const {
    int g = -1;
    for (const auto& [w, c] : terms_) g = std::max(g, w.grade() + c.max_degree());
    return g;
}

int AlgebroidElement::min_grade() const {
    if (terms_.empty()) return -1;
    int g = terms_.begin()->first.grade() + terms_.begin()->second.min_degree();
    for (const auto& [w, c] : terms_) g = std::min(g, w.grade() + c.min_degree());
    return g;
}

CoeffPoly AlgebroidElement::coefficient(const Forest& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? CoeffPoly() : it->second;
}

void AlgebroidElement::add_term(const Forest& w, const CoeffPoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void AlgebroidElement::add_scaled(const Forest& w, const CoeffPoly& f, const Rational& q) {
    if (f.is_zero() || q == 0) return;
    auto [it, inserted] = terms_.try_emplace(w);
    it->second.add_scaled(f, q);
    if (it->second.is_zero()) terms_.erase(it);
}

AlgebroidElement& AlgebroidElement::operator+=(const AlgebroidElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

AlgebroidElement& AlgebroidElement::operator-=(const AlgebroidElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

AlgebroidElement operator*(const CoeffPoly& f, const AlgebroidElement& a) {
    AlgebroidElement out;
    if (f.is_zero()) return out;
    for (const auto& [w, c] : a.terms_) out.add_term(w, f * c);
    return out;
}

std::string dump(const AlgebroidElement& a) {
    std::string out;
    for (const auto& [w, c] : a.terms()) out += format(c) + " | " + format(w) + "\n";
    return out;
}

std::string format_inline(const AlgebroidElement& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : a.terms()) {
        if (!first) out += "; ";
        first = false;
        out += format(c) + " | " + format(w);
    }
    return out;
}

TensorElement tensor(const AlgebroidElement& a, const AlgebroidElement& b) {
    TensorElement out;
    for (const auto& [wa, ca] : a.terms()) {
        for (const auto& [wb, cb] : b.terms()) out.add_term({wa, wb}, ca * cb);
    }
    return out;
}

std::vector<std::pair<Forest, Forest>> deshuffles(const Forest& w) {
    const std::size_t n = w.length();
    if (n >= 8 * sizeof(unsigned long) - 1) throw CapacityError("word too long to deshuffle");
    std::vector<std::pair<Forest, Forest>> out;
    out.reserve(std::size_t{1} << n);
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        std::vector<PlanarTree> left;
        std::vector<PlanarTree> right;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1UL ? left : right).push_back(w[i]);
        out.emplace_back(Forest(std::move(left)), Forest(std::move(right)));
    }
    return out;
}

AlgebroidElement concat_mul(const AlgebroidElement& a, const AlgebroidElement& b) {
    AlgebroidElement out;
    for (const auto& [wa, ca] : a.terms()) {
        for (const auto& [wb, cb] : b.terms()) out.add_term(wa.concat(wb), ca * cb);
    }
    return out;
}

TensorElement coproduct(const AlgebroidElement& a) {
    TensorElement out;
    for (const auto& [w, c] : a.terms()) {
        for (auto& [l, r] : deshuffles(w)) out.add_term({l, r}, c);
    }
    return out;
}

Tensor<3> coproduct2(const AlgebroidElement& a) {
    Tensor<3> out;
    for (const auto& [w, c] : a.terms()) {
        for (const auto& [l, r] : deshuffles(w)) {
            for (const auto& [ll, lr] : deshuffles(l)) out.add_term({ll, lr, r}, c);
        }
    }
    return out;
}

CoeffPoly counit(const AlgebroidElement& a) { return a.coefficient(Forest()); }

AlgebroidElement antipode_concat(const AlgebroidElement& a) {
    AlgebroidElement out;
    for (const auto& [w, c] : a.terms()) out.add_term(w.reversed(), w.length() % 2 ? -c : c);
    return out;
}

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<Forest, Forest>& p) const noexcept {
        const ForestHash h;
        return h(p.first) * 0x100000001b3ULL ^ h(p.second);
    }
};

template <class Map>
class Memo {
public:
    using Key = typename Map::key_type;
    using Value = typename Map::mapped_type;

    bool find(const Key& k, Value& out) const {
        std::shared_lock lock(mutex_);
        auto it = table_.find(k);
        if (it == table_.end()) return false;
        out = it->second;
        return true;
    }
    void store(const Key& k, const Value& v) {
        std::unique_lock lock(mutex_);
        table_.emplace(k, v);
    }

private:
    mutable std::shared_mutex mutex_;
    Map table_;
};

// Scales a coefficient-free element by a polynomial and accumulates into out.
void accumulate(AlgebroidElement& out, const CoeffPoly& f, const AlgebroidElement& pure) {
    for (const auto& [w, c] : pure.terms()) {
        if (c.is_constant()) {
            out.add_scaled(w, f, c.constant_term());
        } else {
            out.add_term(w, f * c);
        }
    }
}

void accumulate_prefixed(AlgebroidElement& out, const Forest& prefix, const CoeffPoly& f,
                         const AlgebroidElement& y) {
    for (const auto& [w, c] : y.terms()) {
        if (c.is_constant()) {
            out.add_scaled(prefix.concat(w), f, c.constant_term());
        } else {
            out.add_term(prefix.concat(w), f * c);
        }
    }
}

}  // namespace

struct PostHopfAlgebroid::Caches {
    Memo<std::unordered_map<std::pair<Forest, Forest>, AlgebroidElement, PairHash>> triangle;
    Memo<std::unordered_map<std::pair<Forest, Forest>, AlgebroidElement, PairHash>> gl;
    Memo<std::unordered_map<Forest, AlgebroidElement, ForestHash>> gl_antipode;
    Memo<std::map<std::pair<Forest, Monomial>, CoeffPoly>> act;
    Memo<std::map<std::pair<Forest, Monomial>, CoeffPoly>> antipode_act;
};

PostHopfAlgebroid::PostHopfAlgebroid(DerivationMode mode, int grade_bound)
    : mode_(mode), grade_bound_(grade_bound), caches_(std::make_unique<Caches>()) {}

PostHopfAlgebroid::~PostHopfAlgebroid() = default;

void PostHopfAlgebroid::guard(int grade) const {
    if (grade > grade_bound_) {
        throw CapacityError("grade " + std::to_string(grade) + " exceeds algebroid bound " +
                            std::to_string(grade_bound_));
    }
}

AlgebroidElement PostHopfAlgebroid::triangle_words(const Forest& a, const Forest& b) const {
    if (a.empty()) return AlgebroidElement::word(b);
    guard(a.grade() + b.grade());
    const auto key = std::make_pair(a, b);
    AlgebroidElement out;
    if (caches_->triangle.find(key, out)) return out;

    // Closed form of the recursion: A |> b attaches the letters of A at the vertices of b.
    for (const auto& [w, m] : graft_forest(a, b)) out.add_term(w, CoeffPoly(m));
    caches_->triangle.store(key, out);
    return out;
}

AlgebroidElement PostHopfAlgebroid::triangle(const AlgebroidElement& a, const AlgebroidElement& b) const {
    AlgebroidElement out;
    if (a.is_zero() || b.is_zero()) return out;
    guard(a.max_grade() + b.max_grade());
    // w |> (h v) = sum (w_1 -> h)(w_2 |> v). Collecting the factor in front of each w_2
    // first lets every kernel w_2 |> v be applied once per term of b.
    for (const auto& [v, h] : b.terms()) {
        std::map<Forest, CoeffPoly> by_right;
        if (h.is_constant()) {
            const Rational q = h.constant_term();
            for (const auto& [w, f] : a.terms()) by_right[w].add_scaled(f, q);
        } else {
            std::map<Forest, CoeffPoly> acts;  // l -> (l -> h)
            for (const auto& [w, f] : a.terms()) {
                for (const auto& [l, r] : deshuffles(w)) {
                    auto it = acts.find(l);
                    if (it == acts.end()) it = acts.emplace(l, act_word(l, h)).first;
                    if (!it->second.is_zero()) by_right[r] += f * it->second;
                }
            }
        }
        for (const auto& [r, c] : by_right) {
            if (!c.is_zero()) accumulate(out, c, triangle_words(r, v));
        }
    }
    return out;
}

CoeffPoly PostHopfAlgebroid::act_word(const Forest& w, const CoeffPoly& f) const {
    if (w.empty()) return f;
    // The action is linear in f; constants are killed by nonempty words.
    CoeffPoly out;
    for (const auto& [m, c] : f.terms()) {
        if (!m.is_one()) out.add_scaled(act_monomial(w, m), c);
    }
    return out;
}

CoeffPoly PostHopfAlgebroid::act_monomial(const Forest& w, const Monomial& m) const {
    guard(w.grade() + m.degree());
    const auto key = std::make_pair(w, m);
    CoeffPoly out;
    if (caches_->act.find(key, out)) return out;
    const auto& fs = m.factors();
    if (fs.size() == 1 && fs[0].second == 1) {
        // Single generator: (v W) -> g = v -> (W -> g) - (v |> W) -> g
        const CoeffPoly g(m, Rational(1));
        if (w.length() == 1) {
            out = derive(w[0], g, mode_);
        } else {
            const Forest v(w[0]);
            const Forest rest = w.slice(1, w.length());
            out = derive(w[0], act_word(rest, g), mode_);
            const AlgebroidElement head = triangle_words(v, rest);
            for (const auto& [u, c] : head.terms()) out -= c * act_word(u, g);
        }
    } else {
        // Module algebra: W -> (g m') = sum (W_1 -> g)(W_2 -> m').
        const Monomial g(*fs[0].first);
        Monomial rest;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const int e = i == 0 ? fs[i].second - 1 : fs[i].second;
            if (e > 0) rest = rest * Monomial(*fs[i].first, e);
        }
        const CoeffPoly g_poly(g, Rational(1));
        const CoeffPoly rest_poly(rest, Rational(1));
        for (const auto& [l, r] : deshuffles(w)) {
            const CoeffPoly a = act_word(l, g_poly);
            if (a.is_zero()) continue;
            const CoeffPoly b = act_word(r, rest_poly);
            if (!b.is_zero()) out += a * b;
        }
    }
    caches_->act.store(key, out);
    return out;
}

CoeffPoly PostHopfAlgebroid::act_word_reference(const Forest& w, const CoeffPoly& f) const {
    if (w.empty()) return f;
    guard(w.grade() + f.max_degree());
    if (w.length() == 1) return derive(w[0], f, mode_);
    const Forest v(w[0]);
    const Forest rest = w.slice(1, w.length());
    CoeffPoly out = derive(w[0], act_word_reference(rest, f), mode_);
    const AlgebroidElement head = triangle_words(v, rest);
    for (const auto& [u, c] : head.terms()) out -= c * act_word_reference(u, f);
    return out;
}

CoeffPoly PostHopfAlgebroid::module_action(const AlgebroidElement& x, const CoeffPoly& f) const {
    CoeffPoly out;
    for (const auto& [w, c] : x.terms()) out += c * act_word(w, f);
    return out;
}

AlgebroidElement PostHopfAlgebroid::gl_words(const Forest& a, const Forest& b) const {
    if (a.empty()) return AlgebroidElement::word(b);
    if (b.empty()) return AlgebroidElement::word(a);
    const auto key = std::make_pair(a, b);
    AlgebroidElement out;
    if (caches_->gl.find(key, out)) return out;
    for (const auto& [l, r] : deshuffles(a)) accumulate_prefixed(out, l, CoeffPoly(1), triangle_words(r, b));
    caches_->gl.store(key, out);
    return out;
}

AlgebroidElement PostHopfAlgebroid::gl_product(const AlgebroidElement& a, const AlgebroidElement& b) const {
    AlgebroidElement out;
    const bool pure = b.is_pure();
    std::map<Forest, AlgebroidElement> right_cache;  // r -> r |> b
    for (const auto& [w, f] : a.terms()) {
        if (pure) {
            for (const auto& [v, c] : b.terms()) accumulate(out, f * c, gl_words(w, v));
        } else {
            for (const auto& [l, r] : deshuffles(w)) {
                auto it = right_cache.find(r);
                if (it == right_cache.end()) it = right_cache.emplace(r, triangle(AlgebroidElement::word(r), b)).first;
                accumulate_prefixed(out, l, f, it->second);
            }
        }
    }
    return out;
}

AlgebroidElement PostHopfAlgebroid::gl_antipode_word(const Forest& w) const {
    if (w.empty()) return AlgebroidElement::unit();
    AlgebroidElement out;
    if (caches_->gl_antipode.find(w, out)) return out;
    out.add_term(w, CoeffPoly(-1));
    const auto splits = deshuffles(w);
    // Proper splittings: both sides nonempty.
    for (std::size_t i = 1; i + 1 < splits.size(); ++i) {
        const auto& [l, r] = splits[i];
        const AlgebroidElement sr = gl_antipode_word(r);
        for (const auto& [u, c] : sr.terms()) accumulate(out, -c, gl_words(l, u));
    }
    caches_->gl_antipode.store(w, out);
    return out;
}

AlgebroidElement PostHopfAlgebroid::gl_antipode(const AlgebroidElement& a) const {
    AlgebroidElement out;
    for (const auto& [w, f] : a.terms()) accumulate(out, f, gl_antipode_word(w));
    return out;
}

CoeffPoly PostHopfAlgebroid::antipode_act(const Forest& w, const Monomial& m) const {
    const auto key = std::make_pair(w, m);
    CoeffPoly out;
    if (caches_->antipode_act.find(key, out)) return out;
    // From sum l * S(r) = eps(w) over deshuffles: S(w) acts as -sum_{l nonempty} l acting after S(r).
    if (w.empty()) {
        out = CoeffPoly(m, Rational(1));
    } else {
        const auto splits = deshuffles(w);
        for (std::size_t i = 1; i < splits.size(); ++i) {
            const auto& [l, r] = splits[i];
            if (l.empty()) continue;
            const CoeffPoly inner = r.empty() ? CoeffPoly(m, Rational(1)) : antipode_act(r, m);
            out.add_scaled(act_word(l, inner), Rational(-1));
        }
    }
    caches_->antipode_act.store(key, out);
    return out;
}

AlgebroidElement PostHopfAlgebroid::theta(const AlgebroidElement& a) const {
    // Grouped by the right deshuffle factor; S(l) kills constants unless l is empty.
    std::map<Forest, CoeffPoly> by_right;
    for (const auto& [w, f] : a.terms()) {
        for (const auto& [l, r] : deshuffles(w)) {
            CoeffPoly& g = by_right[r];
            if (l.empty()) {
                g += f;
                continue;
            }
            for (const auto& [m, c] : f.terms()) {
                if (!m.is_one()) g.add_scaled(antipode_act(l, m), c);
            }
        }
    }
    AlgebroidElement out;
    for (const auto& [r, g] : by_right) {
        if (!g.is_zero()) accumulate(out, g, gl_antipode_word(r));
    }
    return out;
}

CoeffPoly PostHopfAlgebroid::lu_action(const AlgebroidElement& x, const CoeffPoly& f) const {
    return counit(triangle(x, AlgebroidElement::scalar(f)));
}

AlgebroidElement PostHopfAlgebroid::gl_right_scalar(const AlgebroidElement& x, const CoeffPoly& f) const {
    AlgebroidElement out;
    for (const auto& [w, c] : x.terms()) {
        for (const auto& [l, r] : deshuffles(w)) {
            const CoeffPoly g = act_word(r, f);
            if (!g.is_zero()) out.add_term(l, c * g);
        }
    }
    return out;
}

}  // namespace postlr
