#include "postlr/coeffs.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <set>
#include <shared_mutex>

#include "postlr/errors.hpp"

namespace postlr {

Rational rational(long num, long den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string format(const Rational& q) { return q.get_str(); }

int AromaGenerator::degree() const {
    int d = base_degree;
    for (const auto& t : applied) d += t.vertex_count();
    return d;
}

AromaGenerator AromaGenerator::derived_by(const PlanarTree& tau) const {
    AromaGenerator g = *this;
    g.applied.push_back(tau);
    return g;
}

std::strong_ordering operator<=>(const AromaGenerator& a, const AromaGenerator& b) {
    if (auto c = a.base <=> b.base; c != 0) return c;
    if (auto c = a.applied.size() <=> b.applied.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.applied.begin(), a.applied.end(),
                                                  b.applied.begin(), b.applied.end());
}

std::string format(const AromaGenerator& g) {
    std::string out = g.base;
    if (!g.applied.empty()) {
        out += "^(";
        for (std::size_t i = 0; i < g.applied.size(); ++i) {
            if (i) out += ',';
            out += g.applied[i].code();
        }
        out += ')';
    }
    return out;
}

GeneratorRegistry::GeneratorRegistry() { degrees_[kTraceAroma] = 2; }

void GeneratorRegistry::set_base_degree(const std::string& base, int degree) {
    if (degree < 0) throw DomainError("base degree must be nonnegative");
    degrees_[base] = degree;
}

int GeneratorRegistry::base_degree(const std::string& base) const {
    auto it = degrees_.find(base);
    return it == degrees_.end() ? 0 : it->second;
}

AromaGenerator trace_aroma() { return {kTraceAroma, 2, {}}; }

namespace {

// Total order used for interning; refines the generator order by the base degree.
struct InternLess {
    bool operator()(const AromaGenerator& a, const AromaGenerator& b) const {
        if (auto c = a <=> b; c != 0) return c < 0;
        return a.base_degree < b.base_degree;
    }
};

std::strong_ordering compare_interned(const AromaGenerator* a, const AromaGenerator* b) {
    if (a == b) return std::strong_ordering::equal;
    if (auto c = a->order_prefix <=> b->order_prefix; c != 0) return c;
    if (auto c = a->order_key.compare(b->order_key); c != 0) return c <=> 0;
    return a->base_degree <=> b->base_degree;
}

// base NUL count (code NUL)*: byte order matches operator<=>, since NUL sorts before every
// character a base or code can contain.
void set_order_key(AromaGenerator& g) {
    if (g.applied.size() > 255) throw CapacityError("too many derivations on one generator");
    std::string key = g.base;
    key += '\0';
    key += static_cast<char>(g.applied.size());
    for (const auto& t : g.applied) {
        key += t.code();
        key += '\0';
    }
    std::uint64_t prefix = 0;
    for (std::size_t i = 0; i < 8; ++i) prefix = (prefix << 8) | (i < key.size() ? static_cast<unsigned char>(key[i]) : 0U);
    g.order_key = std::move(key);
    g.order_prefix = prefix;
}

}  // namespace

const AromaGenerator* intern(const AromaGenerator& g) {
    static std::shared_mutex mutex;
    static std::set<AromaGenerator, InternLess> table;
    {
        std::shared_lock lock(mutex);
        auto it = table.find(g);
        if (it != table.end()) return &*it;
    }
    AromaGenerator keyed = g;
    set_order_key(keyed);
    std::unique_lock lock(mutex);
    return &*table.insert(std::move(keyed)).first;
}

Monomial::Monomial(const AromaGenerator& g, int exponent) : Monomial(intern(g), exponent) {}

Monomial::Monomial(const AromaGenerator* g, int exponent) {
    if (exponent > 0) {
        factors_.emplace_back(g, exponent);
        degree_ = g->degree() * exponent;
    }
}

Monomial Monomial::operator*(const Monomial& other) const {
    if (other.is_one()) return *this;
    if (is_one()) return other;
    Monomial out;
    out.factors_.reserve(factors_.size() + other.factors_.size());
    out.degree_ = degree_ + other.degree_;
    auto i = factors_.begin();
    auto j = other.factors_.begin();
    while (i != factors_.end() || j != other.factors_.end()) {
        if (j == other.factors_.end()) {
            out.factors_.push_back(*i++);
            continue;
        }
        if (i == factors_.end()) {
            out.factors_.push_back(*j++);
            continue;
        }
        const auto c = compare_interned(i->first, j->first);
        if (c < 0) {
            out.factors_.push_back(*i++);
        } else if (c > 0) {
            out.factors_.push_back(*j++);
        } else {
            out.factors_.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return out;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
    const std::size_t n = std::min(a.factors_.size(), b.factors_.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (auto c = compare_interned(a.factors_[k].first, b.factors_[k].first); c != 0) return c;
        if (auto c = a.factors_[k].second <=> b.factors_[k].second; c != 0) return c;
    }
    return a.factors_.size() <=> b.factors_.size();
}

std::string format(const Monomial& m) {
    if (m.is_one()) return "1";
    std::string out;
    bool first = true;
    for (const auto& [g, e] : m.factors()) {
        if (!first) out += '*';
        first = false;
        out += format(*g);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

CoeffPoly::CoeffPoly(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial(), c);
}

CoeffPoly::CoeffPoly(const AromaGenerator& g) { terms_.emplace(Monomial(g), Rational(1)); }

CoeffPoly::CoeffPoly(const Monomial& m, const Rational& c) {
    if (c != 0) terms_.emplace(m, c);
}

bool CoeffPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational CoeffPoly::constant_term() const {
    auto it = terms_.find(Monomial());
    return it == terms_.end() ? Rational(0) : it->second;
}

int CoeffPoly::max_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

int CoeffPoly::min_degree() const {
    if (terms_.empty()) return -1;
    int d = terms_.begin()->first.degree();
    for (const auto& [m, c] : terms_) d = std::min(d, m.degree());
    return d;
}

void CoeffPoly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

CoeffPoly& CoeffPoly::operator+=(const CoeffPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

CoeffPoly& CoeffPoly::operator-=(const CoeffPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

CoeffPoly& CoeffPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

void CoeffPoly::add_scaled(const CoeffPoly& f, const Rational& q) {
    if (q == 0) return;
    for (const auto& [m, c] : f.terms_) add_term(m, c * q);
}

CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b) {
    if (b.is_constant()) return a * b.constant_term();
    if (a.is_constant()) return b * a.constant_term();
    CoeffPoly out;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    }
    return out;
}

CoeffPoly poly_add(const CoeffPoly& a, const CoeffPoly& b) { return a + b; }
CoeffPoly poly_mul(const CoeffPoly& a, const CoeffPoly& b) { return a * b; }

std::string format(const CoeffPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rational mag = abs(c);
        const bool neg = c < 0;
        if (first) {
            if (neg) out += '-';
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        if (m.is_one()) {
            out += format(mag);
        } else {
            if (mag != 1) out += format(mag) + "*";
            out += format(m);
        }
    }
    return out;
}

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, const GeneratorRegistry& reg) : s_(text), reg_(reg) {}

    CoeffPoly parse() {
        skip();
        CoeffPoly out;
        Rational sign(1);
        if (peek() == '-') {
            sign = -1;
            ++pos_;
        } else if (peek() == '+') {
            ++pos_;
        }
        out += term() * sign;
        for (;;) {
            skip();
            if (pos_ == s_.size()) break;
            const char c = s_[pos_];
            if (c != '+' && c != '-') throw ParseError("expected '+' or '-'", pos_);
            ++pos_;
            out += term() * Rational(c == '-' ? -1 : 1);
        }
        return out;
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip() {
        while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
    }

    CoeffPoly term() {
        CoeffPoly out(1);
        out = out * factor();
        for (;;) {
            skip();
            if (peek() != '*') break;
            ++pos_;
            out = out * factor();
        }
        return out;
    }

    unsigned long integer() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected integer", pos_);
        return std::stoul(std::string(s_.substr(start, pos_ - start)));
    }

    CoeffPoly factor() {
        skip();
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string num(s_.substr(start, pos_ - start));
            if (peek() == '/') {
                ++pos_;
                const std::size_t ds = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (ds == pos_) throw ParseError("expected denominator", pos_);
                num += "/" + std::string(s_.substr(ds, pos_ - ds));
                Rational q(num);
                if (q.get_den() == 0) throw ParseError("zero denominator", ds);
                q.canonicalize();
                return CoeffPoly(q);
            }
            return CoeffPoly(Rational(num));
        }
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
            throw ParseError("expected number or generator", pos_);
        }
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
        }
        AromaGenerator g = reg_.make(std::string(s_.substr(start, pos_ - start)));
        if (peek() == '^' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '(') {
            pos_ += 2;
            for (;;) {
                const std::size_t ts = pos_;
                int depth = 0;
                while (pos_ < s_.size() && (depth > 0 || (s_[pos_] != ',' && s_[pos_] != ')'))) {
                    if (s_[pos_] == '[') ++depth;
                    if (s_[pos_] == ']') --depth;
                    ++pos_;
                }
                try {
                    g.applied.push_back(PlanarTree::parse(s_.substr(ts, pos_ - ts)));
                } catch (const ParseError& e) {
                    throw ParseError("malformed tree in generator", ts + e.offset());
                }
                if (pos_ >= s_.size()) throw ParseError("unterminated generator", pos_);
                if (s_[pos_++] == ')') break;
            }
        }
        int exponent = 1;
        if (peek() == '^') {
            ++pos_;
            exponent = static_cast<int>(integer());
        }
        return CoeffPoly(Monomial(g, exponent), Rational(1));
    }

    std::string_view s_;
    const GeneratorRegistry& reg_;
    std::size_t pos_ = 0;
};

}  // namespace

CoeffPoly CoeffPoly::parse(std::string_view text, const GeneratorRegistry& registry) {
    return PolyParser(text, registry).parse();
}

CoeffPoly parse_poly(std::string_view text, const GeneratorRegistry& registry) {
    return CoeffPoly::parse(text, registry);
}

CoeffPoly derive(const PlanarTree& tau, const CoeffPoly& f) {
    CoeffPoly out;
    for (const auto& [m, c] : f.terms()) {
        const auto& fs = m.factors();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            Monomial rest;
            for (std::size_t j = 0; j < fs.size(); ++j) {
                const int e = (i == j) ? fs[j].second - 1 : fs[j].second;
                if (e > 0) rest = rest * Monomial(*fs[j].first, e);
            }
            out.add_term(rest * Monomial(fs[i].first->derived_by(tau)), c * fs[i].second);
        }
    }
    return out;
}

CoeffPoly derive(const PlanarTree& tau, const CoeffPoly& f, DerivationMode mode) {
    return mode == DerivationMode::Free ? derive(tau, f) : CoeffPoly();
}

}  // namespace postlr
