#include "postlr/trees.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

#include "postlr/errors.hpp"

namespace postlr {

namespace {

struct TreeParser {
    std::string_view text;
    std::size_t pos = 0;

    // Appends the canonical code of one tree to out; returns its vertex count.
    int tree(std::string& out) {
        if (pos >= text.size()) throw ParseError("expected tree, found end of input", pos);
        const char c = text[pos];
        if (c == 'o') {
            ++pos;
            out += 'o';
            return 1;
        }
        if (c != '[') throw ParseError(std::string("unexpected character '") + c + "'", pos);
        ++pos;
        std::string inner;
        int vertices = 1;
        while (pos < text.size() && text[pos] != ']') vertices += tree(inner);
        if (pos >= text.size()) throw ParseError("unterminated '['", pos);
        ++pos;
        if (inner.empty()) {
            out += 'o';
        } else {
            out += '[';
            out += inner;
            out += ']';
        }
        return vertices;
    }
};

}  // namespace

PlanarTree::PlanarTree() : code_("o"), vertices_(1) {}

PlanarTree PlanarTree::parse(std::string_view text) {
    TreeParser p{text};
    std::string code;
    const int v = p.tree(code);
    if (p.pos != text.size()) throw ParseError("trailing characters after tree", p.pos);
    return PlanarTree(std::move(code), v);
}

PlanarTree PlanarTree::graft_root(const std::vector<PlanarTree>& children) {
    if (children.empty()) return PlanarTree();
    std::string code = "[";
    int v = 1;
    for (const auto& c : children) {
        code += c.code_;
        v += c.vertices_;
    }
    code += ']';
    return PlanarTree(std::move(code), v);
}

std::vector<PlanarTree> PlanarTree::children() const {
    std::vector<PlanarTree> out;
    if (is_leaf()) return out;
    // Split the interior of "[...]" at depth zero.
    std::size_t i = 1;
    const std::size_t end = code_.size() - 1;
    while (i < end) {
        std::size_t j = i;
        int depth = 0;
        int vertices = 0;
        do {
            const char c = code_[j];
            if (c == '[') {
                ++depth;
                ++vertices;
            } else if (c == ']') {
                --depth;
            } else {
                ++vertices;
            }
            ++j;
        } while (depth > 0);
        out.push_back(PlanarTree(code_.substr(i, j - i), vertices));
        i = j;
    }
    return out;
}

std::string format(const PlanarTree& t) { return t.code(); }

PlanarTree parse_tree(std::string_view text) { return PlanarTree::parse(text); }

Forest::Forest(std::vector<PlanarTree> trees) : trees_(std::move(trees)) {
    for (const auto& t : trees_) grade_ += t.vertex_count();
}

Forest Forest::parse(std::string_view text) {
    if (text == "1") return Forest();
    if (text.empty()) throw ParseError("empty forest (use \"1\")", 0);
    std::vector<PlanarTree> trees;
    std::size_t pos = 0;
    while (pos < text.size()) {
        TreeParser p{text, pos};
        std::string code;
        p.tree(code);
        trees.push_back(PlanarTree::parse(code));
        pos = p.pos;
        if (pos < text.size()) {
            if (text[pos] != ' ') throw ParseError("expected ' ' between trees", pos);
            ++pos;
            if (pos == text.size()) throw ParseError("trailing separator", pos);
        }
    }
    return Forest(std::move(trees));
}

Forest Forest::concat(const Forest& other) const {
    std::vector<PlanarTree> t = trees_;
    t.insert(t.end(), other.trees_.begin(), other.trees_.end());
    return Forest(std::move(t));
}

Forest Forest::slice(std::size_t begin, std::size_t end) const {
    return Forest(std::vector<PlanarTree>(trees_.begin() + static_cast<std::ptrdiff_t>(begin),
                                          trees_.begin() + static_cast<std::ptrdiff_t>(end)));
}

Forest Forest::reversed() const {
    return Forest(std::vector<PlanarTree>(trees_.rbegin(), trees_.rend()));
}

std::strong_ordering operator<=>(const Forest& a, const Forest& b) {
    if (auto c = a.grade_ <=> b.grade_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.trees_.begin(), a.trees_.end(),
                                                  b.trees_.begin(), b.trees_.end());
}

std::string format(const Forest& f) {
    if (f.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < f.length(); ++i) {
        if (i) out += ' ';
        out += f[i].code();
    }
    return out;
}

Forest parse_forest(std::string_view text) { return Forest::parse(text); }

std::map<PlanarTree, long> left_graft(const PlanarTree& tau, const PlanarTree& sigma) {
    std::map<PlanarTree, long> out;
    const std::string& s = sigma.code();
    const std::string& t = tau.code();
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::string code;
        if (s[i] == 'o') {
            code = s.substr(0, i) + "[" + t + "]" + s.substr(i + 1);
        } else if (s[i] == '[') {
            code = s.substr(0, i + 1) + t + s.substr(i + 1);
        } else {
            continue;
        }
        out[PlanarTree::parse(code)] += 1;
    }
    return out;
}

std::map<Forest, long> graft_forest(const Forest& a, const Forest& b) {
    struct Vertex {
        std::size_t tree;
        std::size_t pos;
    };
    std::vector<Vertex> vertices;
    for (std::size_t j = 0; j < b.length(); ++j) {
        const std::string& code = b[j].code();
        for (std::size_t p = 0; p < code.size(); ++p) {
            if (code[p] != ']') vertices.push_back({j, p});
        }
    }
    const std::size_t n = a.length();
    std::map<Forest, long> out;
    if (n == 0) {
        out[b] = 1;
        return out;
    }
    if (vertices.empty()) return out;

    std::unordered_map<std::string, long> counts;
    std::vector<std::size_t> choice(n, 0);
    std::vector<std::string> prefix(vertices.size());  // children prepended at each vertex
    for (;;) {
        for (auto& p : prefix) p.clear();
        for (std::size_t i = 0; i < n; ++i) prefix[choice[i]] += a[i].code();
        std::string key;
        std::size_t v = 0;
        for (std::size_t j = 0; j < b.length(); ++j) {
            if (j) key += ' ';
            const std::string& code = b[j].code();
            for (std::size_t p = 0; p < code.size(); ++p) {
                const char c = code[p];
                if (c == ']') {
                    key += c;
                    continue;
                }
                const std::string& kids = prefix[v++];
                if (kids.empty()) {
                    key += c;
                } else if (c == 'o') {
                    key += '[';
                    key += kids;
                    key += ']';
                } else {
                    key += '[';
                    key += kids;
                }
            }
        }
        counts[key] += 1;
        std::size_t i = n;
        while (i > 0 && ++choice[i - 1] == vertices.size()) choice[--i] = 0;
        if (i == 0) break;
    }
    for (const auto& [key, m] : counts) out[Forest::parse(key)] += m;
    return out;
}

namespace {

std::vector<std::vector<PlanarTree>> forest_sequences(int n, std::vector<std::vector<std::vector<PlanarTree>>>& memo);

std::vector<PlanarTree> trees_with(int n, std::vector<std::vector<std::vector<PlanarTree>>>& memo) {
    if (n == 1) return {PlanarTree()};
    std::vector<PlanarTree> out;
    for (const auto& children : forest_sequences(n - 1, memo)) out.push_back(PlanarTree::graft_root(children));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<PlanarTree>> forest_sequences(int n, std::vector<std::vector<std::vector<PlanarTree>>>& memo) {
    if (static_cast<int>(memo.size()) > n && !memo[static_cast<std::size_t>(n)].empty()) {
        return memo[static_cast<std::size_t>(n)];
    }
    std::vector<std::vector<PlanarTree>> out;
    if (n == 0) {
        out.push_back({});
    } else {
        for (int k = 1; k <= n; ++k) {
            const auto heads = trees_with(k, memo);
            const auto tails = forest_sequences(n - k, memo);
            for (const auto& h : heads) {
                for (const auto& tail : tails) {
                    std::vector<PlanarTree> seq{h};
                    seq.insert(seq.end(), tail.begin(), tail.end());
                    out.push_back(std::move(seq));
                }
            }
        }
    }
    if (static_cast<int>(memo.size()) <= n) memo.resize(static_cast<std::size_t>(n) + 1);
    memo[static_cast<std::size_t>(n)] = out;
    return out;
}

void check_bound(int grade, int bound) {
    if (grade < 0) throw DomainError("negative grade");
    if (grade > bound) {
        throw CapacityError("grade " + std::to_string(grade) + " exceeds enumeration bound " +
                            std::to_string(bound));
    }
}

}  // namespace

std::vector<PlanarTree> enumerate_trees(int n) {
    if (n < 1) throw DomainError("a planar tree has at least one vertex");
    std::vector<std::vector<std::vector<PlanarTree>>> memo;
    return trees_with(n, memo);
}

std::vector<Forest> forests_of_grade(int n, int bound) {
    check_bound(n, bound);
    std::vector<std::vector<std::vector<PlanarTree>>> memo;
    std::vector<Forest> out;
    for (auto& seq : forest_sequences(n, memo)) out.emplace_back(std::move(seq));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Forest> enumerate_forests(int max_grade, int bound) {
    check_bound(max_grade, bound);
    std::vector<Forest> out;
    for (int n = 0; n <= max_grade; ++n) {
        auto g = forests_of_grade(n, bound);
        out.insert(out.end(), g.begin(), g.end());
    }
    return out;
}

std::size_t ForestHash::operator()(const Forest& f) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& t : f.trees()) {
        h ^= std::hash<PlanarTree>{}(t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace postlr
