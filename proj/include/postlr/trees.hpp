#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace postlr {

// Planar rooted tree held by its canonical encoding.
//   tree := "o" | "[" tree+ "]"
// Children are listed leftmost first; "[]" is accepted on input and means "o".
class PlanarTree {
public:
    PlanarTree();  // the single vertex "o"

    static PlanarTree parse(std::string_view text);
    // Root with the given children; no children gives "o".
    static PlanarTree graft_root(const std::vector<PlanarTree>& children);

    const std::string& code() const noexcept { return code_; }
    int vertex_count() const noexcept { return vertices_; }
    bool is_leaf() const noexcept { return vertices_ == 1; }
    std::vector<PlanarTree> children() const;

    // Lexicographic on the canonical code.
    friend bool operator==(const PlanarTree& a, const PlanarTree& b) { return a.code_ == b.code_; }
    friend std::strong_ordering operator<=>(const PlanarTree& a, const PlanarTree& b) {
        return a.code_ <=> b.code_;
    }

private:
    PlanarTree(std::string code, int vertices) : code_(std::move(code)), vertices_(vertices) {}

    std::string code_;
    int vertices_;
};

std::string format(const PlanarTree& t);
PlanarTree parse_tree(std::string_view text);

// Word of trees; the empty forest is the unit word "1".
class Forest {
public:
    Forest() = default;
    explicit Forest(std::vector<PlanarTree> trees);
    explicit Forest(const PlanarTree& t) : Forest(std::vector<PlanarTree>{t}) {}

    static Forest parse(std::string_view text);

    const std::vector<PlanarTree>& trees() const noexcept { return trees_; }
    std::size_t length() const noexcept { return trees_.size(); }
    bool empty() const noexcept { return trees_.empty(); }
    int grade() const noexcept { return grade_; }
    const PlanarTree& operator[](std::size_t i) const { return trees_[i]; }

    Forest concat(const Forest& other) const;
    Forest slice(std::size_t begin, std::size_t end) const;
    Forest reversed() const;

    friend bool operator==(const Forest& a, const Forest& b) { return a.trees_ == b.trees_; }
    // Grade first, then lexicographic over the tree sequence.
    friend std::strong_ordering operator<=>(const Forest& a, const Forest& b);

private:
    std::vector<PlanarTree> trees_;
    int grade_ = 0;
};

std::string format(const Forest& f);
Forest parse_forest(std::string_view text);

// Sum over the vertices v of sigma of sigma with tau attached as the new leftmost child of v.
std::map<PlanarTree, long> left_graft(const PlanarTree& tau, const PlanarTree& sigma);

// Every way of attaching each tree of a at a vertex of b; trees sent to the same vertex become
// its leftmost children in their order in a. Multiplicities count assignments, so they sum to
// (vertices of b)^(length of a). An empty a gives b once.
std::map<Forest, long> graft_forest(const Forest& a, const Forest& b);

inline constexpr int kDefaultEnumerationBound = 6;

// All planar trees with exactly n vertices, ascending.
std::vector<PlanarTree> enumerate_trees(int n);
// Every forest of grade <= max_grade exactly once, ascending.
std::vector<Forest> enumerate_forests(int max_grade, int bound = kDefaultEnumerationBound);
// Forests of grade exactly n, ascending.
std::vector<Forest> forests_of_grade(int n, int bound = kDefaultEnumerationBound);

struct ForestHash {
    std::size_t operator()(const Forest& f) const noexcept;
};

}  // namespace postlr

template <>
struct std::hash<postlr::PlanarTree> {
    std::size_t operator()(const postlr::PlanarTree& t) const noexcept {
        return std::hash<std::string>{}(t.code());
    }
};
