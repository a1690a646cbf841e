#pragma once

#include "stabenv/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stabenv {

// The pair (n,k) with n >= 2k fixing the rectangle R_{n,k} of size (n-k) x k.
struct GrassData {
    int n = 2, k = 1;
    GrassData() = default;
    GrassData(int n_, int k_) : n(n_), k(k_) {
        if (k < 1 || n < 2 * k) throw InvalidNK("need k >= 1 and n >= 2k");
    }
    int cols() const { return n - k; }  // range of i
    int rows() const { return k; }      // range of j
};

// Box (i,j) of R_{n,k}: i = 1..n-k, j = 1..k. Content c = i - j + k lies
// in [1, n-1] and is the quiver vertex the box sits over.
struct Box {
    int i = 0, j = 0;
    Box() = default;
    Box(int i_, int j_) : i(i_), j(j_) {}
    bool operator==(const Box& o) const { return i == o.i && j == o.j; }
    bool operator!=(const Box& o) const { return !(*this == o); }
    bool operator<(const Box& o) const { return i != o.i ? i < o.i : j < o.j; }
};

inline int content(const Box& b, const GrassData& g) { return b.i - b.j + g.k; }

// k-subset of {1..n}, strictly increasing.
struct Subset {
    std::vector<int> elements;
    Subset() = default;
    explicit Subset(std::vector<int> e) : elements(std::move(e)) {}
    int size() const { return static_cast<int>(elements.size()); }
    bool contains(int v) const;
    bool operator==(const Subset& o) const { return elements == o.elements; }
    std::string to_string() const;
};

enum class Order { Less, Greater, Equal, Incomparable };

// Componentwise (Bruhat) order on sorted k-subsets: p > q iff p_i >= q_i.
Order partial_order(const Subset& p, const Subset& q);

// Young diagram in R_{n,k}, stored as column heights: parts[i-1] is the
// number of boxes (i,j), j = 1..parts[i-1], in column i. Weakly decreasing,
// at most n-k parts, entries <= k; this is the convention of the bracket
// labels [3,2], [4,4,4,3,3,2] used throughout.
class YoungDiagram {
public:
    YoungDiagram() = default;
    explicit YoungDiagram(std::vector<int> parts);
    YoungDiagram(std::initializer_list<int> parts) : YoungDiagram(std::vector<int>(parts)) {}

    bool fits(const GrassData& g) const;
    void require_fits(const GrassData& g) const;  // throws DiagramOutOfRectangle

    bool contains(const Box& b) const;
    int col_height(int i) const;  // 0 when i exceeds the stored parts
    int box_count() const;
    const std::vector<int>& parts() const { return parts_; }

    std::vector<Box> boxes() const;
    std::vector<Box> complement_boxes(const GrassData& g) const;
    YoungDiagram complement(const GrassData& g) const;

    bool operator==(const YoungDiagram& o) const { return parts_ == o.parts_; }
    bool subset_of(const YoungDiagram& o) const;

    std::string to_string() const;

private:
    std::vector<int> parts_;
};

// Boundary-path heights of the rotated diagram: V[c], c = 0..n, with
// V[c] = max(|c-k|, max {i+j : (i,j) in diagram, i-j+k = c}).
std::vector<int> boundary_heights(const YoungDiagram& d, const GrassData& g);

// Slope -1 segments of the boundary path; inverse reconstructs the diagram.
Subset bij(const YoungDiagram& d, const GrassData& g);
YoungDiagram bij_inverse(const Subset& p, const GrassData& g);

// All diagrams in R_{n,k}, ordered so that bij gives the lexicographically
// ordered list of k-subsets.
std::vector<YoungDiagram> enumerate_diagrams(const GrassData& g);
std::vector<Subset> enumerate_subsets(const GrassData& g);
std::uint64_t binomial(int n, int k);

// rho, beta^(1), beta^(2) and v = beta^(1) + beta^(2) at a box.
struct BoxFunctions {
    int content = 0;
    int rho = 0;
    int beta1 = 0;
    int beta2 = 0;
    int v = 0;
};
BoxFunctions box_functions(const YoungDiagram& d, const Box& b, const GrassData& g);

// Rooted tree on the boxes of lambda (side tag false) or lambda-bar (true),
// with canonical root-outward orientation.
struct TreeEdge {
    Box tail, head;
};

struct Tree {
    bool bar = false;        // true: tree lives on the complement
    Box root;
    std::vector<Box> vertices;
    std::vector<TreeEdge> edges;  // canonical orientation, tail -> head

    bool has_vertex(const Box& b) const;
    // boxes of the canonically oriented subtree [b, t]
    std::vector<Box> subtree(const Box& b) const;  // throws BoxNotInTree
    // number of wrongly oriented edges: down/left for lambda-trees,
    // up/right for lambda-bar-trees
    int kappa() const;
};

// L-shaped subgraph: the two edges (i,j)-(i+1,j), (i+1,j)-(i+1,j+1). For
// complement-side diagrams the same construction is applied in the 180
// degree rotated coordinates.
struct LShape {
    TreeEdge e1, e2;  // stored unoriented (tail/head as listed)
};

std::vector<LShape> l_shapes(const std::vector<Box>& box_set, bool reflected,
                             const GrassData& g);

// The 2^m canonical trees of Upsilon_lambda (or Upsilon_lambda-bar when
// bar = true, rooted at (n-k,k) with reflected L-shapes).
std::vector<Tree> enumerate_trees(const YoungDiagram& d, bool bar, const GrassData& g);

// Involution of a complement-side tree at an admissible box: swaps the
// incoming edge of the box between its upper and left neighbours.
Tree involution(const Tree& tbar, const Box& b, const YoungDiagram& lambda,
                const GrassData& g);
bool involution_admissible(const Tree& tbar, const Box& b, const YoungDiagram& lambda,
                           const GrassData& g);

} // namespace stabenv
