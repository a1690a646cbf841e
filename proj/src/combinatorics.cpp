#include "stabenv/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace stabenv {

bool Subset::contains(int v) const {
    return std::binary_search(elements.begin(), elements.end(), v);
}

std::string Subset::to_string() const {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < elements.size(); ++i) {
        if (i) os << ",";
        os << elements[i];
    }
    os << "}";
    return os.str();
}

Order partial_order(const Subset& p, const Subset& q) {
    if (p.size() != q.size()) throw Error("partial_order: size mismatch");
    bool ge = true, le = true;
    for (int i = 0; i < p.size(); ++i) {
        if (p.elements[i] < q.elements[i]) ge = false;
        if (p.elements[i] > q.elements[i]) le = false;
    }
    if (ge && le) return Order::Equal;
    if (ge) return Order::Greater;
    if (le) return Order::Less;
    return Order::Incomparable;
}

YoungDiagram::YoungDiagram(std::vector<int> parts) : parts_(std::move(parts)) {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 0 || (i + 1 < parts_.size() && parts_[i] < parts_[i + 1]))
            throw Error("diagram parts must be weakly decreasing and nonnegative");
    }
}

bool YoungDiagram::fits(const GrassData& g) const {
    if (static_cast<int>(parts_.size()) > g.cols()) return false;
    return parts_.empty() || parts_[0] <= g.rows();
}

void YoungDiagram::require_fits(const GrassData& g) const {
    if (!fits(g)) throw DiagramOutOfRectangle("diagram " + to_string() + " does not fit");
}

bool YoungDiagram::contains(const Box& b) const { return b.j <= col_height(b.i); }

int YoungDiagram::col_height(int i) const {
    if (i < 1 || i > static_cast<int>(parts_.size())) return 0;
    return parts_[static_cast<size_t>(i - 1)];
}

int YoungDiagram::box_count() const {
    return std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::vector<Box> YoungDiagram::boxes() const {
    std::vector<Box> out;
    for (int i = 1; i <= static_cast<int>(parts_.size()); ++i)
        for (int j = 1; j <= col_height(i); ++j) out.emplace_back(i, j);
    return out;
}

std::vector<Box> YoungDiagram::complement_boxes(const GrassData& g) const {
    require_fits(g);
    std::vector<Box> out;
    for (int i = 1; i <= g.cols(); ++i)
        for (int j = col_height(i) + 1; j <= g.rows(); ++j) out.emplace_back(i, j);
    return out;
}

YoungDiagram YoungDiagram::complement(const GrassData& g) const {
    require_fits(g);
    std::vector<int> comp(static_cast<size_t>(g.cols()));
    for (int i = 1; i <= g.cols(); ++i)
        comp[static_cast<size_t>(i - 1)] = g.rows() - col_height(g.cols() + 1 - i);
    return YoungDiagram(std::move(comp));
}

bool YoungDiagram::subset_of(const YoungDiagram& o) const {
    for (int i = 1; i <= static_cast<int>(parts_.size()); ++i)
        if (col_height(i) > o.col_height(i)) return false;
    return true;
}

std::string YoungDiagram::to_string() const {
    if (parts_.empty()) return "[]";
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << ",";
        os << parts_[i];
    }
    os << "]";
    return os.str();
}

std::vector<int> boundary_heights(const YoungDiagram& d, const GrassData& g) {
    d.require_fits(g);
    std::vector<int> V(static_cast<size_t>(g.n + 1));
    for (int c = 0; c <= g.n; ++c) V[static_cast<size_t>(c)] = std::abs(c - g.k);
    for (const Box& b : d.boxes()) {
        int c = content(b, g);
        int top = b.i + b.j;
        int& v = V[static_cast<size_t>(c)];
        if (top > v) v = top;
    }
    return V;
}

Subset bij(const YoungDiagram& d, const GrassData& g) {
    std::vector<int> V = boundary_heights(d, g);
    std::vector<int> p;
    for (int m = 1; m <= g.n; ++m)
        if (V[static_cast<size_t>(m)] < V[static_cast<size_t>(m - 1)]) p.push_back(m);
    return Subset(std::move(p));
}

YoungDiagram bij_inverse(const Subset& p, const GrassData& g) {
    if (p.size() != g.k) throw Error("bij_inverse: subset size must be k");
    std::vector<int> V(static_cast<size_t>(g.n + 1));
    V[0] = g.k;
    for (int m = 1; m <= g.n; ++m) {
        int slope = p.contains(m) ? -1 : +1;
        V[static_cast<size_t>(m)] = V[static_cast<size_t>(m - 1)] + slope;
    }
    std::vector<int> parts(static_cast<size_t>(g.cols()), 0);
    for (int i = 1; i <= g.cols(); ++i) {
        int h = 0;
        for (int j = 1; j <= g.rows(); ++j) {
            int c = i - j + g.k;
            if (i + j <= V[static_cast<size_t>(c)]) h = j;
        }
        parts[static_cast<size_t>(i - 1)] = h;
    }
    return YoungDiagram(std::move(parts));
}

std::vector<Subset> enumerate_subsets(const GrassData& g) {
    std::vector<Subset> out;
    std::vector<int> cur(static_cast<size_t>(g.k));
    std::iota(cur.begin(), cur.end(), 1);
    while (true) {
        out.emplace_back(cur);
        int i = g.k - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == g.n - g.k + 1 + i) --i;
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < g.k; ++j)
            cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
    }
    return out;
}

std::vector<YoungDiagram> enumerate_diagrams(const GrassData& g) {
    std::vector<YoungDiagram> out;
    for (const Subset& p : enumerate_subsets(g)) out.push_back(bij_inverse(p, g));
    return out;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    return r;
}

BoxFunctions box_functions(const YoungDiagram& d, const Box& b, const GrassData& g) {
    if (b.i < 1 || b.i > g.cols() || b.j < 1 || b.j > g.rows())
        throw DiagramOutOfRectangle("box outside rectangle");
    BoxFunctions f;
    f.content = content(b, g);
    bool in = d.contains(b);
    f.rho = in ? b.i + b.j : -(b.i + b.j);
    f.beta1 = 0;
    if (in) {
        std::vector<int> V = boundary_heights(d, g);
        int c = f.content;
        int vm = V[static_cast<size_t>(c - 1)], v0 = V[static_cast<size_t>(c)],
            vp = V[static_cast<size_t>(c + 1)];
        if (v0 > vm && v0 > vp) f.beta1 = +1;
        else if (v0 < vm && v0 < vp) f.beta1 = -1;
    }
    f.beta2 = f.content < g.k ? +1 : (f.content > g.n - g.k ? -1 : 0);
    f.v = f.beta1 + f.beta2;
    return f;
}

bool Tree::has_vertex(const Box& b) const {
    return std::find(vertices.begin(), vertices.end(), b) != vertices.end();
}

std::vector<Box> Tree::subtree(const Box& b) const {
    if (!has_vertex(b)) throw BoxNotInTree("box not a vertex of the tree");
    std::vector<Box> out{b};
    // edges are root-outward, so descendants are reached by following heads
    size_t cursor = 0;
    while (cursor < out.size()) {
        Box cur = out[cursor++];
        for (const TreeEdge& e : edges)
            if (e.tail == cur) out.push_back(e.head);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int Tree::kappa() const {
    int wrong = 0;
    for (const TreeEdge& e : edges) {
        int di = e.head.i - e.tail.i, dj = e.head.j - e.tail.j;
        if (!bar) {
            if (di == -1 || dj == -1) ++wrong;
        } else {
            if (di == +1 || dj == +1) ++wrong;
        }
    }
    return wrong;
}

namespace {

bool adjacent(const Box& a, const Box& b) {
    return std::abs(a.i - b.i) + std::abs(a.j - b.j) == 1;
}

std::vector<TreeEdge> skeleton(const std::vector<Box>& bs) {
    std::vector<TreeEdge> es;
    for (size_t a = 0; a < bs.size(); ++a)
        for (size_t b = a + 1; b < bs.size(); ++b)
            if (adjacent(bs[a], bs[b])) es.push_back({bs[a], bs[b]});
    return es;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[static_cast<size_t>(x)] == x ? x : parent[static_cast<size_t>(x)] = find(parent[static_cast<size_t>(x)]); }
    bool unite(int a, int b) {
        a = find(a); b = find(b);
        if (a == b) return false;
        parent[static_cast<size_t>(a)] = b;
        return true;
    }
};

bool same_edge(const TreeEdge& a, const TreeEdge& b) {
    return (a.tail == b.tail && a.head == b.head) || (a.tail == b.head && a.head == b.tail);
}

Tree orient_from_root(const std::vector<Box>& bs, const std::vector<TreeEdge>& undirected,
                      const Box& root, bool bar) {
    Tree t;
    t.bar = bar;
    t.root = root;
    t.vertices = bs;
    std::sort(t.vertices.begin(), t.vertices.end());
    std::vector<Box> frontier{root};
    std::vector<bool> used(undirected.size(), false);
    std::vector<Box> seen{root};
    while (!frontier.empty()) {
        Box cur = frontier.back();
        frontier.pop_back();
        for (size_t e = 0; e < undirected.size(); ++e) {
            if (used[e]) continue;
            const TreeEdge& ed = undirected[e];
            Box other;
            if (ed.tail == cur) other = ed.head;
            else if (ed.head == cur) other = ed.tail;
            else continue;
            if (std::find(seen.begin(), seen.end(), other) != seen.end()) continue;
            used[e] = true;
            t.edges.push_back({cur, other});
            seen.push_back(other);
            frontier.push_back(other);
        }
    }
    if (seen.size() != bs.size())
        throw Error("tree construction produced a disconnected graph");
    return t;
}

} // namespace

std::vector<LShape> l_shapes(const std::vector<Box>& box_set, bool /*reflected*/,
                             const GrassData& g) {
    // the literal rule delta_1 = (i,j)-(i+1,j), delta_2 = (i+1,j)-(i+1,j+1)
    // applies to both sides; on the complement it is what makes the edge
    // swap of the involution well defined
    auto in_set = [&](const Box& b) {
        return std::find(box_set.begin(), box_set.end(), b) != box_set.end();
    };
    std::vector<LShape> out;
    for (const Box& b : box_set) {
        Box m(b.i + 1, b.j), e(b.i + 1, b.j + 1);
        if (in_set(m) && in_set(e)) out.push_back({{b, m}, {m, e}});
    }
    (void)g;
    return out;
}

std::vector<Tree> enumerate_trees(const YoungDiagram& d, bool bar, const GrassData& g) {
    d.require_fits(g);
    std::vector<Box> bs = bar ? d.complement_boxes(g) : d.boxes();
    Box root = bar ? Box(g.cols(), g.rows()) : Box(1, 1);
    std::vector<Tree> out;
    if (bs.empty()) {
        Tree t;
        t.bar = bar;
        out.push_back(t);
        return out;
    }
    std::vector<TreeEdge> skel = skeleton(bs);
    std::vector<LShape> ls = l_shapes(bs, bar, g);
    size_t m = ls.size();
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        std::vector<TreeEdge> kept;
        for (const TreeEdge& e : skel) {
            bool deleted = false;
            for (size_t s = 0; s < m; ++s) {
                const TreeEdge& del = (mask >> s) & 1 ? ls[s].e2 : ls[s].e1;
                if (same_edge(e, del)) { deleted = true; break; }
            }
            if (!deleted) kept.push_back(e);
        }
        if (kept.size() + 1 != bs.size())
            throw Error("L-shape deletion left wrong edge count");
        UnionFind uf(bs.size());
        auto idx = [&](const Box& b) {
            return static_cast<int>(std::find(bs.begin(), bs.end(), b) - bs.begin());
        };
        bool acyclic = true;
        for (const TreeEdge& e : kept)
            if (!uf.unite(idx(e.tail), idx(e.head))) { acyclic = false; break; }
        if (!acyclic) throw Error("L-shape deletion left a cycle");
        out.push_back(orient_from_root(bs, kept, root, bar));
    }
    return out;
}

bool involution_admissible(const Tree& tbar, const Box& b, const YoungDiagram& lambda,
                           const GrassData& g) {
    if (!tbar.bar) return false;
    if (!tbar.has_vertex(b)) return false;
    if (b.j == g.rows()) return false;  // upper boundary U
    // the swap needs the full 2x2 square (left, b, above-left, above) inside
    // the complement, i.e. the box to the left of b must not be in lambda
    Box left(b.i - 1, b.j);
    if (left.i < 1 || lambda.contains(left)) return false;
    // incoming edge must come from the box above or to the left, and the
    // replacement parent must not sit inside the subtree hanging off b
    for (const TreeEdge& e : tbar.edges) {
        if (e.head == b) {
            Box up(b.i, b.j + 1);
            Box other;
            if (e.tail == up) other = left;
            else if (e.tail == left) other = up;
            else return false;
            std::vector<Box> sub = tbar.subtree(b);
            return std::find(sub.begin(), sub.end(), other) == sub.end();
        }
    }
    return false;
}

Tree involution(const Tree& tbar, const Box& b, const YoungDiagram& lambda,
                const GrassData& g) {
    if (!involution_admissible(tbar, b, lambda, g))
        throw InvolutionUndefined("involution undefined at this box");
    Box up(b.i, b.j + 1), left(b.i - 1, b.j);
    Tree result = tbar;
    for (TreeEdge& e : result.edges) {
        if (e.head == b) {
            e.tail = (e.tail == up) ? left : up;
            break;
        }
    }
    // reorient from the root so the canonical form is restored
    std::vector<TreeEdge> undirected = result.edges;
    return orient_from_root(result.vertices, undirected, result.root, true);
}

} // namespace stabenv
