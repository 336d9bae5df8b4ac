#include "cpsa/structural.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace cpsa {

PatternMatrix PatternMatrix::zero(Index r, Index c) {
    PatternMatrix m;
    m.rows = r;
    m.cols = c;
    m.entries.assign(static_cast<size_t>(r * c), PatternEntry::zero());
    return m;
}

Index PatternMatrix::free_count() const {
    Index d = 0;
    for (const auto& e : entries)
        if (e.free) ++d;
    return d;
}

Index StructuredSystem::d() const {
    return E.free_count() + A.free_count() + B.free_count() + C.free_count() + D.free_count();
}

namespace {

PatternMatrix pattern_of(const Matrix& M, double tol) {
    PatternMatrix p = PatternMatrix::zero(M.rows(), M.cols());
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j)
            if (std::abs(M(i, j)) > tol) p.at(i, j) = PatternEntry::free_default();
    return p;
}

}  // namespace

StructuredSystem StructuredSystem::from_system(const DescriptorSystem& sys, double tol) {
    StructuredSystem s;
    s.E = pattern_of(sys.E, tol);
    s.A = pattern_of(sys.A, tol);
    s.B = pattern_of(sys.B, tol);
    s.C = pattern_of(sys.C, tol);
    s.D = pattern_of(sys.D, tol);
    return s;
}

SystemDigraph build_digraph(const StructuredSystem& s) {
    SystemDigraph g;
    g.m = s.m();
    g.n = s.n();
    g.p = s.p();
    g.out.assign(static_cast<size_t>(g.vertex_count()), {});

    auto add_edge = [&](int from, int to) {
        auto& lst = g.out[static_cast<size_t>(from)];
        if (std::find(lst.begin(), lst.end(), to) == lst.end()) lst.push_back(to);
    };

    for (Index i = 0; i < g.n; ++i)
        for (Index j = 0; j < g.n; ++j)
            if (s.E.is_free(i, j) || s.A.is_free(i, j))
                add_edge(g.state_vertex(j), g.state_vertex(i));
    for (Index i = 0; i < g.n; ++i)
        for (Index j = 0; j < g.m; ++j)
            if (s.B.is_free(i, j)) add_edge(g.input_vertex(j), g.state_vertex(i));
    for (Index i = 0; i < g.p; ++i)
        for (Index j = 0; j < g.n; ++j)
            if (s.C.is_free(i, j)) add_edge(g.state_vertex(j), g.output_vertex(i));
    for (Index i = 0; i < g.p; ++i)
        for (Index j = 0; j < g.m; ++j)
            if (s.D.is_free(i, j)) add_edge(g.input_vertex(j), g.output_vertex(i));

    for (auto& lst : g.out) std::sort(lst.begin(), lst.end());
    return g;
}

std::string SystemDigraph::vertex_name(int v) const {
    std::ostringstream os;
    if (v < m)
        os << "u" << (v + 1);
    else if (v < m + n)
        os << "x" << (v - m + 1);
    else
        os << "y" << (v - m - n + 1);
    return os.str();
}

namespace {

/// Unit-capacity Dinic on the vertex-split graph. Vertex v becomes arc
/// v_in(2v) -> v_out(2v+1); graph edges are out -> in. Deterministic
/// adjacency ordering keeps witnesses reproducible.
class DinicUnit {
public:
    explicit DinicUnit(int node_count) : head_(static_cast<size_t>(node_count), -1) {}

    int add_edge(int from, int to, int cap) {
        edges_.push_back({to, head_[static_cast<size_t>(from)], cap});
        head_[static_cast<size_t>(from)] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({from, head_[static_cast<size_t>(to)], 0});
        head_[static_cast<size_t>(to)] = static_cast<int>(edges_.size()) - 1;
        return static_cast<int>(edges_.size()) - 2;
    }

    int run(int s, int t) {
        int flow = 0;
        while (bfs(s, t)) {
            iter_ = head_;
            while (int pushed = dfs(s, t, 1)) flow += pushed;
        }
        return flow;
    }

    // Flow through a forward edge equals the residual capacity accumulated on
    // its twin reverse edge.
    bool edge_has_flow(int id) const { return edges_[static_cast<size_t>(id ^ 1)].cap > 0; }

    std::vector<bool> reachable_from(int s) const {
        std::vector<bool> vis(head_.size(), false);
        std::queue<int> q;
        q.push(s);
        vis[static_cast<size_t>(s)] = true;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e = head_[static_cast<size_t>(v)]; e != -1; e = edges_[static_cast<size_t>(e)].next) {
                const auto& ed = edges_[static_cast<size_t>(e)];
                if (ed.cap > 0 && !vis[static_cast<size_t>(ed.to)]) {
                    vis[static_cast<size_t>(ed.to)] = true;
                    q.push(ed.to);
                }
            }
        }
        return vis;
    }

    // Outgoing forward edges of v carrying flow, in insertion order.
    std::vector<int> flow_successors(int v) const {
        std::vector<int> succ;
        for (int e = head_[static_cast<size_t>(v)]; e != -1; e = edges_[static_cast<size_t>(e)].next)
            if (e % 2 == 0 && edge_has_flow(e)) succ.push_back(edges_[static_cast<size_t>(e)].to);
        std::reverse(succ.begin(), succ.end());  // restore insertion order
        return succ;
    }

private:
    struct Edge {
        int to;
        int next;
        int cap;
    };

    bool bfs(int s, int t) {
        level_.assign(head_.size(), -1);
        std::queue<int> q;
        q.push(s);
        level_[static_cast<size_t>(s)] = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e = head_[static_cast<size_t>(v)]; e != -1; e = edges_[static_cast<size_t>(e)].next) {
                const auto& ed = edges_[static_cast<size_t>(e)];
                if (ed.cap > 0 && level_[static_cast<size_t>(ed.to)] < 0) {
                    level_[static_cast<size_t>(ed.to)] = level_[static_cast<size_t>(v)] + 1;
                    q.push(ed.to);
                }
            }
        }
        return level_[static_cast<size_t>(t)] >= 0;
    }

    int dfs(int v, int t, int f) {
        if (v == t) return f;
        for (int& e = iter_[static_cast<size_t>(v)]; e != -1; e = edges_[static_cast<size_t>(e)].next) {
            auto& ed = edges_[static_cast<size_t>(e)];
            if (ed.cap > 0 && level_[static_cast<size_t>(ed.to)] == level_[static_cast<size_t>(v)] + 1) {
                int d = dfs(ed.to, t, std::min(f, ed.cap));
                if (d > 0) {
                    ed.cap -= d;
                    edges_[static_cast<size_t>(e ^ 1)].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    std::vector<Edge> edges_;
    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace

LinkingResult max_linking(const SystemDigraph& g, const std::vector<int>& from,
                          const std::vector<int>& to) {
    const int V = g.vertex_count();
    auto v_in = [](int v) { return 2 * v; };
    auto v_out = [](int v) { return 2 * v + 1; };
    const int S = 2 * V;
    const int T = 2 * V + 1;
    DinicUnit flow(2 * V + 2);

    // Only the split arcs carry finite capacity, so every minimum cut is a
    // set of vertices.
    const int kInf = V + 2;
    std::vector<int> split_edges(static_cast<size_t>(V));
    for (int v = 0; v < V; ++v) split_edges[static_cast<size_t>(v)] = flow.add_edge(v_in(v), v_out(v), 1);
    for (int v = 0; v < V; ++v)
        for (int w : g.out[static_cast<size_t>(v)]) flow.add_edge(v_out(v), v_in(w), kInf);
    std::vector<int> source_edges;
    for (int u : from) source_edges.push_back(flow.add_edge(S, v_in(u), kInf));
    for (int y : to) flow.add_edge(v_out(y), T, kInf);

    LinkingResult res;
    res.size = flow.run(S, T);

    // Witness paths: follow saturated forward edges from each used source.
    for (size_t i = 0; i < from.size(); ++i) {
        if (!flow.edge_has_flow(source_edges[i])) continue;
        std::vector<int> path;
        std::vector<bool> seen(static_cast<size_t>(2 * V + 2), false);
        int node = v_in(from[i]);
        bool complete = false;
        while (!seen[static_cast<size_t>(node)]) {
            seen[static_cast<size_t>(node)] = true;
            if (node % 2 == 0) path.push_back(node / 2);
            auto succ = flow.flow_successors(node);
            if (succ.empty()) break;
            node = succ.front();
            if (node == T) {
                complete = true;
                break;
            }
        }
        if (complete) res.witness.paths.push_back(std::move(path));
    }

    if (res.size < static_cast<int>(from.size())) {
        // Min-cut certificate: saturated split arcs crossing the residual
        // reachable boundary correspond to cut vertices.
        std::vector<bool> vis = flow.reachable_from(S);
        for (int v = 0; v < V; ++v)
            if (vis[static_cast<size_t>(v_in(v))] && !vis[static_cast<size_t>(v_out(v))])
                res.cut.push_back(v);
    }
    return res;
}

LinkingResult max_linking(const SystemDigraph& g) {
    std::vector<int> from, to;
    for (Index j = 0; j < g.m; ++j) from.push_back(g.input_vertex(j));
    for (Index i = 0; i < g.p; ++i) to.push_back(g.output_vertex(i));
    return max_linking(g, from, to);
}

int max_linking_size(const SystemDigraph& g) { return max_linking(g).size; }

bool structurally_nondegenerate(const PatternMatrix& u) {
    if (u.rows != u.cols) throw DimensionError("nondegeneracy needs a square pattern");
    const int N = static_cast<int>(u.rows);
    // Hopcroft-Karp style augmentation (plain Kuhn is plenty at this scale).
    std::vector<int> match_col(static_cast<size_t>(N), -1);
    std::vector<bool> used;
    std::function<bool(int)> augment = [&](int row) {
        for (int j = 0; j < N; ++j) {
            if (!u.is_free(row, j) || used[static_cast<size_t>(j)]) continue;
            used[static_cast<size_t>(j)] = true;
            if (match_col[static_cast<size_t>(j)] < 0 || augment(match_col[static_cast<size_t>(j)])) {
                match_col[static_cast<size_t>(j)] = row;
                return true;
            }
        }
        return false;
    };
    int matched = 0;
    for (int i = 0; i < N; ++i) {
        used.assign(static_cast<size_t>(N), false);
        if (augment(i)) ++matched;
    }
    return matched == N;
}

bool structurally_nondegenerate(const StructuredSystem& s) {
    if (s.E.rows != s.A.rows || s.E.cols != s.A.cols)
        throw DimensionError("E and A patterns must agree");
    PatternMatrix u = PatternMatrix::zero(s.E.rows, s.E.cols);
    for (Index i = 0; i < u.rows; ++i)
        for (Index j = 0; j < u.cols; ++j)
            if (s.E.is_free(i, j) || s.A.is_free(i, j)) u.at(i, j) = PatternEntry::free_default();
    return structurally_nondegenerate(u);
}

LeftInvertibilityResult structurally_left_invertible(const StructuredSystem& s) {
    if (!structurally_nondegenerate(s))
        throw DegeneratePencilError("s[E] - [A] is structurally degenerate");
    SystemDigraph g = build_digraph(s);
    LinkingResult lr = max_linking(g);
    LeftInvertibilityResult res;
    res.max_linking = lr.size;
    res.left_invertible = lr.size == static_cast<int>(s.m());
    if (res.left_invertible)
        res.witness = lr.witness;
    else
        res.cut = lr.cut;
    return res;
}

namespace {

Matrix sample_pattern(const PatternMatrix& p, Rng& rng) {
    Matrix M = Matrix::Zero(p.rows, p.cols);
    for (Index i = 0; i < p.rows; ++i)
        for (Index j = 0; j < p.cols; ++j) {
            const PatternEntry& e = p.at(i, j);
            if (!e.free) continue;
            M(i, j) = e.lo == e.hi ? e.lo : rng.uniform(e.lo, e.hi);
        }
    return M;
}

}  // namespace

DescriptorSystem sample_realization(const StructuredSystem& s, std::uint64_t seed) {
    Rng rng(seed);
    Matrix E = sample_pattern(s.E, rng);
    Matrix A = sample_pattern(s.A, rng);
    Matrix B = sample_pattern(s.B, rng);
    Matrix C = sample_pattern(s.C, rng);
    Matrix D = sample_pattern(s.D, rng);
    for (const DerivedTie& t : s.ties) {
        Matrix* M = nullptr;
        switch (t.matrix) {
            case 'E': M = &E; break;
            case 'A': M = &A; break;
            case 'B': M = &B; break;
            case 'C': M = &C; break;
            case 'D': M = &D; break;
            default: throw DimensionError("derived tie matrix tag must be one of E A B C D");
        }
        double acc = 0.0;
        for (auto [i, j] : t.sources) acc += (*M)(i, j);
        (*M)(t.ti, t.tj) = t.scale * acc;
    }
    return DescriptorSystem::make(E, A, B, C, D);
}

GenericCheckResult verify_generic(const StructuredSystem& s,
                                  const std::function<bool(const DescriptorSystem&)>& property,
                                  int trials, std::uint64_t seed) {
    GenericCheckResult res;
    for (int t = 0; t < trials; ++t)
        res.sample_results.push_back(property(sample_realization(s, seed + static_cast<std::uint64_t>(t))));
    const int passes = static_cast<int>(std::count(res.sample_results.begin(), res.sample_results.end(), true));
    if (passes == trials)
        res.verdict = GenericVerdict::HoldsGenerically;
    else if (passes == 0)
        res.verdict = GenericVerdict::FailsOnAllSamples;
    else
        res.verdict = GenericVerdict::Mixed;
    return res;
}

}  // namespace cpsa
