#pragma once

#include "cpsa/descriptor.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cpsa {

/// One entry of a structure matrix: fixed zero, or a free parameter with a
/// sampling interval (lo == hi pins the value, e.g. the 1 in an integrator
/// chain). Sign conventions live in the interval.
struct PatternEntry {
    bool free = false;
    double lo = 0.1;
    double hi = 1.0;

    static PatternEntry zero() { return {}; }
    static PatternEntry free_default() { return {true, 0.1, 1.0}; }
    static PatternEntry ranged(double lo, double hi) { return {true, lo, hi}; }
    static PatternEntry pinned(double v) { return {true, v, v}; }
};

struct PatternMatrix {
    Index rows = 0, cols = 0;
    std::vector<PatternEntry> entries;  // row-major

    static PatternMatrix zero(Index r, Index c);
    PatternEntry& at(Index i, Index j) { return entries[static_cast<size_t>(i * cols + j)]; }
    const PatternEntry& at(Index i, Index j) const {
        return entries[static_cast<size_t>(i * cols + j)];
    }
    bool is_free(Index i, Index j) const { return at(i, j).free; }
    Index free_count() const;
};

/// Linear equality tie evaluated after sampling: entry (ti, tj) of `matrix`
/// is set to scale * sum of the listed source entries of the same matrix.
/// Encodes Laplacian row sums without a general polytope sampler.
struct DerivedTie {
    char matrix = 'A';  // 'E', 'A', 'B', 'C', 'D'
    Index ti = 0, tj = 0;
    std::vector<std::pair<Index, Index>> sources;
    double scale = -1.0;
};

/// Sparsity-pattern system ([E],[A],[B],[C],[D]) with per-entry polytope
/// ranges.
struct StructuredSystem {
    PatternMatrix E, A, B, C, D;
    std::vector<DerivedTie> ties;

    Index n() const { return A.rows; }
    Index m() const { return B.cols; }
    Index p() const { return C.rows; }
    Index d() const;  // number of free entries

    static StructuredSystem from_system(const DescriptorSystem& sys, double tol = 0.0);
};

/// Input-state-output digraph. Vertex ids: inputs 0..m-1, states m..m+n-1,
/// outputs m+n..m+n+p-1. Output vertices have no outgoing edges.
struct SystemDigraph {
    Index m = 0, n = 0, p = 0;
    std::vector<std::vector<int>> out;  // adjacency, deterministic order

    int input_vertex(Index j) const { return static_cast<int>(j); }
    int state_vertex(Index i) const { return static_cast<int>(m + i); }
    int output_vertex(Index i) const { return static_cast<int>(m + n + i); }
    int vertex_count() const { return static_cast<int>(m + n + p); }
    std::string vertex_name(int v) const;
};

SystemDigraph build_digraph(const StructuredSystem& s);

/// Mutually vertex-disjoint simple input-to-output paths.
struct Linking {
    std::vector<std::vector<int>> paths;
    int size() const { return static_cast<int>(paths.size()); }
};

/// Maximum linking via vertex splitting + unit-capacity max flow; the witness
/// linking always has `size` paths. When the maximum falls short of the
/// source count, `cut` is a vertex cut certificate of the same size.
struct LinkingResult {
    int size = 0;
    Linking witness;
    std::vector<int> cut;
};

LinkingResult max_linking(const SystemDigraph& g, const std::vector<int>& from,
                          const std::vector<int>& to);
LinkingResult max_linking(const SystemDigraph& g);  // all inputs to all outputs
int max_linking_size(const SystemDigraph& g);

/// s[E] - [A] is structurally nondegenerate iff the union sparsity pattern
/// admits a perfect bipartite matching (a cycle family covering all vertices).
bool structurally_nondegenerate(const StructuredSystem& s);
bool structurally_nondegenerate(const PatternMatrix& union_pattern);

struct LeftInvertibilityResult {
    bool left_invertible = false;
    Linking witness;        // when left invertible
    std::vector<int> cut;   // vertex cut certificate otherwise
    int max_linking = 0;
};

/// Theorem hypothesis s[E]-[A] nondegenerate is checked first
/// (DegeneratePencilError when it fails); then left-invertibility holds iff a
/// linking of size |U| exists.
LeftInvertibilityResult structurally_left_invertible(const StructuredSystem& s);

/// Fix free entries uniformly at random in their intervals, then apply ties.
DescriptorSystem sample_realization(const StructuredSystem& s, std::uint64_t seed);

enum class GenericVerdict { HoldsGenerically, FailsOnAllSamples, Mixed };

struct GenericCheckResult {
    GenericVerdict verdict = GenericVerdict::FailsOnAllSamples;
    std::vector<bool> sample_results;
};

/// Evaluate a numeric property on sampled realizations. One passing sample
/// certifies the generic property on the polytope; disagreeing samples are
/// surfaced as Mixed instead of being decided.
GenericCheckResult verify_generic(const StructuredSystem& s,
                                  const std::function<bool(const DescriptorSystem&)>& property,
                                  int trials = 3, std::uint64_t seed = 1);

}  // namespace cpsa
