#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "phi4/randomcluster.hpp"

namespace phi4::oracle {

// Small weighted graph: n interior vertices, internal edges, ghost field h,
// exterior vertices with values b and partition classes xi, boundary edges
// (u interior, v exterior index).
struct Graph {
    std::size_t n = 0;
    std::vector<Edge> edges;
    std::vector<double> J;
    std::vector<double> h;
    std::vector<double> b;
    std::vector<int> xi;
    std::vector<Edge> bedges;
    std::vector<double> bJ;

    static Graph make(std::size_t n, std::vector<Edge> edges, std::vector<double> h = {});
    static Graph from_region(const Region& r, const ModelParams& p, const BoundaryCondition& bc);

    std::size_t exterior() const { return b.size(); }
    void validate() const;
};

struct Params {
    double beta = 0.0;
    SingleSite site;
};

struct Limits {
    std::size_t max_vertices = 4;
    std::size_t max_live_edges = 8;
};

// Thrown before any computation when a request exceeds the oracle caps.
struct SizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void check_spin_size(const Graph& g, const Limits& lim = {});
void check_rc_size(const Graph& g, const Limits& lim = {});

using Observable = std::function<double(std::span<const double>)>;

// Spin expectation <F> by tensor Gauss-Legendre quadrature; exterior values
// enter as boundary spins sigma_y b_y summed over xi-admissible signs.
double exact_spin_expectation(const Graph& g, const Params& p, const Observable& f);
std::vector<double> exact_spin_expectations(const Graph& g, const Params& p, const std::vector<Observable>& fs);

// Live edges: internal edges, boundary edges with b > 0, ghost edges with h != 0.
struct LiveEdge {
    std::uint32_t u, v;  // vertex ids in the order interior, exterior, ghost
    enum Kind { internal, boundary, ghost } kind;
    std::size_t source;  // index in edges / bedges, or vertex for ghost edges
};
std::vector<LiveEdge> live_edges(const Graph& g);

// Random-cluster configuration on live edges, with cluster labels.
struct OmegaView {
    std::uint32_t mask;
    std::span<const std::uint32_t> label;
    std::uint32_t ghost;

    bool open(std::size_t live) const { return (mask >> live) & 1u; }
    bool connected(std::uint32_t x, std::uint32_t y) const { return label[x] == label[y]; }
    bool to_ghost(std::uint32_t x) const { return label[x] == label[ghost]; }
};

// One term pred(omega) * weight(a) * coef; an event is a sum of terms.
struct Term {
    std::function<bool(const OmegaView&)> pred;
    std::function<double(std::span<const double>)> weight;  // a on interior; empty means 1
    double coef = 1.0;
};
using Event = std::vector<Term>;

double exact_rc_probability(const Graph& g, const Params& p, const Event& ev);
std::vector<double> exact_rc_expectations(const Graph& g, const Params& p, const std::vector<Event>& evs);

// Law of omega on the live edges (bit e of the index is live edge e).
std::vector<double> exact_edge_law(const Graph& g, const Params& p);

// Z^{(xi,b)} with the law of |phi| as reference measure.
double rc_partition(const Graph& g, const Params& p);
// Integral of Z^{Ising,xi}(a) against the law of |phi| on the interior.
double phi4_partition(const Graph& g, const Params& p);

// Z^{Ising,xi}(a) and (1/2) bold-Z^xi(a) prod sqrt(1-p), a on the interior.
double ising_partition(const Graph& g, const Params& p, std::span<const double> a);
double fk_partition_side(const Graph& g, const Params& p, std::span<const double> a);

struct PartitionReport {
    double z_rc = 0, z_phi4 = 0, ratio = 0, ratio_gap = 0;
    double z_ising = 0, z_fk = 0, fk_gap = 0;  // fixed-a identity, relative gap
};
PartitionReport partition_identities(const Graph& g, const Params& p, std::span<const double> a_fixed);

struct CurrentReport {
    double value = 0, reference = 0, gap = 0, tail_bound = 0;
    std::size_t currents = 0;
};

// Truncated current expansion of <phi_A>; A gives exponents on the interior,
// the ghost exponent completes the parity.
CurrentReport current_expansion_check(const Graph& g, const Params& p, const std::vector<int>& A, int nmax);

// E[2^{sum_{e in subset} n_e}] against <prod_{e in subset} exp(J_e phi_e)>;
// subset indexes internal edges then ghost edges (vertex order of h != 0).
CurrentReport current_moment_check(const Graph& g, const Params& p, const std::vector<std::size_t>& subset, int nmax);

struct Domination {
    bool holds = true;
    std::vector<std::uint32_t> witness;  // violating up-set, if any
    double margin = 0.0;                  // min over up-sets of hi(U) - lo(U)
};

Domination stochastic_domination_check(const std::vector<double>& hi, const std::vector<double>& lo);

// omega union Bernoulli(eps) on every edge.
std::vector<double> sprinkled_law(const std::vector<double>& law, double eps);

}  // namespace phi4::oracle
