#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "phi4/spin.hpp"

namespace phi4 {

// Partition xi of the exterior boundary (class id per exterior vertex) and
// boundary values b.
struct BoundaryCondition {
    std::vector<int> xi;
    std::vector<double> b;

    static BoundaryCondition free(const Region& r);
    static BoundaryCondition wired_plus(const Region& r, double c0 = 1.0);

    bool is_free() const;
    void validate(const Region& r) const;
};

inline double edge_prob(double beta, double ax, double ay) { return -std::expm1(-2.0 * beta * ax * ay); }
inline double ghost_prob(double beta, double hx, double ax) { return -std::expm1(-2.0 * beta * hx * ax); }
inline double sprinkle_prob(double beta, double ax, double ay)
{
    double e = std::exp(-2.0 * beta * ax * ay);
    return (1.0 - e) / (1.0 + e);
}

enum class GhostMode { single, two };

// Random-cluster measure on Lambda[h] with boundary condition (xi, b).
// Edge order of omega: internal edges, boundary edges, then ghost edges of
// the vertices with h != 0 in vertex order.
class RCModel {
public:
    RCModel(std::shared_ptr<const Region> region, ModelParams params, BoundaryCondition bc);

    const SpinModel& spin() const { return spin_; }
    const Region& region() const { return spin_.region(); }
    const BoundaryCondition& bc() const { return bc_; }
    double beta() const { return spin_.beta(); }

    std::size_t internal_edges() const { return region().edges().size(); }
    std::size_t boundary_edges() const { return region().boundary_edges().size(); }
    std::size_t ghost_edges() const { return ghosts_.size(); }
    std::size_t edge_count() const { return internal_edges() + boundary_edges() + ghost_edges(); }
    // Vertex carrying the k-th ghost edge.
    std::uint32_t ghost_vertex(std::size_t k) const { return ghosts_[k]; }
    // Index of the ghost edge of x, or -1.
    std::int64_t ghost_edge_of(std::size_t x) const { return ghost_index_[x]; }

    // Closed vertex set plus ghosts.
    std::size_t vertex_count(GhostMode mode = GhostMode::single) const
    {
        return region().closed_size() + (mode == GhostMode::two ? 2 : 1);
    }
    std::uint32_t ghost() const { return static_cast<std::uint32_t>(region().closed_size()); }

private:
    SpinModel spin_;
    BoundaryCondition bc_;
    std::vector<std::uint32_t> ghosts_;
    std::vector<std::int64_t> ghost_index_;
};

struct RCState {
    std::vector<std::uint8_t> omega;
    std::vector<double> a;  // closed vertex set; equals b on the exterior
};

struct Clusters {
    std::vector<std::uint32_t> label;  // smallest member index in the order Lambda, exterior, ghost(s)
    std::size_t k = 0;
};

// Two-ghost mode: ghost edges of vertices with side +1 attach to the first
// ghost, side -1 to the second; k is counted with the two ghosts identified.
Clusters cluster_labels(const RCModel& m, const std::vector<std::uint8_t>& omega,
                        GhostMode mode = GhostMode::single, const std::vector<int>* sides = nullptr);

RCState es_spin_to_rc(const RCModel& m, const SpinConfig& phi, Rng& rng);
SpinConfig es_rc_to_spin(const RCModel& m, const RCState& s, Rng& rng);

// es_rc_to_spin, one heat-bath sweep, es_spin_to_rc.
void rc_sweep(const RCModel& m, RCState& s, TiltedSampler& sampler, Rng& rng,
              Schedule schedule = Schedule::sequential);
void rc_sweep(const RCModel& m, RCState& s, Rng& rng, Schedule schedule = Schedule::sequential);

// Same chain, also returning the spin configuration drawn in the middle.
void rc_sweep(const RCModel& m, RCState& s, SpinConfig& phi, TiltedSampler& sampler, Rng& rng,
              Schedule schedule = Schedule::sequential);

// Open each closed internal edge independently with probability eps.
void bernoulli_sprinkle(const RCModel& m, std::vector<std::uint8_t>& omega, double eps, Rng& rng);
// Per-edge rates r(beta_hi - beta_lo, a).
void bernoulli_sprinkle(const RCModel& m, std::vector<std::uint8_t>& omega, const std::vector<double>& a,
                        double beta_lo, double beta_hi, Rng& rng);

}  // namespace phi4
