#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "phi4/randomcluster.hpp"

namespace phi4 {

inline constexpr std::uint32_t no_label = std::numeric_limits<std::uint32_t>::max();

// Clusters of the open internal edges of omega (indexed like region edges;
// extra trailing entries are ignored) restricted to the vertices of Lambda
// with inside[v] != 0. Outside vertices get no_label.
std::vector<std::uint32_t> restricted_labels(const Region& r, const std::vector<std::uint8_t>& omega,
                                             const std::vector<std::uint8_t>& inside);

// Left-right crossing of [-m,m] x [-n,n]^{d-1} along axis (other axes use n).
bool crossing(const Region& r, const std::vector<std::uint8_t>& omega, int m, int n, int axis = 0);

// Does a cluster of omega restricted to the annulus r_in < |x| <= r_out touch
// both |x| = r_in + 1 and |x| = r_out? Labels of the restricted clusters
// and the crossing ones are returned through the optional outputs.
struct AnnulusClusters {
    std::vector<std::uint32_t> label;
    std::vector<std::uint32_t> crossing;  // labels of crossing clusters
};
AnnulusClusters annulus_clusters(const Region& r, const std::vector<std::uint8_t>& omega, int r_in, int r_out);

// U(L): crossing of Lambda_8L \ Lambda_L, and every cluster crossing
// Lambda_4L \ Lambda_2L lies in one cluster of the big annulus.
bool local_uniqueness(const Region& r, const std::vector<std::uint8_t>& omega, int L);

// Unique(L) with sprinkling gamma; needs 8 | L.
bool unique_sprinkled(const Region& r, const std::vector<std::uint8_t>& omega, const std::vector<std::uint8_t>& gamma,
                      int L);

// Two-ghost graph: ghost edges of side +1 vertices go to the top ghost, side
// -1 to the bottom one. True iff the two ghosts are in distinct clusters.
bool disconnection(const RCModel& m, const std::vector<std::uint8_t>& omega, const std::vector<int>& sides);

struct ClusterStats {
    std::vector<std::uint32_t> roots;  // cluster labels, increasing
    std::vector<std::size_t> sizes;    // size per root
    std::uint32_t max_label = no_label;
    std::size_t max_size = 0;
    std::size_t second_size = 0;
    std::size_t restricted_sum = 0;   // clusters other than the largest with size >= N
    std::vector<std::uint8_t> large;  // per vertex: cluster size >= K
};

// labels over Lambda only (first n entries are used).
ClusterStats cluster_stats(std::span<const std::uint32_t> labels, std::size_t N, std::size_t K);

// Site percolation on Lambda_m in dimension d: a cluster with at least 3/4 of
// the sites, and complement components of size >= M totalling at most eps|Lambda_m|.
bool site_percolation_surface_event(double p, int m, int M, double eps, std::mt19937_64& rng, int d = 2);
bool site_percolation_surface_event(const Region& box, const std::vector<std::uint8_t>& open, int M, double eps);

}  // namespace phi4
