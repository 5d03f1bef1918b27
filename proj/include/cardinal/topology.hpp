#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cardinal/rng.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

enum class TopologyKind : std::uint8_t {
    ErdosRenyi,
    Ring,
    Complete,
    ExplicitEdgeList,
};

struct TopologySpec {
    TopologyKind kind = TopologyKind::ErdosRenyi;
    std::uint32_t host_count = 0;
    double mean_degree = 8.0;                            // ErdosRenyi
    std::uint32_t ring_k = 2;                            // Ring
    std::vector<std::pair<HostId, HostId>> edges;        // ExplicitEdgeList
};

// Undirected topology; neighbor sets sorted ascending for determinism.
// Doubles as worm target set (TopologyScan) and peer-polling candidate set.
class Topology {
public:
    Topology() = default;
    explicit Topology(std::uint32_t host_count) : adjacency_(host_count) {}

    std::uint32_t host_count() const {
        return static_cast<std::uint32_t>(adjacency_.size());
    }

    const std::vector<HostId>& neighbors(HostId h) const {
        return adjacency_.at(h);
    }

    std::uint32_t degree(HostId h) const {
        return static_cast<std::uint32_t>(adjacency_.at(h).size());
    }

    void add_edge(HostId a, HostId b) {
        if (a == b) throw std::invalid_argument("topology: self-loop rejected");
        if (a >= host_count() || b >= host_count())
            throw std::invalid_argument("topology: host id out of range");
        insert_sorted(adjacency_[a], b);
        insert_sorted(adjacency_[b], a);
    }

    std::vector<HostId> isolated_hosts() const {
        std::vector<HostId> out;
        for (HostId h = 0; h < host_count(); ++h)
            if (adjacency_[h].empty()) out.push_back(h);
        return out;
    }

private:
    static void insert_sorted(std::vector<HostId>& v, HostId x) {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x) v.insert(it, x);
    }

    std::vector<std::vector<HostId>> adjacency_;
};

inline Topology build_topology(const TopologySpec& spec, std::uint64_t seed) {
    if (spec.host_count == 0)
        throw std::invalid_argument("topology.hosts: must be >= 1");
    Topology topo(spec.host_count);
    const std::uint32_t n = spec.host_count;
    switch (spec.kind) {
        case TopologyKind::Complete: {
            for (HostId i = 0; i < n; ++i)
                for (HostId j = i + 1; j < n; ++j) topo.add_edge(i, j);
            break;
        }
        case TopologyKind::Ring: {
            const std::uint32_t k = std::min(spec.ring_k, n / 2);
            for (HostId i = 0; i < n; ++i)
                for (std::uint32_t d = 1; d <= k; ++d) {
                    const HostId j = (i + d) % n;
                    if (i != j) topo.add_edge(i, j);
                }
            break;
        }
        case TopologyKind::ErdosRenyi: {
            // Each pair independently with p = mean_degree / (n - 1),
            // consumed in fixed (i, j) order from one seeded stream.
            if (n == 1) break;
            const double p =
                std::min(1.0, spec.mean_degree / static_cast<double>(n - 1));
            Substream rng(seed, 0, StreamPurpose::Topology, 0);
            for (HostId i = 0; i < n; ++i)
                for (HostId j = i + 1; j < n; ++j)
                    if (rng.next_unit() < p) topo.add_edge(i, j);
            break;
        }
        case TopologyKind::ExplicitEdgeList: {
            for (const auto& [a, b] : spec.edges) topo.add_edge(a, b);
            break;
        }
    }
    return topo;
}

} // namespace cardinal
