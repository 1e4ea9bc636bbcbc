#include "routepe/route_graph.hpp"

#include <algorithm>
#include <queue>

namespace routepe {

RouteGraph route_graph(const Instance& inst, const Solution& sol) {
    RouteGraph g;
    g.n = inst.num_nodes();
    g.adj.assign(g.n, {});
    g.present.assign(g.n, 0);
    g.present[0] = 1;
    for (const Route& r : sol.routes) {
        for (int i = 1; i < r.length(); ++i) {
            const int a = r.nodes[i - 1];
            const int b = r.nodes[i];
            if (a == b) continue;
            g.adj[a].push_back(b);
            g.adj[b].push_back(a);
            g.present[a] = 1;
            g.present[b] = 1;
        }
    }
    for (auto& nbrs : g.adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return g;
}

std::vector<int> bfs_hops(const RouteGraph& g, int src) {
    std::vector<int> hops(g.n, -1);
    if (src < 0 || src >= g.n || !g.present[src]) return hops;
    std::queue<int> q;
    hops[src] = 0;
    q.push(src);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : g.adj[u]) {
            if (hops[v] < 0) {
                hops[v] = hops[u] + 1;
                q.push(v);
            }
        }
    }
    return hops;
}

}  // namespace routepe
