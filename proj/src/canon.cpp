#include "trifree/canon.hpp"

#include <algorithm>
#include <vector>

namespace trifree {

namespace {

using Cells = std::vector<std::vector<int>>;

// split cells by neighbour counts into every cell until stable
void refine(const BitGraph& g, Cells& cells)
{
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            std::uint64_t cmask = 0;
            for (int v : cells[ci])
                cmask |= 1ull << v;
            Cells next;
            next.reserve(cells.size() + 4);
            bool split = false;
            for (auto& cell : cells) {
                if (cell.size() == 1) {
                    next.push_back(cell);
                    continue;
                }
                std::vector<std::pair<int, int>> keyed;
                for (int v : cell)
                    keyed.emplace_back(__builtin_popcountll(g.adj[v] & cmask), v);
                std::stable_sort(keyed.begin(), keyed.end(),
                                 [](auto& x, auto& y) { return x.first < y.first; });
                std::size_t start = 0;
                for (std::size_t i = 1; i <= keyed.size(); ++i) {
                    if (i == keyed.size() || keyed[i].first != keyed[start].first) {
                        std::vector<int> part;
                        for (std::size_t j = start; j < i; ++j)
                            part.push_back(keyed[j].second);
                        next.push_back(std::move(part));
                        start = i;
                    }
                }
                if (next.back().size() != cell.size())
                    split = true;
            }
            if (split) {
                cells = std::move(next);
                changed = true;
                break;
            }
        }
    }
}

bool twins(const BitGraph& g, const std::vector<int>& cell)
{
    for (std::size_t i = 1; i < cell.size(); ++i) {
        int u = cell[0], v = cell[i];
        std::uint64_t nu = g.adj[u] & ~(1ull << v);
        std::uint64_t nv = g.adj[v] & ~(1ull << u);
        if (nu != nv)
            return false;
    }
    return true;
}

std::uint64_t mask_for_order(const BitGraph& g, const Cells& cells)
{
    std::vector<int> pos(g.n);
    int k = 0;
    for (auto& cell : cells)
        for (int v : cell)
            pos[v] = k++;
    std::uint64_t m = 0;
    for (int u = 0; u < g.n; ++u) {
        std::uint64_t r = g.adj[u];
        while (r) {
            int v = __builtin_ctzll(r);
            r &= r - 1;
            if (u < v)
                m |= 1ull << pair_index(g.n, pos[u], pos[v]);
        }
    }
    return m;
}

void search(const BitGraph& g, Cells cells, std::uint64_t& best)
{
    refine(g, cells);
    std::size_t target = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].size() > 1 && !twins(g, cells[i])) {
            target = i;
            break;
        }
    if (target == cells.size()) {
        best = std::min(best, mask_for_order(g, cells));
        return;
    }
    for (int v : cells[target]) {
        Cells next;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i != target) {
                next.push_back(cells[i]);
                continue;
            }
            next.push_back({v});
            std::vector<int> rest;
            for (int w : cells[i])
                if (w != v)
                    rest.push_back(w);
            next.push_back(std::move(rest));
        }
        search(g, std::move(next), best);
    }
}

}  // namespace

std::uint64_t canonical_edge_mask(const BitGraph& g)
{
    if (g.n > 11)
        throw CapError("canonical masks need n <= 11");
    Cells cells(1);
    for (int v = 0; v < g.n; ++v)
        cells[0].push_back(v);
    if (g.n == 0)
        return 0;
    // start from degree classes so the cell order itself is invariant
    std::vector<std::pair<int, int>> keyed;
    for (int v = 0; v < g.n; ++v)
        keyed.emplace_back(g.degree(v), v);
    std::sort(keyed.begin(), keyed.end());
    cells.clear();
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first)
            cells.emplace_back();
        cells.back().push_back(keyed[i].second);
    }
    std::uint64_t best = ~0ull;
    search(g, cells, best);
    return best;
}

std::uint64_t canonical_edge_mask(int n, std::uint64_t edge_mask)
{
    return canonical_edge_mask(to_bits(graph_from_edge_mask(n, edge_mask)));
}

}  // namespace trifree
