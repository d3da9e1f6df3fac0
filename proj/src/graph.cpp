#include "trifree/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trifree {

Graph::Graph(int n) : n_(n), adj_(std::size_t(std::max(n, 0)))
{
    if (n < 0)
        throw std::invalid_argument("negative vertex count");
}

Graph::Graph(int n, const std::vector<EdgePair>& edges) : Graph(n)
{
    for (auto [u, v] : edges)
        add_edge(u, v);
}

bool Graph::add_edge(int u, int v)
{
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
        throw std::out_of_range("edge endpoint out of range: " + std::to_string(u) + "," +
                                std::to_string(v));
    if (u == v)
        throw std::invalid_argument("self-loop at " + std::to_string(u));
    if (!eset_.insert(key(u, v)).second)
        return false;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    return true;
}

bool Graph::remove_edge(int u, int v)
{
    if (u == v || eset_.erase(key(u, v)) == 0)
        return false;
    auto drop = [](std::vector<int>& a, int x) {
        auto it = std::find(a.begin(), a.end(), x);
        *it = a.back();
        a.pop_back();
    };
    drop(adj_[u], v);
    drop(adj_[v], u);
    return true;
}

bool Graph::has_edge(int u, int v) const
{
    if (u == v)
        return false;
    return eset_.count(key(u, v)) != 0;
}

int Graph::max_degree() const
{
    int d = 0;
    for (auto& a : adj_)
        d = std::max(d, int(a.size()));
    return d;
}

std::vector<EdgePair> Graph::edges() const
{
    std::vector<EdgePair> out;
    out.reserve(eset_.size());
    for (int u = 0; u < n_; ++u)
        for (int v : adj_[u])
            if (u < v)
                out.emplace_back(u, v);
    std::sort(out.begin(), out.end());
    return out;
}

bool Graph::operator==(const Graph& o) const
{
    if (n_ != o.n_ || eset_.size() != o.eset_.size())
        return false;
    for (auto k : eset_)
        if (!o.eset_.count(k))
            return false;
    return true;
}

//---------------------------------------------------------------------------//

BitGraph::BitGraph(int n_) : n(n_)
{
    if (n_ < 0 || n_ > 64)
        throw CapError("bit graph needs n <= 64");
}

void BitGraph::add_edge(int u, int v)
{
    if (u == v)
        throw std::invalid_argument("self-loop");
    adj[u] |= 1ull << v;
    adj[v] |= 1ull << u;
}

void BitGraph::remove_edge(int u, int v)
{
    adj[u] &= ~(1ull << v);
    adj[v] &= ~(1ull << u);
}

int BitGraph::num_edges() const
{
    int s = 0;
    for (int v = 0; v < n; ++v)
        s += __builtin_popcountll(adj[v]);
    return s / 2;
}

BitGraph to_bits(const Graph& g)
{
    BitGraph b(g.n());
    for (auto [u, v] : g.edges())
        b.add_edge(u, v);
    return b;
}

Graph from_bits(const BitGraph& b)
{
    Graph g(b.n);
    for (int u = 0; u < b.n; ++u) {
        std::uint64_t r = b.adj[u] & ~((2ull << u) - 1);
        while (r) {
            int v = __builtin_ctzll(r);
            r &= r - 1;
            g.add_edge(u, v);
        }
    }
    return g;
}

int pair_index(int n, int u, int v)
{
    if (u > v)
        std::swap(u, v);
    // pairs (0,1),(0,2),...,(0,n-1),(1,2),...
    return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

std::vector<EdgePair> pair_list(int n)
{
    std::vector<EdgePair> out;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            out.emplace_back(u, v);
    return out;
}

std::uint64_t edge_mask(const Graph& g)
{
    if (g.n() > 11)
        throw CapError("edge masks need n <= 11");
    std::uint64_t m = 0;
    for (auto [u, v] : g.edges())
        m |= 1ull << pair_index(g.n(), u, v);
    return m;
}

Graph graph_from_edge_mask(int n, std::uint64_t mask)
{
    Graph g(n);
    auto pairs = pair_list(n);
    while (mask) {
        int i = __builtin_ctzll(mask);
        mask &= mask - 1;
        g.add_edge(pairs[i].first, pairs[i].second);
    }
    return g;
}

//---------------------------------------------------------------------------//

Partition::Partition(std::vector<std::uint8_t> side) : side_(std::move(side)), local_(side_.size())
{
    for (int v = 0; v < int(side_.size()); ++v) {
        if (side_[v] > 1)
            throw std::invalid_argument("partition side must be 0 or 1");
        auto& list = side_[v] == 0 ? a_list_ : b_list_;
        local_[v] = int(list.size());
        list.push_back(v);
    }
}

Partition Partition::from_mask(int n, std::uint64_t a_mask)
{
    std::vector<std::uint8_t> s(n);
    for (int v = 0; v < n; ++v)
        s[v] = ((a_mask >> v) & 1u) ? 0 : 1;
    return Partition(std::move(s));
}

Partition Partition::from_sets(int n, const std::vector<int>& a_vertices)
{
    std::vector<std::uint8_t> s(n, 1);
    for (int v : a_vertices)
        s.at(v) = 0;
    return Partition(std::move(s));
}

bool Partition::weakly_balanced() const
{
    return std::abs(a() - b()) <= n() / 10.0;
}

double moderate_balance_bound(int n, double lambda)
{
    double ln = std::log(double(n));
    return std::max(n * std::exp(-lambda * lambda * n / 2), std::sqrt(double(n))) * ln * ln;
}

bool Partition::moderately_balanced(double lambda) const
{
    return std::abs(a() - b()) <= moderate_balance_bound(n(), lambda);
}

bool Partition::strongly_balanced() const
{
    double nn = n();
    return std::abs(a() - b()) <= 10 * std::pow(nn * std::log(nn), 0.25);
}

std::uint64_t Partition::a_mask() const
{
    if (n() > 64)
        throw CapError("partition masks need n <= 64");
    std::uint64_t m = 0;
    for (int v : a_list_)
        m |= 1ull << v;
    return m;
}

Partition Partition::swapped() const
{
    std::vector<std::uint8_t> s(side_);
    for (auto& x : s)
        x ^= 1u;
    return Partition(std::move(s));
}

}  // namespace trifree
