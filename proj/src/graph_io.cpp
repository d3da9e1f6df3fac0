#include "trifree/graph_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unistd.h>

namespace trifree {

nlohmann::json graph_to_json(const Graph& g)
{
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : g.edges())
        edges.push_back({u, v});
    return {{"n", g.n()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw std::invalid_argument("graph json needs \"n\" and \"edges\"");
    Graph g(j.at("n").get<int>());
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("edge entries must be [u, v]");
        if (!g.add_edge(e[0].get<int>(), e[1].get<int>()))
            throw std::invalid_argument("duplicate edge in graph json");
    }
    return g;
}

void write_edge_list(std::ostream& os, const Graph& g)
{
    os << "n " << g.n() << '\n';
    for (auto [u, v] : g.edges())
        os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is)
{
    std::string tag;
    int n = -1;
    if (!(is >> tag >> n) || tag != "n" || n < 0)
        throw std::invalid_argument("edge list must start with \"n <N>\"");
    Graph g(n);
    int u, v;
    while (is >> u >> v)
        if (!g.add_edge(u, v))
            throw std::invalid_argument("duplicate edge in edge list");
    if (!is.eof())
        throw std::invalid_argument("malformed edge list line");
    return g;
}

nlohmann::json partition_to_json(const Partition& p)
{
    if (p.n() <= 64)
        return {{"a_mask", p.a_mask()}, {"a", p.a()}, {"b", p.b()}};
    std::vector<int> side(p.n());
    for (int v = 0; v < p.n(); ++v)
        side[v] = p.side(v);
    return {{"side", side}, {"a", p.a()}, {"b", p.b()}};
}

Partition partition_from_json(const nlohmann::json& j, int n)
{
    if (j.contains("a_mask"))
        return Partition::from_mask(n, j.at("a_mask").get<std::uint64_t>());
    auto side = j.at("side").get<std::vector<int>>();
    std::vector<std::uint8_t> s(side.begin(), side.end());
    return Partition(std::move(s));
}

void write_file_atomic(const std::string& path, const std::string& contents)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << contents;
        os.flush();
        if (!os)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace trifree
