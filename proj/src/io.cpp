#include "netlasso/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace netlasso::io {

using nlohmann::json;

namespace {

json parse(std::istream& in) {
    json j;
    in >> j;
    return j;
}

std::ifstream open_in(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    return out;
}

}  // namespace

DataGraph load_graph(std::istream& in) {
    const json j = parse(in);
    const int n = j.at("n").get<int>();
    std::vector<WeightedEdge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) {
            throw std::runtime_error("edge entries must be [i, j, w]");
        }
        edges.push_back(WeightedEdge{e[0].get<int>() - 1, e[1].get<int>() - 1, e[2].get<double>()});
    }
    return DataGraph(n, std::move(edges));
}

void save_graph(const DataGraph& g, std::ostream& out) {
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({e.i + 1, e.j + 1, e.w});
    out << json{{"n", g.node_count()}, {"edges", edges}} << "\n";
}

GraphSignal load_signal(std::istream& in) {
    const json j = parse(in);
    return GraphSignal(j.at("values").get<std::vector<double>>());
}

void save_signal(const GraphSignal& x, std::ostream& out) {
    out << json{{"values", x.values()}} << "\n";
}

Observation load_observation(std::istream& in) {
    const json j = parse(in);
    std::vector<int> nodes;
    std::vector<double> values;
    for (const auto& s : j.at("samples")) {
        nodes.push_back(s[0].get<int>() - 1);
        values.push_back(s[1].get<double>());
    }
    std::optional<std::vector<double>> noise;
    if (j.contains("noise")) {
        std::vector<double> e(nodes.size(), 0.0);
        std::size_t k = 0;
        for (const auto& s : j.at("noise")) {
            const int node = s[0].get<int>() - 1;
            if (k >= nodes.size() || nodes[k] != node) {
                throw std::runtime_error("noise entries must mirror the samples");
            }
            e[k++] = s[1].get<double>();
        }
        if (k != nodes.size()) throw std::runtime_error("noise entries must mirror the samples");
        noise = std::move(e);
    }
    return Observation(std::move(nodes), std::move(values), std::move(noise));
}

void save_observation(const Observation& obs, std::ostream& out) {
    json samples = json::array();
    for (int k = 0; k < obs.sample_count(); ++k) {
        samples.push_back({obs.nodes()[static_cast<std::size_t>(k)] + 1,
                           obs.values()[static_cast<std::size_t>(k)]});
    }
    json j{{"samples", samples}};
    if (obs.has_noise()) {
        json noise = json::array();
        for (int k = 0; k < obs.sample_count(); ++k) {
            noise.push_back({obs.nodes()[static_cast<std::size_t>(k)] + 1,
                             obs.noise()[static_cast<std::size_t>(k)]});
        }
        j["noise"] = noise;
    }
    out << j << "\n";
}

Partition load_partition(std::istream& in) {
    const json j = parse(in);
    std::vector<int> cluster_of = j.at("cluster_of").get<std::vector<int>>();
    for (int& c : cluster_of) --c;
    return Partition::from_cluster_of(std::move(cluster_of));
}

void save_partition(const Partition& p, std::ostream& out) {
    std::vector<int> one_based(p.assignments());
    for (int& c : one_based) ++c;
    out << json{{"cluster_of", one_based}} << "\n";
}

std::vector<int> load_sampling_set(std::istream& in) {
    const json j = parse(in);
    std::vector<int> nodes = j.at("nodes").get<std::vector<int>>();
    for (int& v : nodes) --v;
    return nodes;
}

void save_sampling_set(const std::vector<int>& nodes, std::ostream& out) {
    std::vector<int> one_based(nodes);
    for (int& v : one_based) ++v;
    out << json{{"nodes", one_based}} << "\n";
}

void save_signal_csv(const GraphSignal& x, std::ostream& out) {
    out << "node,value\n";
    for (int i = 0; i < x.size(); ++i) {
        out << (i + 1) << "," << x[i] << "\n";
    }
}

void atomic_write(const std::filesystem::path& file, const std::string& content) {
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
    }
    std::filesystem::rename(tmp, file);
}

DataGraph load_graph(const std::filesystem::path& file) {
    auto in = open_in(file);
    return load_graph(in);
}
void save_graph(const DataGraph& g, const std::filesystem::path& file) {
    auto out = open_out(file);
    save_graph(g, out);
}
GraphSignal load_signal(const std::filesystem::path& file) {
    auto in = open_in(file);
    return load_signal(in);
}
void save_signal(const GraphSignal& x, const std::filesystem::path& file) {
    auto out = open_out(file);
    save_signal(x, out);
}
Observation load_observation(const std::filesystem::path& file) {
    auto in = open_in(file);
    return load_observation(in);
}
void save_observation(const Observation& obs, const std::filesystem::path& file) {
    auto out = open_out(file);
    save_observation(obs, out);
}
Partition load_partition(const std::filesystem::path& file) {
    auto in = open_in(file);
    return load_partition(in);
}
void save_partition(const Partition& p, const std::filesystem::path& file) {
    auto out = open_out(file);
    save_partition(p, out);
}
std::vector<int> load_sampling_set(const std::filesystem::path& file) {
    auto in = open_in(file);
    return load_sampling_set(in);
}
void save_sampling_set(const std::vector<int>& nodes, const std::filesystem::path& file) {
    auto out = open_out(file);
    save_sampling_set(nodes, out);
}
void save_signal_csv(const GraphSignal& x, const std::filesystem::path& file) {
    auto out = open_out(file);
    save_signal_csv(x, out);
}

}  // namespace netlasso::io
