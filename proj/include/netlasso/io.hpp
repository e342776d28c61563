#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "netlasso/graph.hpp"

namespace netlasso::io {

// File formats use 1-based node and cluster ids; in-memory ids are 0-based.

DataGraph load_graph(std::istream& in);
DataGraph load_graph(const std::filesystem::path& file);
void save_graph(const DataGraph& g, std::ostream& out);
void save_graph(const DataGraph& g, const std::filesystem::path& file);

GraphSignal load_signal(std::istream& in);
GraphSignal load_signal(const std::filesystem::path& file);
void save_signal(const GraphSignal& x, std::ostream& out);
void save_signal(const GraphSignal& x, const std::filesystem::path& file);

Observation load_observation(std::istream& in);
Observation load_observation(const std::filesystem::path& file);
void save_observation(const Observation& obs, std::ostream& out);
void save_observation(const Observation& obs, const std::filesystem::path& file);

Partition load_partition(std::istream& in);
Partition load_partition(const std::filesystem::path& file);
void save_partition(const Partition& p, std::ostream& out);
void save_partition(const Partition& p, const std::filesystem::path& file);

/// Sampling set file: {"nodes": [...]} with 1-based ids.
std::vector<int> load_sampling_set(std::istream& in);
std::vector<int> load_sampling_set(const std::filesystem::path& file);
void save_sampling_set(const std::vector<int>& nodes, std::ostream& out);
void save_sampling_set(const std::vector<int>& nodes, const std::filesystem::path& file);

/// CSV export with header `node,value`.
void save_signal_csv(const GraphSignal& x, std::ostream& out);
void save_signal_csv(const GraphSignal& x, const std::filesystem::path& file);

/// Writes via a temporary file in the same directory followed by a rename.
void atomic_write(const std::filesystem::path& file, const std::string& content);

}  // namespace netlasso::io
