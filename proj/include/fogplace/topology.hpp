#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fogplace {

enum class NodeKind { kAccessOnu, kServerOnu, kAwgrHub, kOlt };

std::string_view to_string(NodeKind kind);

// Identifies a node by (kind, cell, index). The OLT has no cell (cell == -1).
// Ordering is lexicographic over (kind, cell, index), which is also the
// canonical node order used for routing tie-breaks and report output.
struct NodeId {
  NodeKind kind = NodeKind::kAccessOnu;
  int cell = -1;
  int index = 0;

  static NodeId access_onu(int cell, int index) { return {NodeKind::kAccessOnu, cell, index}; }
  static NodeId server(int cell, int index) { return {NodeKind::kServerOnu, cell, index}; }
  static NodeId hub(int cell) { return {NodeKind::kAwgrHub, cell, 0}; }
  static NodeId olt() { return {NodeKind::kOlt, -1, 0}; }

  bool has_cell() const { return cell >= 0; }

  // Short stable name, e.g. "srv_c0_i2", "onu_c1_i0", "hub_c2", "olt".
  std::string name() const;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

// Parses the output of NodeId::name(). Throws ParseError.
NodeId parse_node_id(std::string_view text);

struct Link {
  int a = 0;  // node handle, a < b
  int b = 0;
  double capacity_gbps = 0.0;

  int other(int node) const { return node == a ? b : a; }
};

// A simple path between two nodes as handles into the owning Topology.
// nodes.size() == links.size() + 1.
struct Path {
  std::vector<int> nodes;
  std::vector<int> links;

  std::size_t hops() const { return links.size(); }
};

struct TopologyParams {
  int cells = 3;
  int servers_per_cell = 5;
  int access_onus_per_cell = 2;
  double link_capacity_gbps = 32 * 40.0;  // wavelengths x per-wavelength rate
};

// The PON fog graph: per cell a passive AWGR hub with its access and server
// ONUs attached, a full hub-to-hub mesh, and one uplink per hub to the OLT.
// Immutable after construction.
class Topology {
 public:
  explicit Topology(const TopologyParams& params);

  const TopologyParams& params() const { return params_; }
  int cell_count() const { return params_.cells; }

  std::size_t node_count() const { return nodes_.size(); }
  std::span<const NodeId> nodes() const { return nodes_; }
  const NodeId& node(int handle) const { return nodes_.at(handle); }
  std::span<const Link> links() const { return links_; }
  const Link& link(int handle) const { return links_.at(handle); }

  bool contains(const NodeId& id) const { return handles_.contains(id); }
  // Throws NotFound.
  int handle(const NodeId& id) const;

  // Neighbour handles with the connecting link, in canonical node order.
  struct Adjacent {
    int node;
    int link;
  };
  std::span<const Adjacent> neighbours(int handle) const { return adjacency_.at(handle); }

  // Server-ONU handles in cell-major order; the canonical server order.
  std::span<const int> servers() const { return servers_; }
  // Access-ONU handles in cell-major order.
  std::span<const int> access_onus() const { return access_onus_; }
  int olt_handle() const { return olt_; }
  int hub_handle(int cell) const { return hubs_.at(cell); }

  // Stored minimum-hop path; s != d.
  const Path& path(int s, int d) const;

 private:
  void add_link(int a, int b);
  void compute_paths();

  TopologyParams params_;
  std::vector<NodeId> nodes_;
  std::map<NodeId, int> handles_;
  std::vector<Link> links_;
  std::vector<std::vector<Adjacent>> adjacency_;
  std::vector<int> servers_;
  std::vector<int> access_onus_;
  std::vector<int> hubs_;
  int olt_ = -1;
  std::vector<Path> paths_;  // row-major, node_count x node_count
};

// Validates parameters and builds the topology. Throws InvalidConfig.
Topology build_topology(const TopologyParams& params);

// Path lookup by node id. Throws InvalidConfig when s == d and NotFound for
// nodes outside the topology.
const Path& shortest_path(const Topology& topology, const NodeId& s, const NodeId& d);

}  // namespace fogplace
