#include "fogplace/topology.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>

#include "fogplace/errors.hpp"

namespace fogplace {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kAccessOnu: return "access_onu";
    case NodeKind::kServerOnu: return "server_onu";
    case NodeKind::kAwgrHub: return "awgr_hub";
    case NodeKind::kOlt: return "olt";
  }
  return "?";
}

std::string NodeId::name() const {
  std::ostringstream os;
  switch (kind) {
    case NodeKind::kAccessOnu: os << "onu_c" << cell << "_i" << index; break;
    case NodeKind::kServerOnu: os << "srv_c" << cell << "_i" << index; break;
    case NodeKind::kAwgrHub: os << "hub_c" << cell; break;
    case NodeKind::kOlt: os << "olt"; break;
  }
  return os.str();
}

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0) {
    throw ParseError("bad node id '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

NodeId parse_node_id(std::string_view text) {
  if (text == "olt") return NodeId::olt();
  if (text.starts_with("hub_c")) return NodeId::hub(parse_int(text.substr(5), text));
  NodeKind kind;
  if (text.starts_with("onu_c")) {
    kind = NodeKind::kAccessOnu;
  } else if (text.starts_with("srv_c")) {
    kind = NodeKind::kServerOnu;
  } else {
    throw ParseError("bad node id '" + std::string(text) + "'");
  }
  const auto rest = text.substr(5);
  const auto sep = rest.find("_i");
  if (sep == std::string_view::npos) throw ParseError("bad node id '" + std::string(text) + "'");
  return {kind, parse_int(rest.substr(0, sep), text), parse_int(rest.substr(sep + 2), text)};
}

Topology::Topology(const TopologyParams& params) : params_(params) {
  for (int c = 0; c < params.cells; ++c) {
    for (int i = 0; i < params.access_onus_per_cell; ++i) nodes_.push_back(NodeId::access_onu(c, i));
    for (int i = 0; i < params.servers_per_cell; ++i) nodes_.push_back(NodeId::server(c, i));
    nodes_.push_back(NodeId::hub(c));
  }
  nodes_.push_back(NodeId::olt());
  std::sort(nodes_.begin(), nodes_.end());
  for (int h = 0; h < static_cast<int>(nodes_.size()); ++h) {
    handles_.emplace(nodes_[h], h);
    switch (nodes_[h].kind) {
      case NodeKind::kAccessOnu: access_onus_.push_back(h); break;
      case NodeKind::kServerOnu: servers_.push_back(h); break;
      case NodeKind::kAwgrHub: hubs_.push_back(h); break;
      case NodeKind::kOlt: olt_ = h; break;
    }
  }
  adjacency_.resize(nodes_.size());

  for (int c = 0; c < params.cells; ++c) {
    const int hub = handle(NodeId::hub(c));
    for (int i = 0; i < params.access_onus_per_cell; ++i) add_link(handle(NodeId::access_onu(c, i)), hub);
    for (int i = 0; i < params.servers_per_cell; ++i) add_link(handle(NodeId::server(c, i)), hub);
  }
  for (int c = 0; c < params.cells; ++c) {
    for (int k = c + 1; k < params.cells; ++k) add_link(hubs_[c], hubs_[k]);
    add_link(hubs_[c], olt_);
  }
  // Handles follow NodeId order, so sorting by handle gives canonical order.
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Adjacent& x, const Adjacent& y) { return x.node < y.node; });
  }
  compute_paths();
}

void Topology::add_link(int a, int b) {
  if (a > b) std::swap(a, b);
  const int id = static_cast<int>(links_.size());
  links_.push_back({a, b, params_.link_capacity_gbps});
  adjacency_[a].push_back({b, id});
  adjacency_[b].push_back({a, id});
}

int Topology::handle(const NodeId& id) const {
  auto it = handles_.find(id);
  if (it == handles_.end()) throw NotFound("unknown node " + id.name());
  return it->second;
}

// BFS from every source. Neighbours are visited in canonical order and the
// first discovery wins, which fixes the choice among equal-hop paths.
void Topology::compute_paths() {
  const int n = static_cast<int>(nodes_.size());
  paths_.assign(static_cast<std::size_t>(n) * n, Path{});
  std::vector<int> parent(n);
  std::vector<int> parent_link(n);
  for (int s = 0; s < n; ++s) {
    std::fill(parent.begin(), parent.end(), -1);
    parent[s] = s;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const auto& [v, l] : adjacency_[u]) {
        if (parent[v] != -1) continue;
        parent[v] = u;
        parent_link[v] = l;
        queue.push_back(v);
      }
    }
    for (int d = 0; d < n; ++d) {
      if (d == s) continue;
      Path& p = paths_[static_cast<std::size_t>(s) * n + d];
      for (int v = d; v != s; v = parent[v]) {
        p.nodes.push_back(v);
        p.links.push_back(parent_link[v]);
      }
      p.nodes.push_back(s);
      std::reverse(p.nodes.begin(), p.nodes.end());
      std::reverse(p.links.begin(), p.links.end());
    }
  }
}

const Path& Topology::path(int s, int d) const {
  const int n = static_cast<int>(nodes_.size());
  if (s < 0 || d < 0 || s >= n || d >= n) throw NotFound("node handle out of range");
  if (s == d) throw InvalidConfig("path source and destination coincide");
  return paths_[static_cast<std::size_t>(s) * n + d];
}

Topology build_topology(const TopologyParams& params) {
  if (params.cells < 1 || params.servers_per_cell < 1 || params.access_onus_per_cell < 1) {
    throw InvalidConfig("topology counts must be at least 1");
  }
  if (!(params.link_capacity_gbps > 0.0)) throw InvalidConfig("link capacity must be positive");
  return Topology(params);
}

const Path& shortest_path(const Topology& topology, const NodeId& s, const NodeId& d) {
  const int hs = topology.handle(s);
  const int hd = topology.handle(d);
  if (hs == hd) throw InvalidConfig("path source and destination coincide: " + s.name());
  return topology.path(hs, hd);
}

}  // namespace fogplace
