#pragma once

#include "name.hpp"
#include "packet.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ccnsim {

class TopologyError : public std::runtime_error {
public:
  explicit TopologyError(const std::string& what)
    : std::runtime_error("topology: " + what)
  {
  }
};

struct TopoNode {
  NodeId id = 0;
  std::string label;
  ContentName prefix;
};

struct TopoLink {
  NodeId a = 0;
  NodeId b = 0;
  TimeMs delayMs = 0;
};

/** \brief Network graph: nodes with producer prefixes, point-to-point links.
 *
 *  Text format, one directive per line, `#` starts a comment:
 *
 *      node <id> <label> <prefix>
 *      link <idA> <idB> <delay_ms>
 *
 *  Node ids must be dense 0..n-1. Each link materializes one face at each
 *  endpoint, numbered from 1 in file order (face 0 is the application).
 */
struct Topology {
  std::vector<TopoNode> nodes;
  std::vector<TopoLink> links;

  std::size_t nodeCount() const { return nodes.size(); }

  void validate() const
  {
    if (nodes.empty()) {
      throw TopologyError("no nodes");
    }
    std::vector<bool> seen(nodes.size(), false);
    std::unordered_set<std::string> prefixes;
    for (const TopoNode& n : nodes) {
      if (n.id >= nodes.size()) {
        throw TopologyError("node ids must be dense 0..n-1, got " + std::to_string(n.id));
      }
      if (seen[n.id]) {
        throw TopologyError("duplicate node id " + std::to_string(n.id));
      }
      seen[n.id] = true;
      if (n.prefix.empty()) {
        throw TopologyError("node " + std::to_string(n.id) + " has no prefix");
      }
      if (!prefixes.insert(n.prefix.str()).second) {
        throw TopologyError("duplicate producer prefix " + n.prefix.str());
      }
    }
    std::unordered_set<std::uint64_t> pairs;
    for (const TopoLink& l : links) {
      if (l.a >= nodes.size() || l.b >= nodes.size()) {
        throw TopologyError("link references unknown node");
      }
      if (l.a == l.b) {
        throw TopologyError("self-loop at node " + std::to_string(l.a));
      }
      if (l.delayMs <= 0) {
        throw TopologyError("link delay must be positive");
      }
      std::uint64_t key = (std::uint64_t{std::min(l.a, l.b)} << 32) | std::max(l.a, l.b);
      if (!pairs.insert(key).second) {
        throw TopologyError("duplicate link " + std::to_string(l.a) + "-" +
                            std::to_string(l.b));
      }
    }
    if (!isConnected()) {
      throw TopologyError("graph is not connected");
    }
  }

  bool isConnected() const
  {
    if (nodes.empty()) {
      return false;
    }
    std::vector<std::vector<NodeId>> adj(nodes.size());
    for (const TopoLink& l : links) {
      if (l.a < nodes.size() && l.b < nodes.size()) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
      }
    }
    std::vector<bool> visited(nodes.size(), false);
    std::vector<NodeId> stack{0};
    visited[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : adj[v]) {
        if (!visited[w]) {
          visited[w] = true;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    return reached == nodes.size();
  }

  std::string toText() const
  {
    std::ostringstream out;
    for (const TopoNode& n : nodes) {
      out << "node " << n.id << ' ' << n.label << ' ' << n.prefix.str() << '\n';
    }
    for (const TopoLink& l : links) {
      out << "link " << l.a << ' ' << l.b << ' ' << l.delayMs << '\n';
    }
    return out.str();
  }

  static Topology parseText(std::string_view text)
  {
    Topology topo;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      auto hash = line.find('#');
      if (hash != std::string::npos) {
        line.erase(hash);
      }
      std::istringstream tokens{line};
      std::string directive;
      if (!(tokens >> directive)) {
        continue; // blank or comment-only line
      }
      if (directive == "node") {
        TopoNode n;
        std::string prefix;
        if (!(tokens >> n.id >> n.label >> prefix)) {
          throw TopologyError("line " + std::to_string(lineNo) +
                              ": expected 'node <id> <label> <prefix>'");
        }
        auto parsed = ContentName::tryParse(prefix);
        if (!parsed) {
          throw TopologyError("line " + std::to_string(lineNo) + ": bad prefix '" +
                              prefix + "'");
        }
        n.prefix = *parsed;
        topo.nodes.push_back(std::move(n));
      } else if (directive == "link") {
        TopoLink l;
        if (!(tokens >> l.a >> l.b >> l.delayMs)) {
          throw TopologyError("line " + std::to_string(lineNo) +
                              ": expected 'link <idA> <idB> <delay_ms>'");
        }
        topo.links.push_back(l);
      } else {
        throw TopologyError("line " + std::to_string(lineNo) + ": unknown directive '" +
                            directive + "'");
      }
      std::string extra;
      if (tokens >> extra) {
        throw TopologyError("line " + std::to_string(lineNo) + ": trailing token '" +
                            extra + "'");
      }
    }
    return topo;
  }

  static Topology loadFile(const std::string& path)
  {
    std::ifstream in{path};
    if (!in) {
      throw TopologyError("cannot open file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseText(buf.str());
  }
};

/// 12-node Abilene backbone used by the bundled scenarios. The classic
/// 11-PoP core plus a twelfth Washington-area node hanging off WashingtonDC.
inline constexpr std::string_view kAbileneTopologyText =
  R"(# Abilene backbone, 12 nodes, one producer prefix per city.
# Classic 11-PoP core plus a 12th Washington-area PoP (Ashburn).
node 0 Seattle /Sea
node 1 Sunnyvale /Sun
node 2 LosAngeles /LA
node 3 Denver /Den
node 4 KansasCity /KC
node 5 Houston /Hou
node 6 Indianapolis /Ind
node 7 Atlanta /Atl
node 8 Chicago /Chi
node 9 NewYork /NY
node 10 WashingtonDC /DC
node 11 Ashburn /Was
link 0 1 10
link 0 3 10
link 1 2 10
link 1 3 10
link 2 5 10
link 3 4 10
link 4 5 10
link 4 6 10
link 5 7 10
link 6 7 10
link 6 8 10
link 7 10 10
link 8 9 10
link 9 10 10
link 10 11 10
)";

inline Topology buildAbilene()
{
  return Topology::parseText(kAbileneTopologyText);
}

} // namespace ccnsim
