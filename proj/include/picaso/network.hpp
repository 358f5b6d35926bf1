#pragma once

// Binary-hopping reduction network joining the PE-blocks of one array row.
//
// At level L a node whose index is a multiple of 2^(L+1) receives from the
// node 2^L to its right; the nodes in between forward the stream within the
// same cycle. After levels 0 .. log2(width)-1 node 0 holds the row result.

#include <cstdint>
#include <string_view>
#include <vector>

namespace picaso {

enum class NodeRole : std::uint8_t { Transmitter, Receiver, Passthrough, Idle };

std::string_view to_string(NodeRole role);

/// Role on an unbounded row.
NodeRole node_role(int level, int index);

/// Role on a row of `width` nodes: a pair only exists when its transmitter
/// is inside the row; nodes of incomplete pairs are idle.
NodeRole node_role(int level, int index, int width);

/// Row geometry. `width` is the number of blocks and must be a power of two.
class NetRow {
public:
    explicit NetRow(int width);

    int width() const { return width_; }
    /// log2(width): jumps needed to reduce the whole row.
    int levels() const { return levels_; }

    std::vector<NodeRole> roles(int level) const;

    /// Transmitter paired with `receiver` at `level`, or -1 when it has none.
    int partner_of(int receiver, int level) const;

    /// Nodes the stream crosses from the transmitter to `receiver`,
    /// transmitter first, receiver last.
    std::vector<int> route(int receiver, int level) const;

private:
    int width_;
    int levels_;
};

/// Delivers one bit per node for one clock at `level`. Every receiver gets
/// its transmitter's emitted bit; every other node sees 0.
std::vector<bool> net_cycle(const std::vector<bool>& emitted, int level);

bool is_power_of_two(long long v);
int log2_exact(long long v);

}  // namespace picaso
