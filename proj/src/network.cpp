#include "picaso/network.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace picaso {

namespace {
constexpr std::array<std::string_view, 4> kRoleNames{"T", "R", "P", "I"};
}

std::string_view to_string(NodeRole role) {
    return kRoleNames.at(static_cast<std::size_t>(role));
}

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(long long v) {
    if (!is_power_of_two(v)) {
        throw std::invalid_argument(std::to_string(v) + " is not a power of two");
    }
    int n = 0;
    while ((1LL << n) < v) ++n;
    return n;
}

NodeRole node_role(int level, int index) {
    if (level < 0 || index < 0 || level > 30) return NodeRole::Idle;
    const int span = 1 << level;
    const int pos = index % (span << 1);
    if (pos == 0) return NodeRole::Receiver;
    if (pos == span) return NodeRole::Transmitter;
    if (pos < span) return NodeRole::Passthrough;
    return NodeRole::Idle;
}

NodeRole node_role(int level, int index, int width) {
    if (index >= width) return NodeRole::Idle;
    const NodeRole role = node_role(level, index);
    if (role == NodeRole::Idle) return role;
    const int span = 1 << level;
    const int receiver = index - index % (span << 1);
    return receiver + span < width ? role : NodeRole::Idle;
}

NetRow::NetRow(int width) : width_(width), levels_(log2_exact(width)) {}

std::vector<NodeRole> NetRow::roles(int level) const {
    std::vector<NodeRole> out(static_cast<std::size_t>(width_));
    for (int i = 0; i < width_; ++i) out[i] = node_role(level, i, width_);
    return out;
}

int NetRow::partner_of(int receiver, int level) const {
    if (node_role(level, receiver, width_) != NodeRole::Receiver) return -1;
    return receiver + (1 << level);
}

std::vector<int> NetRow::route(int receiver, int level) const {
    const int tx = partner_of(receiver, level);
    if (tx < 0) return {};
    std::vector<int> hops;
    for (int node = tx; node >= receiver; --node) hops.push_back(node);
    return hops;
}

std::vector<bool> net_cycle(const std::vector<bool>& emitted, int level) {
    const int width = static_cast<int>(emitted.size());
    std::vector<bool> delivered(emitted.size(), false);
    for (int rx = 0; rx < width; ++rx) {
        if (node_role(level, rx, width) != NodeRole::Receiver) continue;
        // Walk the hop chain; pass-through nodes forward unchanged.
        bool bit = emitted[rx + (1 << level)];
        for (int node = rx + (1 << level) - 1; node > rx; --node) {
            if (node_role(level, node, width) != NodeRole::Passthrough) {
                throw std::logic_error("broken hop chain at node " + std::to_string(node));
            }
        }
        delivered[rx] = bit;
    }
    return delivered;
}

}  // namespace picaso
