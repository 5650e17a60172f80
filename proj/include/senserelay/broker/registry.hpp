#pragma once

#include <map>
#include <optional>
#include <string>

#include "senserelay/clock.hpp"
#include "senserelay/proto/node_id.hpp"

namespace senserelay::broker {

// One row of the broker's id -> address table.
struct NodeRecord {
    proto::NodeId node;
    std::string address;      // host:port the node registered from
    EpochMs registered_at = 0;
    EpochMs last_seen = 0;
    bool online = false;      // now - last_seen <= liveness_timeout
};

// The phone table. Not thread-safe; BrokerCore serializes access.
class Registry {
public:
    explicit Registry(EpochMs liveness_timeout_ms) : liveness_timeout_(liveness_timeout_ms) {}

    // Insert or update; last write wins on the address. Keeps the original
    // registered_at for a known node.
    void upsert(const proto::NodeId& node, const std::string& address, EpochMs now);

    // Refresh last_seen; returns false for a node that never registered.
    bool heartbeat(const proto::NodeId& node, EpochMs now);

    // Online state is always computed against `now`, never trusted stale.
    std::optional<NodeRecord> find(const proto::NodeId& node, EpochMs now) const;

    // Throws NotFound.
    NodeRecord lookup(const proto::NodeId& node, EpochMs now) const;

    bool is_online(const proto::NodeId& node, EpochMs now) const;

    // Marks every record silent for more than the liveness timeout offline;
    // returns how many flipped online -> offline.
    std::size_t expire_stale(EpochMs now);

    std::size_t size() const { return records_.size(); }
    EpochMs liveness_timeout() const { return liveness_timeout_; }

private:
    EpochMs liveness_timeout_;
    std::map<proto::NodeId, NodeRecord> records_; // at most one record per id
};

} // namespace senserelay::broker
