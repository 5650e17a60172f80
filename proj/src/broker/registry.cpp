#include "senserelay/broker/registry.hpp"

#include "senserelay/errors.hpp"

namespace senserelay::broker {

void Registry::upsert(const proto::NodeId& node, const std::string& address, EpochMs now) {
    auto [it, inserted] = records_.try_emplace(node);
    NodeRecord& rec = it->second;
    rec.node = node;
    rec.address = address;
    if (inserted) rec.registered_at = now;
    rec.last_seen = now;
    rec.online = true;
}

bool Registry::heartbeat(const proto::NodeId& node, EpochMs now) {
    auto it = records_.find(node);
    if (it == records_.end()) return false;
    it->second.last_seen = now;
    it->second.online = true;
    return true;
}

std::optional<NodeRecord> Registry::find(const proto::NodeId& node, EpochMs now) const {
    auto it = records_.find(node);
    if (it == records_.end()) return std::nullopt;
    NodeRecord rec = it->second;
    rec.online = now - rec.last_seen <= liveness_timeout_;
    return rec;
}

NodeRecord Registry::lookup(const proto::NodeId& node, EpochMs now) const {
    auto rec = find(node, now);
    if (!rec) throw NotFound("node " + node.value() + " never registered");
    return *rec;
}

bool Registry::is_online(const proto::NodeId& node, EpochMs now) const {
    auto rec = find(node, now);
    return rec && rec->online;
}

std::size_t Registry::expire_stale(EpochMs now) {
    std::size_t flipped = 0;
    for (auto& [id, rec] : records_) {
        if (rec.online && now - rec.last_seen > liveness_timeout_) {
            rec.online = false;
            ++flipped;
        }
    }
    return flipped;
}

} // namespace senserelay::broker
