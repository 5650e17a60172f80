#include "senserelay/broker/core.hpp"

#include "senserelay/errors.hpp"

namespace senserelay::broker {

BrokerCore::BrokerCore(BrokerConfig cfg, const Clock& clock, ResponseStore& store, Sender sender)
    : cfg_(cfg), clock_(clock), store_(store), sender_(std::move(sender)),
      registry_(cfg.liveness_timeout_ms) {}

void BrokerCore::set_trace_sink(TraceSink sink) {
    std::lock_guard lock(mu_);
    trace_ = std::move(sink);
}

void BrokerCore::emit(TraceEvent::Kind kind, std::uint64_t request_id, const proto::NodeId& node,
                      std::uint64_t store_pos, const std::string& detail) {
    if (!trace_) return;
    TraceEvent ev;
    ev.kind = kind;
    ev.seq = trace_seq_++;
    ev.request_id = request_id;
    ev.node = node;
    ev.store_pos = store_pos;
    ev.detail = detail;
    trace_(ev);
}

bool BrokerCore::send(ConnId conn, const proto::Message& msg) {
    return sender_ && sender_(conn, msg);
}

void BrokerCore::send_error(ConnId conn, const std::string& code, std::uint64_t request_id,
                            const std::string& note) {
    send(conn, proto::ErrorMsg{code, proto::correlated_detail(request_id, note)});
    emit(TraceEvent::Kind::error_sent, request_id, proto::NodeId{}, 0, code);
}

void BrokerCore::bind(const proto::NodeId& node, ConnId conn) {
    if (conn == 0) return;
    auto old = node_conns_.find(node);
    if (old != node_conns_.end()) conn_nodes_.erase(old->second);
    node_conns_[node] = conn;
    conn_nodes_[conn] = node;
}

void BrokerCore::on_message(ConnId conn, const std::string& peer_address,
                            const proto::Message& msg) {
    std::lock_guard lock(mu_);
    if (const auto* reg = std::get_if<proto::Register>(&msg)) {
        handle_register(conn, peer_address, *reg);
    } else if (const auto* hb = std::get_if<proto::Heartbeat>(&msg)) {
        registry_.heartbeat(hb->node, clock_.now());
    } else if (const auto* query = std::get_if<proto::Query>(&msg)) {
        handle_query(conn, *query);
    } else if (const auto* resp = std::get_if<proto::Response>(&msg)) {
        handle_response(conn, *resp);
    } else if (const auto* err = std::get_if<proto::ErrorMsg>(&msg)) {
        handle_error(conn, *err);
    } else {
        // RegisterAck / QueryForward / Unavailable never flow toward the broker.
        send(conn, proto::ErrorMsg{"unexpected-message",
                                   std::string(proto::type_name(msg)) + " is broker-originated"});
    }
}

proto::RegisterAck BrokerCore::register_locked(const proto::NodeId& node,
                                               const std::string& phone,
                                               const std::string& address, ConnId conn) {
    const proto::NodeId derived = proto::derive_node_id(phone);
    if (derived != node) {
        throw IdMismatch("node id " + node.value() + " does not match phone hash " +
                         derived.value());
    }
    registry_.upsert(node, address, clock_.now());
    bind(node, conn);
    ++stats_.registrations;
    emit(TraceEvent::Kind::registered, 0, node, 0, address);
    return proto::RegisterAck{node};
}

void BrokerCore::handle_register(ConnId conn, const std::string& address,
                                 const proto::Register& msg) {
    try {
        send(conn, register_locked(msg.node, msg.phone, address, conn));
    } catch (const EmptyIdentifier& e) {
        send(conn, proto::ErrorMsg{"empty-identifier", e.what()});
    } catch (const IdMismatch& e) {
        send(conn, proto::ErrorMsg{"id-mismatch", e.what()});
    }
}

proto::RegisterAck BrokerCore::register_node(const proto::NodeId& node, const std::string& phone,
                                             const std::string& address, ConnId conn) {
    std::lock_guard lock(mu_);
    return register_locked(node, phone, address, conn);
}

void BrokerCore::handle_query(ConnId conn, const proto::Query& msg) {
    const EpochMs now = clock_.now();
    ++stats_.queries;

    if (!registry_.find(msg.requester, now)) {
        send_error(conn, "unknown-requester", msg.request_id,
                   "requester " + msg.requester.value() + " is not registered");
        return;
    }
    const RequestKey key{msg.requester, msg.request_id};
    if (outstanding_.contains(key)) {
        ++stats_.duplicate_requests;
        send_error(conn, "duplicate-request", msg.request_id,
                   "request " + std::to_string(msg.request_id) + " is still outstanding");
        return;
    }

    // Exactly one of {forward to target, unavailable to requester} happens.
    std::string reason;
    const auto target = registry_.find(msg.target, now);
    if (!target) {
        reason = "unregistered";
    } else if (!target->online) {
        reason = "offline";
    } else {
        auto target_conn = node_conns_.find(msg.target);
        if (target_conn == node_conns_.end()) {
            reason = "offline";
        } else {
            const proto::QueryForward fwd{msg.request_id, msg.requester, msg.target, msg.kind};
            if (send(target_conn->second, fwd)) {
                outstanding_[key] =
                    Outstanding{msg.requester, msg.target, conn, now + cfg_.query_timeout_ms};
                ++stats_.forwards;
                emit(TraceEvent::Kind::query_forwarded, msg.request_id, msg.target);
                return;
            }
            reason = "offline"; // connection died on send
        }
    }
    send(conn, proto::Unavailable{msg.request_id, msg.target, reason});
    ++stats_.unavailable;
    emit(TraceEvent::Kind::unavailable_sent, msg.request_id, msg.target, 0, reason);
}

void BrokerCore::handle_response(ConnId conn, const proto::Response& msg) {
    const EpochMs now = clock_.now();

    // Persist first. Forwarding happens only after the append is durable.
    std::uint64_t pos = 0;
    try {
        pos = store_.append(
            StoredResponse{msg.request_id, msg.requester, msg.target, msg.reading, now});
    } catch (const PersistFailure& e) {
        send_error(conn, "persist-failure", msg.request_id, e.what());
        return;
    }
    ++stats_.responses_persisted;
    emit(TraceEvent::Kind::response_persisted, msg.request_id, msg.target, pos);

    outstanding_.erase(RequestKey{msg.requester, msg.request_id});

    bool delivered = false;
    const auto requester = registry_.find(msg.requester, now);
    if (requester && requester->online) {
        auto requester_conn = node_conns_.find(msg.requester);
        if (requester_conn != node_conns_.end()) {
            delivered = send(requester_conn->second, msg);
        }
    }
    if (delivered) {
        ++stats_.responses_forwarded;
        emit(TraceEvent::Kind::response_forwarded, msg.request_id, msg.requester);
    } else {
        ++stats_.delivery_failures;
        emit(TraceEvent::Kind::delivery_failed, msg.request_id, msg.requester);
    }
}

void BrokerCore::handle_error(ConnId conn, const proto::ErrorMsg& msg) {
    // Agents answer a forward they cannot serve with an error whose detail
    // carries the request id; relay it to the requester that asked.
    const auto request_id = proto::request_id_from_detail(msg.detail);
    if (!request_id) return;

    const auto sender_node = conn_nodes_.find(conn);
    for (auto it = outstanding_.begin(); it != outstanding_.end(); ++it) {
        if (it->first.second != *request_id) continue;
        if (sender_node != conn_nodes_.end() && it->second.target != sender_node->second) continue;
        const ConnId requester_conn = it->second.requester_conn;
        outstanding_.erase(it);
        send(requester_conn, msg);
        emit(TraceEvent::Kind::error_sent, *request_id, proto::NodeId{}, 0, msg.code);
        return;
    }
}

void BrokerCore::on_disconnect(ConnId conn) {
    std::lock_guard lock(mu_);
    auto it = conn_nodes_.find(conn);
    if (it == conn_nodes_.end()) return;
    node_conns_.erase(it->second);
    conn_nodes_.erase(it);
    // The registry record stays; liveness decays via the heartbeat timeout.
}

void BrokerCore::tick(EpochMs now) {
    std::lock_guard lock(mu_);
    const std::size_t expired = registry_.expire_stale(now);
    if (expired > 0) {
        emit(TraceEvent::Kind::nodes_expired, 0, proto::NodeId{}, 0, std::to_string(expired));
    }
    for (auto it = outstanding_.begin(); it != outstanding_.end();) {
        if (now >= it->second.deadline) {
            const Outstanding entry = it->second;
            const std::uint64_t request_id = it->first.second;
            it = outstanding_.erase(it);
            send(entry.requester_conn, proto::Unavailable{request_id, entry.target, "timeout"});
            ++stats_.query_timeouts;
            ++stats_.unavailable;
            emit(TraceEvent::Kind::query_timed_out, request_id, entry.target);
        } else {
            ++it;
        }
    }
}

NodeRecord BrokerCore::lookup(const proto::NodeId& node) const {
    std::lock_guard lock(mu_);
    return registry_.lookup(node, clock_.now());
}

std::size_t BrokerCore::expire_stale(EpochMs now) {
    std::lock_guard lock(mu_);
    return registry_.expire_stale(now);
}

std::vector<StoredResponse> BrokerCore::query_store(const StoreFilter& filter) const {
    std::lock_guard lock(mu_);
    return store_.query(filter);
}

BrokerStats BrokerCore::stats() const {
    std::lock_guard lock(mu_);
    return stats_;
}

} // namespace senserelay::broker
