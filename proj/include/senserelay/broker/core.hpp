#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "senserelay/broker/registry.hpp"
#include "senserelay/broker/store.hpp"
#include "senserelay/clock.hpp"
#include "senserelay/proto/message.hpp"

namespace senserelay::broker {

// Transport connection handle. 0 means "no connection" (direct API use).
using ConnId = std::uint64_t;

struct BrokerConfig {
    EpochMs liveness_timeout_ms = 15000;
    EpochMs heartbeat_interval_ms = 5000; // advertised cadence; agents own theirs
    EpochMs query_timeout_ms = 10000;
};

// Instrumentation record. seq is a total order over everything the core
// does, which is what the store-before-forward assertions consume.
struct TraceEvent {
    enum class Kind {
        registered,
        query_forwarded,
        unavailable_sent,
        response_persisted,
        response_forwarded,
        delivery_failed,
        error_sent,
        query_timed_out,
        nodes_expired,
    };

    Kind kind;
    std::uint64_t seq = 0;
    std::uint64_t request_id = 0;
    proto::NodeId node;
    std::uint64_t store_pos = 0; // valid for response_persisted
    std::string detail;
};

struct BrokerStats {
    std::uint64_t registrations = 0;
    std::uint64_t queries = 0;
    std::uint64_t forwards = 0;
    std::uint64_t unavailable = 0;
    std::uint64_t responses_persisted = 0;
    std::uint64_t responses_forwarded = 0;
    std::uint64_t delivery_failures = 0;
    std::uint64_t duplicate_requests = 0;
    std::uint64_t query_timeouts = 0;
};

// Relay logic, transport-agnostic. One mutex serializes everything, which
// gives linearizable registry access, a totally ordered persistence stream,
// and atomic per-request state transitions. The transport calls on_message /
// on_disconnect and periodically tick(); outgoing messages go through the
// injected sender, which must not call back into the core.
class BrokerCore {
public:
    // Returns false when the connection is gone; the core then treats the
    // message as undeliverable.
    using Sender = std::function<bool(ConnId, const proto::Message&)>;
    using TraceSink = std::function<void(const TraceEvent&)>;

    BrokerCore(BrokerConfig cfg, const Clock& clock, ResponseStore& store, Sender sender);

    // Install before serving traffic; invoked with the core lock held.
    void set_trace_sink(TraceSink sink);

    void on_message(ConnId conn, const std::string& peer_address, const proto::Message& msg);
    void on_disconnect(ConnId conn);

    // Expires stale nodes and times out outstanding forwards.
    void tick(EpochMs now);

    // Direct operations (the wire path goes through on_message).
    proto::RegisterAck register_node(const proto::NodeId& node, const std::string& phone,
                                     const std::string& address, ConnId conn = 0);
    NodeRecord lookup(const proto::NodeId& node) const; // throws NotFound
    std::size_t expire_stale(EpochMs now);
    std::vector<StoredResponse> query_store(const StoreFilter& filter) const;

    BrokerStats stats() const;
    const BrokerConfig& config() const { return cfg_; }

private:
    struct Outstanding {
        proto::NodeId requester;
        proto::NodeId target;
        ConnId requester_conn = 0;
        EpochMs deadline = 0;
    };
    using RequestKey = std::pair<proto::NodeId, std::uint64_t>;

    proto::RegisterAck register_locked(const proto::NodeId& node, const std::string& phone,
                                       const std::string& address, ConnId conn);
    void handle_register(ConnId conn, const std::string& address, const proto::Register& msg);
    void handle_query(ConnId conn, const proto::Query& msg);
    void handle_response(ConnId conn, const proto::Response& msg);
    void handle_error(ConnId conn, const proto::ErrorMsg& msg);

    void bind(const proto::NodeId& node, ConnId conn);
    bool send(ConnId conn, const proto::Message& msg);
    void send_error(ConnId conn, const std::string& code, std::uint64_t request_id,
                    const std::string& note);
    void emit(TraceEvent::Kind kind, std::uint64_t request_id, const proto::NodeId& node,
              std::uint64_t store_pos = 0, const std::string& detail = {});

    mutable std::mutex mu_;
    BrokerConfig cfg_;
    const Clock& clock_;
    ResponseStore& store_;
    Sender sender_;
    TraceSink trace_;
    Registry registry_;
    std::map<proto::NodeId, ConnId> node_conns_;
    std::map<ConnId, proto::NodeId> conn_nodes_;
    std::map<RequestKey, Outstanding> outstanding_;
    BrokerStats stats_;
    std::uint64_t trace_seq_ = 0;
};

} // namespace senserelay::broker
