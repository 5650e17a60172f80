#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "senserelay/agent/provider.hpp"
#include "senserelay/clock.hpp"
#include "senserelay/net/socket.hpp"
#include "senserelay/proto/framing.hpp"

namespace senserelay::agent {

struct AgentConfig {
    std::string phone;
    std::string broker_address;
    std::shared_ptr<SensorProvider> provider;
    EpochMs heartbeat_interval_ms = 5000;
    EpochMs register_timeout_ms = 5000;
};

// What a query came back with. Timeouts and unavailability are ordinary
// outcomes, not failures.
struct QueryOutcome {
    enum class Kind { reading, unavailable, timeout, error };

    Kind kind = Kind::timeout;
    std::optional<proto::SensorReading> reading; // kind == reading
    std::string reason;                          // kind == unavailable
    std::string error_code;                      // kind == error
    std::string error_detail;
};

// A simulated phone: registers with the broker over one TCP connection,
// heartbeats, serves inbound query forwards from its provider, and issues
// outbound queries. The broker address is the only address it ever holds.
class Agent {
public:
    Agent(AgentConfig config, const Clock& clock);
    ~Agent();

    Agent(const Agent&) = delete;
    Agent& operator=(const Agent&) = delete;

    // Registers and starts the heartbeat/serve loops. Throws
    // BrokerUnreachable or RegistrationRejected.
    void start();
    void stop();
    bool running() const { return running_.load(); }

    const proto::NodeId& id() const { return id_; }

    // Blocks up to timeout_ms for the response.
    QueryOutcome issue_query(const proto::NodeId& target, proto::SensorKind kind,
                             EpochMs timeout_ms);

    // A paused agent keeps heartbeating but drops inbound query forwards;
    // the broker's query timeout then answers for it.
    void set_paused(bool paused) { paused_.store(paused); }

private:
    void reader_loop();
    void heartbeat_loop();
    void handle_forward(const proto::QueryForward& fwd);
    void resolve(std::uint64_t request_id, QueryOutcome outcome);
    void send(const proto::Message& msg);
    void fail_all_pending();

    AgentConfig config_;
    const Clock& clock_;
    proto::NodeId id_;

    net::TcpStream stream_;
    std::mutex write_mu_;

    std::mutex pending_mu_;
    std::map<std::uint64_t, std::promise<QueryOutcome>> pending_;
    std::atomic<std::uint64_t> next_request_id_{1};

    // nullopt = accepted; an ErrorMsg = rejected (or connection lost).
    std::promise<std::optional<proto::ErrorMsg>> reg_promise_;
    std::atomic<bool> reg_resolved_{false};

    std::mutex provider_mu_;

    std::thread reader_;
    std::thread heartbeat_;
    std::mutex hb_mu_;
    std::condition_variable hb_cv_;

    std::atomic<bool> running_{false};
    std::atomic<bool> paused_{false};
    std::atomic<bool> stopping_{false};
};

} // namespace senserelay::agent
