#include "senserelay/agent/agent.hpp"

#include <chrono>

#include "senserelay/errors.hpp"

namespace senserelay::agent {

namespace {

constexpr const char* kConnectionLost = "connection-lost";

} // namespace

Agent::Agent(AgentConfig config, const Clock& clock)
    : config_(std::move(config)), clock_(clock) {}

Agent::~Agent() {
    stop();
}

void Agent::start() {
    if (running_.load()) return;
    stopping_.store(false);

    id_ = proto::derive_node_id(config_.phone);
    if (config_.provider) config_.provider->set_origin(id_);

    try {
        stream_ = net::TcpStream::connect(config_.broker_address);
    } catch (const Error& e) {
        throw BrokerUnreachable(e.what());
    }

    reg_promise_ = {};
    auto reg_future = reg_promise_.get_future();
    reg_resolved_.store(false);
    reader_ = std::thread([this] { reader_loop(); });

    if (!send(proto::Register{id_, config_.phone})) {
        stop();
        throw BrokerUnreachable("could not send registration to " + config_.broker_address);
    }
    if (reg_future.wait_for(std::chrono::milliseconds(config_.register_timeout_ms)) !=
        std::future_status::ready) {
        stop();
        throw BrokerUnreachable("no registration ack from " + config_.broker_address);
    }
    const auto rejection = reg_future.get();
    if (rejection) {
        stop();
        if (rejection->code == kConnectionLost) {
            throw BrokerUnreachable("broker closed the connection during registration");
        }
        throw RegistrationRejected(rejection->code + ": " + rejection->detail);
    }

    running_.store(true);
    heartbeat_ = std::thread([this] { heartbeat_loop(); });
}

void Agent::stop() {
    stopping_.store(true);
    hb_cv_.notify_all();
    stream_.shutdown();
    if (heartbeat_.joinable()) heartbeat_.join();
    if (reader_.joinable()) reader_.join();
    stream_.close();
    running_.store(false);
}

void Agent::reader_loop() {
    proto::FrameBuffer frames;
    std::uint8_t buf[4096];
    try {
        while (true) {
            const std::size_t n = stream_.read_some(buf, sizeof(buf));
            if (n == 0) break;
            frames.feed({buf, n});
            while (auto msg = frames.next()) {
                if (const auto* ack = std::get_if<proto::RegisterAck>(&*msg)) {
                    if (ack->node == id_ && !reg_resolved_.exchange(true)) {
                        reg_promise_.set_value(std::nullopt);
                    }
                } else if (const auto* fwd = std::get_if<proto::QueryForward>(&*msg)) {
                    handle_forward(*fwd);
                } else if (const auto* resp = std::get_if<proto::Response>(&*msg)) {
                    QueryOutcome outcome;
                    outcome.kind = QueryOutcome::Kind::reading;
                    outcome.reading = resp->reading;
                    resolve(resp->request_id, std::move(outcome));
                } else if (const auto* unavailable = std::get_if<proto::Unavailable>(&*msg)) {
                    QueryOutcome outcome;
                    outcome.kind = QueryOutcome::Kind::unavailable;
                    outcome.reason = unavailable->reason;
                    resolve(unavailable->request_id, std::move(outcome));
                } else if (const auto* err = std::get_if<proto::ErrorMsg>(&*msg)) {
                    if (const auto request_id = proto::request_id_from_detail(err->detail)) {
                        QueryOutcome outcome;
                        outcome.kind = QueryOutcome::Kind::error;
                        outcome.error_code = err->code;
                        outcome.error_detail = err->detail;
                        resolve(*request_id, std::move(outcome));
                    } else if (!reg_resolved_.exchange(true)) {
                        reg_promise_.set_value(*err);
                    }
                }
                // Register/Heartbeat/Query never flow toward an agent; ignore.
            }
        }
    } catch (const Error&) {
        // Connection torn down; fall through to cleanup.
    }
    if (!reg_resolved_.exchange(true)) {
        reg_promise_.set_value(proto::ErrorMsg{kConnectionLost, ""});
    }
    fail_all_pending();
    running_.store(false);
}

void Agent::handle_forward(const proto::QueryForward& fwd) {
    if (paused_.load()) return; // no reply; the broker's query timeout answers

    std::optional<proto::SensorReading> reading;
    {
        std::lock_guard lock(provider_mu_);
        if (config_.provider) reading = config_.provider->read(fwd.kind, clock_.now());
    }
    if (reading) {
        send(proto::Response{fwd.request_id, fwd.requester, fwd.target, *reading});
    } else {
        send(proto::ErrorMsg{
            "unsupported-sensor",
            proto::correlated_detail(fwd.request_id,
                                     std::string(proto::to_string(fwd.kind)) + " not available")});
    }
}

QueryOutcome Agent::issue_query(const proto::NodeId& target, proto::SensorKind kind,
                                EpochMs timeout_ms) {
    if (!running_.load()) throw Error("agent is not running");

    const std::uint64_t request_id = next_request_id_.fetch_add(1);
    std::future<QueryOutcome> future;
    {
        std::lock_guard lock(pending_mu_);
        future = pending_[request_id].get_future();
    }

    if (!send(proto::Query{request_id, id_, target, kind})) {
        std::lock_guard lock(pending_mu_);
        pending_.erase(request_id);
        QueryOutcome outcome;
        outcome.kind = QueryOutcome::Kind::error;
        outcome.error_code = kConnectionLost;
        return outcome;
    }

    if (future.wait_for(std::chrono::milliseconds(timeout_ms)) == std::future_status::ready) {
        return future.get();
    }
    {
        std::lock_guard lock(pending_mu_);
        if (pending_.erase(request_id) > 0) {
            QueryOutcome outcome;
            outcome.kind = QueryOutcome::Kind::timeout;
            return outcome;
        }
    }
    // The reader grabbed the promise right at the deadline; take its answer.
    return future.get();
}

void Agent::resolve(std::uint64_t request_id, QueryOutcome outcome) {
    std::promise<QueryOutcome> promise;
    {
        std::lock_guard lock(pending_mu_);
        auto it = pending_.find(request_id);
        if (it == pending_.end()) return; // late answer; caller already gone
        promise = std::move(it->second);
        pending_.erase(it);
    }
    promise.set_value(std::move(outcome));
}

void Agent::fail_all_pending() {
    std::map<std::uint64_t, std::promise<QueryOutcome>> orphaned;
    {
        std::lock_guard lock(pending_mu_);
        orphaned.swap(pending_);
    }
    for (auto& [id, promise] : orphaned) {
        QueryOutcome outcome;
        outcome.kind = QueryOutcome::Kind::error;
        outcome.error_code = kConnectionLost;
        promise.set_value(std::move(outcome));
    }
}

bool Agent::send(const proto::Message& msg) {
    try {
        const auto frame = proto::encode_message(msg);
        std::lock_guard lock(write_mu_);
        stream_.write_all(frame.data(), frame.size());
        return true;
    } catch (const Error&) {
        return false;
    }
}

void Agent::heartbeat_loop() {
    std::unique_lock lock(hb_mu_);
    while (!stopping_.load()) {
        hb_cv_.wait_for(lock, std::chrono::milliseconds(config_.heartbeat_interval_ms),
                        [this] { return stopping_.load(); });
        if (stopping_.load()) return;
        lock.unlock();
        send(proto::Heartbeat{id_});
        lock.lock();
    }
}

} // namespace senserelay::agent
