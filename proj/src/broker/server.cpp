#include "senserelay/broker/server.hpp"

#include <chrono>

#include "senserelay/errors.hpp"
#include "senserelay/proto/framing.hpp"

namespace senserelay::broker {

BrokerServer::BrokerServer(Options options, const Clock& clock)
    : options_(std::move(options)), clock_(clock) {
    store_ = std::make_unique<FileResponseStore>(options_.store_path);
    core_ = std::make_unique<BrokerCore>(
        options_.config, clock_, *store_,
        [this](ConnId id, const proto::Message& msg) { return send_to(id, msg); });
    listener_ = net::TcpListener::bind(options_.listen);
}

BrokerServer::~BrokerServer() {
    stop();
}

void BrokerServer::start() {
    std::lock_guard lock(lifecycle_mu_);
    if (started_) return;
    started_ = true;
    stopping_ = false;
    accept_thread_ = std::thread([this] { accept_loop(); });
    ticker_thread_ = std::thread([this] { ticker_loop(); });
}

void BrokerServer::stop() {
    {
        std::lock_guard lock(lifecycle_mu_);
        if (!started_ || stopping_) return;
        stopping_ = true;
    }
    lifecycle_cv_.notify_all();
    listener_.close();

    // Wake every reader; they unregister themselves as they exit.
    {
        std::lock_guard lock(conns_mu_);
        for (auto& [id, conn] : conns_) conn->stream.shutdown();
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    if (ticker_thread_.joinable()) ticker_thread_.join();
    {
        std::unique_lock lock(lifecycle_mu_);
        lifecycle_cv_.wait(lock, [this] { return live_readers_ == 0; });
        started_ = false;
    }
}

void BrokerServer::accept_loop() {
    while (true) {
        auto stream = listener_.accept();
        if (!stream) return;
        ConnId id = 0;
        std::shared_ptr<Connection> conn;
        {
            std::lock_guard lock(conns_mu_);
            id = next_conn_id_++;
            conn = std::make_shared<Connection>();
            conn->stream = std::move(*stream);
            conn->peer = conn->stream.peer_address();
            conns_[id] = conn;
        }
        {
            std::lock_guard lock(lifecycle_mu_);
            ++live_readers_;
        }
        std::thread([this, id, conn] { connection_loop(id, conn); }).detach();
    }
}

void BrokerServer::connection_loop(ConnId id, std::shared_ptr<Connection> conn) {
    proto::FrameBuffer frames;
    std::uint8_t buf[4096];
    try {
        while (true) {
            const std::size_t n = conn->stream.read_some(buf, sizeof(buf));
            if (n == 0) break; // EOF or shutdown
            frames.feed({buf, n});
            while (auto msg = frames.next()) {
                core_->on_message(id, conn->peer, *msg);
            }
        }
    } catch (const MalformedPayload& e) {
        // Framing is lost at the first bad frame; tell the peer and hang up.
        send_to(id, proto::ErrorMsg{"malformed", e.what()});
    } catch (const OversizeMessage& e) {
        send_to(id, proto::ErrorMsg{"oversize", e.what()});
    } catch (const Error&) {
        // Socket error; connection is dead either way.
    }

    core_->on_disconnect(id);
    {
        std::lock_guard lock(conns_mu_);
        conns_.erase(id);
    }
    {
        std::lock_guard lock(lifecycle_mu_);
        --live_readers_;
    }
    lifecycle_cv_.notify_all();
}

void BrokerServer::ticker_loop() {
    std::unique_lock lock(lifecycle_mu_);
    while (!stopping_) {
        lifecycle_cv_.wait_for(lock, std::chrono::milliseconds(options_.tick_interval_ms),
                               [this] { return stopping_; });
        if (stopping_) return;
        lock.unlock();
        core_->tick(clock_.now());
        lock.lock();
    }
}

bool BrokerServer::send_to(ConnId id, const proto::Message& msg) {
    std::shared_ptr<Connection> conn;
    {
        std::lock_guard lock(conns_mu_);
        auto it = conns_.find(id);
        if (it == conns_.end()) return false;
        conn = it->second;
    }
    try {
        const auto frame = proto::encode_message(msg);
        std::lock_guard lock(conn->write_mu);
        conn->stream.write_all(frame.data(), frame.size());
        return true;
    } catch (const Error&) {
        return false;
    }
}

} // namespace senserelay::broker
