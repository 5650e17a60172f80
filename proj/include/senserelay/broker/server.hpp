#pragma once

#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "senserelay/broker/core.hpp"
#include "senserelay/broker/store.hpp"
#include "senserelay/clock.hpp"
#include "senserelay/net/socket.hpp"

namespace senserelay::broker {

// TCP front end: accepts connections, feeds decoded frames into BrokerCore,
// writes core-originated messages back out. One reader thread per
// connection; the accept loop never takes the core lock, so a slow handler
// cannot stall new connections.
class BrokerServer {
public:
    struct Options {
        std::string listen = "127.0.0.1:0";
        std::string store_path = "./responses.jsonl";
        BrokerConfig config;
        EpochMs tick_interval_ms = 50;
    };

    // Opens (replaying) the store and binds the listen socket; throws on
    // either failing.
    BrokerServer(Options options, const Clock& clock);
    ~BrokerServer();

    void start();
    void stop();

    // Actual bound address (resolves an ephemeral port).
    std::string listen_address() const { return listener_.local_address(); }

    BrokerCore& core() { return *core_; }
    FileResponseStore& store() { return *store_; }

private:
    struct Connection {
        net::TcpStream stream;
        std::mutex write_mu;
        std::string peer;
    };

    void accept_loop();
    void connection_loop(ConnId id, std::shared_ptr<Connection> conn);
    void ticker_loop();
    bool send_to(ConnId id, const proto::Message& msg);

    Options options_;
    const Clock& clock_;
    std::unique_ptr<FileResponseStore> store_;
    std::unique_ptr<BrokerCore> core_;
    net::TcpListener listener_;

    std::mutex conns_mu_;
    std::map<ConnId, std::shared_ptr<Connection>> conns_;
    ConnId next_conn_id_ = 1;

    std::thread accept_thread_;
    std::thread ticker_thread_;
    std::mutex lifecycle_mu_;
    std::condition_variable lifecycle_cv_;
    std::size_t live_readers_ = 0;
    bool stopping_ = false;
    bool started_ = false;
};

} // namespace senserelay::broker
