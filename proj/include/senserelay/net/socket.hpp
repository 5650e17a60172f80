#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>

namespace senserelay::net {

// Thin RAII wrappers over POSIX TCP sockets. Errors throw senserelay::Error.

class TcpStream {
public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    ~TcpStream();

    TcpStream(TcpStream&& other) noexcept;
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;

    static TcpStream connect(const std::string& address); // "host:port"

    bool valid() const { return fd_ >= 0; }

    // Returns 0 on orderly EOF (or after shutdown()); throws on error.
    std::size_t read_some(void* buf, std::size_t len);
    void write_all(const void* buf, std::size_t len);

    // Wakes up a blocked reader; safe to call from another thread.
    void shutdown();
    void close();

    std::string peer_address() const;
    std::string local_address() const;

private:
    int fd_ = -1;
};

class TcpListener {
public:
    TcpListener() = default;
    ~TcpListener();

    TcpListener(TcpListener&& other) noexcept;
    TcpListener& operator=(TcpListener&& other) noexcept;
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    // Port 0 binds an ephemeral port; local_address() reports the real one.
    static TcpListener bind(const std::string& address);

    // Blocks until a connection arrives or close() is called (nullopt).
    std::optional<TcpStream> accept();

    void close();
    std::string local_address() const;
    bool valid() const { return fd_ >= 0; }

private:
    int fd_ = -1;
    std::shared_ptr<std::atomic<bool>> closed_ = std::make_shared<std::atomic<bool>>(false);
};

} // namespace senserelay::net
