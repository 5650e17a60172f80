#include "senserelay/net/socket.hpp"

#include <cerrno>
#include <cstring>
#include <utility>

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "senserelay/errors.hpp"
#include "senserelay/util/strings.hpp"

namespace senserelay::net {

namespace {

std::string errno_text() {
    return std::strerror(errno);
}

std::string format_endpoint(const sockaddr_storage& ss, socklen_t len) {
    char host[NI_MAXHOST];
    char serv[NI_MAXSERV];
    if (::getnameinfo(reinterpret_cast<const sockaddr*>(&ss), len, host, sizeof(host), serv,
                      sizeof(serv), NI_NUMERICHOST | NI_NUMERICSERV) != 0) {
        return "unknown:0";
    }
    std::string h(host);
    if (h.find(':') != std::string::npos) h = "[" + h + "]"; // IPv6
    return h + ":" + serv;
}

struct AddrInfoDeleter {
    void operator()(addrinfo* p) const { ::freeaddrinfo(p); }
};
using AddrInfoPtr = std::unique_ptr<addrinfo, AddrInfoDeleter>;

AddrInfoPtr resolve(const std::string& address, bool passive) {
    const auto [host, port] = split_host_port(address);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) hints.ai_flags = AI_PASSIVE;
    addrinfo* result = nullptr;
    const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &result);
    if (rc != 0) {
        throw Error("cannot resolve '" + address + "': " + ::gai_strerror(rc));
    }
    return AddrInfoPtr(result);
}

} // namespace

TcpStream::~TcpStream() {
    close();
}

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

TcpStream TcpStream::connect(const std::string& address) {
    const AddrInfoPtr addrs = resolve(address, false);
    std::string last_error = "no addresses";
    for (addrinfo* ai = addrs.get(); ai != nullptr; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_error = errno_text();
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            return TcpStream(fd);
        }
        last_error = errno_text();
        ::close(fd);
    }
    throw Error("cannot connect to " + address + ": " + last_error);
}

std::size_t TcpStream::read_some(void* buf, std::size_t len) {
    while (true) {
        const ssize_t n = ::recv(fd_, buf, len, 0);
        if (n >= 0) return static_cast<std::size_t>(n);
        if (errno == EINTR) continue;
        throw Error(std::string("recv failed: ") + errno_text());
    }
}

void TcpStream::write_all(const void* buf, std::size_t len) {
    const auto* p = static_cast<const std::uint8_t*>(buf);
    std::size_t written = 0;
    while (written < len) {
        const ssize_t n = ::send(fd_, p + written, len - written, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(std::string("send failed: ") + errno_text());
        }
        written += static_cast<std::size_t>(n);
    }
}

void TcpStream::shutdown() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void TcpStream::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

std::string TcpStream::peer_address() const {
    sockaddr_storage ss{};
    socklen_t len = sizeof(ss);
    if (::getpeername(fd_, reinterpret_cast<sockaddr*>(&ss), &len) != 0) return "unknown:0";
    return format_endpoint(ss, len);
}

std::string TcpStream::local_address() const {
    sockaddr_storage ss{};
    socklen_t len = sizeof(ss);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&ss), &len) != 0) return "unknown:0";
    return format_endpoint(ss, len);
}

TcpListener::~TcpListener() {
    close();
}

TcpListener::TcpListener(TcpListener&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), closed_(std::move(other.closed_)) {}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
        closed_ = std::move(other.closed_);
    }
    return *this;
}

TcpListener TcpListener::bind(const std::string& address) {
    const AddrInfoPtr addrs = resolve(address, true);
    std::string last_error = "no addresses";
    for (addrinfo* ai = addrs.get(); ai != nullptr; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_error = errno_text();
            continue;
        }
        const int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 128) == 0) {
            TcpListener listener;
            listener.fd_ = fd;
            return listener;
        }
        last_error = errno_text();
        ::close(fd);
    }
    throw Error("cannot bind " + address + ": " + last_error);
}

std::optional<TcpStream> TcpListener::accept() {
    const auto closed = closed_;
    while (!closed->load()) {
        pollfd pfd{fd_, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, 100);
        if (closed->load()) return std::nullopt;
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw Error(std::string("poll failed: ") + errno_text());
        }
        if (rc == 0) continue;
        const int fd = ::accept(fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR || errno == ECONNABORTED) continue;
            return std::nullopt; // listener torn down
        }
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        return TcpStream(fd);
    }
    return std::nullopt;
}

void TcpListener::close() {
    closed_->store(true);
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

std::string TcpListener::local_address() const {
    sockaddr_storage ss{};
    socklen_t len = sizeof(ss);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&ss), &len) != 0) return "unknown:0";
    return format_endpoint(ss, len);
}

} // namespace senserelay::net
