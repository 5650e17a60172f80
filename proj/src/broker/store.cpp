#include "senserelay/broker/store.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include "senserelay/errors.hpp"

namespace senserelay::broker {

namespace {

using nlohmann::json;

std::string errno_text() {
    return std::strerror(errno);
}

// Parses every complete line; drops a torn final line (no trailing newline)
// so that a crash mid-append never poisons the store.
std::vector<StoredResponse> replay(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();

    std::vector<StoredResponse> rows;
    std::size_t start = 0;
    while (start < content.size()) {
        const std::size_t nl = content.find('\n', start);
        const bool complete = nl != std::string::npos;
        const std::string_view line(content.data() + start,
                                    (complete ? nl : content.size()) - start);
        if (line.empty()) {
            start = complete ? nl + 1 : content.size();
            continue;
        }
        try {
            rows.push_back(stored_response_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            if (!complete) break; // torn tail from a crashed append
            throw PersistFailure("corrupt store row " + std::to_string(rows.size()) + " in " +
                                 path + ": " + e.what());
        }
        start = complete ? nl + 1 : content.size();
    }
    return rows;
}

} // namespace

json to_json(const StoredResponse& row) {
    proto::Response resp{row.request_id, row.requester, row.target, row.reading};
    json j = proto::to_json(proto::Message{resp});
    j["stored_at"] = row.stored_at;
    return j;
}

StoredResponse stored_response_from_json(const json& j) {
    proto::Message msg = proto::message_from_json(j);
    const auto* resp = std::get_if<proto::Response>(&msg);
    if (resp == nullptr) {
        throw MalformedPayload("store row is not a response document");
    }
    auto it = j.find("stored_at");
    if (it == j.end() || !it->is_number_integer()) {
        throw MalformedPayload("store row lacks an integer stored_at");
    }
    return StoredResponse{resp->request_id, resp->requester, resp->target, resp->reading,
                          it->get<EpochMs>()};
}

bool matches(const StoredResponse& row, const StoreFilter& filter) {
    if (filter.target && row.target != *filter.target) return false;
    if (filter.kind && row.reading.kind != *filter.kind) return false;
    if (filter.since && row.stored_at < *filter.since) return false;
    return true;
}

FileResponseStore::FileResponseStore(const std::string& path) : path_(path) {
    rows_ = replay(path);
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd_ < 0) {
        throw PersistFailure("cannot open store " + path + ": " + errno_text());
    }
}

FileResponseStore::~FileResponseStore() {
    if (fd_ >= 0) ::close(fd_);
}

std::uint64_t FileResponseStore::append(const StoredResponse& row) {
    const std::string line = to_json(row).dump() + "\n";
    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw PersistFailure("append to " + path_ + " failed: " + errno_text());
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) {
        throw PersistFailure("fsync of " + path_ + " failed: " + errno_text());
    }
    rows_.push_back(row);
    return rows_.size() - 1;
}

std::vector<StoredResponse> FileResponseStore::query(const StoreFilter& filter) const {
    std::vector<StoredResponse> out;
    for (const StoredResponse& row : rows_) {
        if (matches(row, filter)) out.push_back(row);
    }
    std::stable_sort(out.begin(), out.end(), [](const StoredResponse& a, const StoredResponse& b) {
        return a.stored_at < b.stored_at;
    });
    return out;
}

std::vector<StoredResponse> read_store_file(const std::string& path) {
    return replay(path);
}

} // namespace senserelay::broker
