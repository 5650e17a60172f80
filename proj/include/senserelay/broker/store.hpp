#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "senserelay/clock.hpp"
#include "senserelay/proto/message.hpp"

namespace senserelay::broker {

// A persisted query response: the wire response plus the broker-assigned
// persistence timestamp.
struct StoredResponse {
    std::uint64_t request_id = 0;
    proto::NodeId requester;
    proto::NodeId target;
    proto::SensorReading reading;
    EpochMs stored_at = 0;

    bool operator==(const StoredResponse&) const = default;
};

struct StoreFilter {
    std::optional<proto::NodeId> target;
    std::optional<proto::SensorKind> kind;
    std::optional<EpochMs> since; // stored_at >= since
};

nlohmann::json to_json(const StoredResponse& row);
StoredResponse stored_response_from_json(const nlohmann::json& j);

// Append-only response persistence. Interface so tests can inject failures.
class ResponseStore {
public:
    virtual ~ResponseStore() = default;

    // Returns the 0-based append position. Throws PersistFailure; on return
    // the row is durably written.
    virtual std::uint64_t append(const StoredResponse& row) = 0;

    // Matching rows in stored_at order (append order for equal stamps).
    virtual std::vector<StoredResponse> query(const StoreFilter& filter) const = 0;

    virtual std::size_t size() const = 0;
};

// One JSON document per line, fsync after every append. Reopening replays
// the file; a torn trailing line (crash mid-append) is dropped, any other
// corruption is an error.
class FileResponseStore final : public ResponseStore {
public:
    explicit FileResponseStore(const std::string& path);
    ~FileResponseStore() override;

    FileResponseStore(const FileResponseStore&) = delete;
    FileResponseStore& operator=(const FileResponseStore&) = delete;

    std::uint64_t append(const StoredResponse& row) override;
    std::vector<StoredResponse> query(const StoreFilter& filter) const override;
    std::size_t size() const override { return rows_.size(); }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    int fd_ = -1;
    std::vector<StoredResponse> rows_; // append order
};

// Read-only replay, used by store-dump. Tolerates a torn trailing line.
std::vector<StoredResponse> read_store_file(const std::string& path);

bool matches(const StoredResponse& row, const StoreFilter& filter);

} // namespace senserelay::broker
