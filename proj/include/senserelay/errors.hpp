#pragma once

#include <stdexcept>
#include <string>

namespace senserelay {

// Base class for every error this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- wire protocol ---

// Serialized frame body would exceed the 64 KiB cap, or a frame declares
// a length above the cap.
struct OversizeMessage : Error {
    using Error::Error;
};

// Fewer bytes available than the length prefix promises.
struct TruncatedFrame : Error {
    using Error::Error;
};

// Invalid JSON, missing/unknown discriminant, or an invariant violation.
struct MalformedPayload : Error {
    using Error::Error;
};

// Phone identifier normalizes to the empty string.
struct EmptyIdentifier : Error {
    using Error::Error;
};

// --- models / simulation ---

struct InvalidParams : Error {
    using Error::Error;
};

// Simulation result does not belong to the parameters it is compared against.
struct MismatchedParams : Error {
    using Error::Error;
};

// --- broker ---

// Register carried a node id that is not the hash of the phone it claims.
struct IdMismatch : Error {
    using Error::Error;
};

struct NotFound : Error {
    using Error::Error;
};

// Append to the response store failed; forwarding is aborted.
struct PersistFailure : Error {
    using Error::Error;
};

// --- agent ---

struct BrokerUnreachable : Error {
    using Error::Error;
};

struct RegistrationRejected : Error {
    using Error::Error;
};

} // namespace senserelay
