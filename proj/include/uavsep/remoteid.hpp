#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavsep/vec2.hpp"

// Remote ID broadcast messages, their binary wire encoding, and the safety
// disk sizing policies built on them.
//
// Wire layout, little-endian throughout:
//
//   offset size field
//   0      16   uav_id, opaque bytes
//   16     8    timestamp, uint64, microseconds
//   24     4    position.x, int32, centimeters
//   28     4    position.y, int32, centimeters
//   32     4    velocity.x, int32, cm/s
//   36     4    velocity.y, int32, cm/s
//   40     4    control_station.x, int32, centimeters
//   44     4    control_station.y, int32, centimeters
//   48     1    flags: bits 0-1 format code (0 standard, 1 candidate1,
//               2 candidate2), bit 2 emergency, bits 3-7 reserved (zero)
//   49     2    loc_error, uint16, centimeters   (candidate1, candidate2)
//   51     2    airframe, uint16, centimeters    (candidate2)
//
// Total payload: 49 bytes (standard), 51 (candidate1), 53 (candidate2).

namespace uavsep::rid {

enum class MessageFormat {
    SnmacBaseline,  // fixed-size control policy; broadcasts standard messages
    Standard,
    Candidate1,  // adds measured localization error
    Candidate2,  // adds measured localization error and actual airframe size
};

std::string format_name(MessageFormat f);
MessageFormat parse_format(const std::string& name);

// The wire format a vehicle broadcasts under a given disk policy.
MessageFormat wire_format_for(MessageFormat policy);

struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EncodeOverflow final : CodecError {
    using CodecError::CodecError;
};
struct MalformedMessage final : CodecError {
    using CodecError::CodecError;
};

struct RemoteIdMessage {
    std::array<std::uint8_t, 16> uav_id{};
    double timestamp = 0.0;  // s, monotonic simulation time
    Vec2 position;           // m, reported
    Vec2 velocity;           // m/s, reported
    Vec2 control_station;    // m, constant per vehicle
    bool emergency = false;
    std::optional<double> loc_error;  // m, reported 3-sigma bound
    std::optional<double> airframe;   // m, reported d_AF

    bool operator==(const RemoteIdMessage&) const = default;
};

inline constexpr std::size_t kStandardSize = 49;
inline constexpr std::size_t kCandidate1Size = 51;
inline constexpr std::size_t kCandidate2Size = 53;

std::vector<std::uint8_t> encode(const RemoteIdMessage& msg, MessageFormat format);
RemoteIdMessage decode(std::span<const std::uint8_t> bytes);

// Line-delimited JSON debug representation (same field names as the struct).
nlohmann::json to_debug_json(const RemoteIdMessage& msg);
RemoteIdMessage from_debug_json(const nlohmann::json& j);

// One of the four disk sizing rules. af_max is the largest airframe assumed
// when the actual size is not broadcast; eps_upper_bound is the conservative
// localization error assumed when no measured error is broadcast.
struct SafetyDiskPolicy {
    MessageFormat format = MessageFormat::Standard;
    double af_max = 7.5;           // m
    double eps_upper_bound = 80.0;  // m
};

// Per-vehicle safety disk radius derived from a received message. The
// pairwise avoidance radius is the Minkowski sum r_i + r_j.
//
//   snmac baseline: af_max                        (fixed; pairwise 2*af_max)
//   standard:       af_max + eps_upper + |v|*dt
//   candidate1:     af_max + loc_error + |v|*dt
//   candidate2:     airframe/2 + loc_error + |v|*dt
//
// The airframe term for policies without size information is the full af_max
// (the legacy doubled-size convention); with the actual size known it tightens
// to the physical radius, making the pairwise airframe term exactly the MAC
// threshold. A message may carry more fields than the policy needs.
double disk_radius(const SafetyDiskPolicy& policy, const RemoteIdMessage& msg, double dt);

} // namespace uavsep::rid
