#include "uavsep/remoteid.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace uavsep::rid {

namespace {

constexpr std::uint8_t kFormatMask = 0x03;
constexpr std::uint8_t kEmergencyBit = 0x04;
constexpr std::uint8_t kReservedMask = 0xf8;

std::int64_t to_scaled(double value, double scale, double max_abs, const char* field) {
    if (!std::isfinite(value) || std::abs(value) > max_abs) {
        throw EncodeOverflow(std::string(field) + " out of representable range");
    }
    return std::llround(value * scale);
}

std::int32_t to_cm_i32(double meters, const char* field) {
    const double max_m = static_cast<double>(std::numeric_limits<std::int32_t>::max()) / 100.0;
    return static_cast<std::int32_t>(to_scaled(meters, 100.0, max_m, field));
}

std::uint16_t to_cm_u16(double meters, const char* field) {
    if (!std::isfinite(meters) || meters < 0.0 || meters > 655.35) {
        throw EncodeOverflow(std::string(field) + " out of representable range");
    }
    return static_cast<std::uint16_t>(std::llround(meters * 100.0));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
    return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
    return v;
}

std::uint8_t format_code(MessageFormat f) {
    switch (f) {
        case MessageFormat::Standard: return 0;
        case MessageFormat::Candidate1: return 1;
        case MessageFormat::Candidate2: return 2;
        case MessageFormat::SnmacBaseline: break;
    }
    throw MalformedMessage("snmac baseline is not a wire format");
}

std::size_t expected_size(std::uint8_t code) {
    switch (code) {
        case 0: return kStandardSize;
        case 1: return kCandidate1Size;
        case 2: return kCandidate2Size;
        default: throw MalformedMessage("unknown format code");
    }
}

} // namespace

std::string format_name(MessageFormat f) {
    switch (f) {
        case MessageFormat::SnmacBaseline: return "snmac";
        case MessageFormat::Standard: return "standard";
        case MessageFormat::Candidate1: return "candidate1";
        case MessageFormat::Candidate2: return "candidate2";
    }
    return "unknown";
}

MessageFormat parse_format(const std::string& name) {
    if (name == "snmac") return MessageFormat::SnmacBaseline;
    if (name == "standard") return MessageFormat::Standard;
    if (name == "candidate1") return MessageFormat::Candidate1;
    if (name == "candidate2") return MessageFormat::Candidate2;
    throw std::invalid_argument("unknown message format: " + name);
}

MessageFormat wire_format_for(MessageFormat policy) {
    return policy == MessageFormat::SnmacBaseline ? MessageFormat::Standard : policy;
}

std::vector<std::uint8_t> encode(const RemoteIdMessage& msg, MessageFormat format) {
    const std::uint8_t code = format_code(format);
    const bool wants_loc = code >= 1;
    const bool wants_af = code == 2;
    if (msg.loc_error.has_value() != wants_loc) {
        throw MalformedMessage("loc_error presence inconsistent with format");
    }
    if (msg.airframe.has_value() != wants_af) {
        throw MalformedMessage("airframe presence inconsistent with format");
    }
    if (!(msg.timestamp >= 0.0) || msg.timestamp > 1e12) {
        throw EncodeOverflow("timestamp out of representable range");
    }

    std::vector<std::uint8_t> out;
    out.reserve(expected_size(code));
    out.insert(out.end(), msg.uav_id.begin(), msg.uav_id.end());
    put_u64(out, static_cast<std::uint64_t>(std::llround(msg.timestamp * 1e6)));
    put_u32(out, static_cast<std::uint32_t>(to_cm_i32(msg.position.x, "position.x")));
    put_u32(out, static_cast<std::uint32_t>(to_cm_i32(msg.position.y, "position.y")));
    put_u32(out, static_cast<std::uint32_t>(to_cm_i32(msg.velocity.x, "velocity.x")));
    put_u32(out, static_cast<std::uint32_t>(to_cm_i32(msg.velocity.y, "velocity.y")));
    put_u32(out, static_cast<std::uint32_t>(to_cm_i32(msg.control_station.x, "control_station.x")));
    put_u32(out, static_cast<std::uint32_t>(to_cm_i32(msg.control_station.y, "control_station.y")));
    out.push_back(static_cast<std::uint8_t>(code | (msg.emergency ? kEmergencyBit : 0)));
    if (wants_loc) put_u16(out, to_cm_u16(*msg.loc_error, "loc_error"));
    if (wants_af) {
        const std::uint16_t af_cm = to_cm_u16(*msg.airframe, "airframe");
        if (af_cm == 0) throw EncodeOverflow("airframe rounds to zero");
        put_u16(out, af_cm);
    }
    return out;
}

RemoteIdMessage decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kStandardSize && bytes.size() != kCandidate1Size &&
        bytes.size() != kCandidate2Size) {
        throw MalformedMessage("bad payload length");
    }
    const std::uint8_t flags = bytes[48];
    if (flags & kReservedMask) throw MalformedMessage("reserved flag bits set");
    const std::uint8_t code = flags & kFormatMask;
    if (expected_size(code) != bytes.size()) {
        throw MalformedMessage("format code inconsistent with payload length");
    }

    RemoteIdMessage msg;
    std::memcpy(msg.uav_id.data(), bytes.data(), msg.uav_id.size());
    msg.timestamp = static_cast<double>(get_u64(bytes, 16)) * 1e-6;
    msg.position = {static_cast<std::int32_t>(get_u32(bytes, 24)) / 100.0,
                    static_cast<std::int32_t>(get_u32(bytes, 28)) / 100.0};
    msg.velocity = {static_cast<std::int32_t>(get_u32(bytes, 32)) / 100.0,
                    static_cast<std::int32_t>(get_u32(bytes, 36)) / 100.0};
    msg.control_station = {static_cast<std::int32_t>(get_u32(bytes, 40)) / 100.0,
                           static_cast<std::int32_t>(get_u32(bytes, 44)) / 100.0};
    msg.emergency = (flags & kEmergencyBit) != 0;
    if (code >= 1) msg.loc_error = get_u16(bytes, 49) / 100.0;
    if (code == 2) msg.airframe = get_u16(bytes, 51) / 100.0;
    return msg;
}

nlohmann::json to_debug_json(const RemoteIdMessage& msg) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    id.reserve(32);
    for (std::uint8_t b : msg.uav_id) {
        id.push_back(hex[b >> 4]);
        id.push_back(hex[b & 0xf]);
    }
    nlohmann::json j{
        {"uav_id", id},
        {"timestamp", msg.timestamp},
        {"position", {msg.position.x, msg.position.y}},
        {"velocity", {msg.velocity.x, msg.velocity.y}},
        {"control_station", {msg.control_station.x, msg.control_station.y}},
        {"emergency", msg.emergency},
    };
    if (msg.loc_error) j["loc_error"] = *msg.loc_error;
    if (msg.airframe) j["airframe"] = *msg.airframe;
    return j;
}

RemoteIdMessage from_debug_json(const nlohmann::json& j) {
    RemoteIdMessage msg;
    const auto id = j.at("uav_id").get<std::string>();
    if (id.size() != 32) throw MalformedMessage("uav_id must be 32 hex chars");
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        throw MalformedMessage("uav_id contains a non-hex character");
    };
    for (std::size_t i = 0; i < 16; ++i) {
        msg.uav_id[i] = static_cast<std::uint8_t>((nibble(id[2 * i]) << 4) | nibble(id[2 * i + 1]));
    }
    msg.timestamp = j.at("timestamp").get<double>();
    msg.position = {j.at("position").at(0).get<double>(), j.at("position").at(1).get<double>()};
    msg.velocity = {j.at("velocity").at(0).get<double>(), j.at("velocity").at(1).get<double>()};
    msg.control_station = {j.at("control_station").at(0).get<double>(),
                           j.at("control_station").at(1).get<double>()};
    msg.emergency = j.at("emergency").get<bool>();
    if (j.contains("loc_error")) msg.loc_error = j.at("loc_error").get<double>();
    if (j.contains("airframe")) msg.airframe = j.at("airframe").get<double>();
    return msg;
}

double disk_radius(const SafetyDiskPolicy& policy, const RemoteIdMessage& msg, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("disk_radius: dt must be > 0");
    if (!(policy.af_max > 0.0) || !(policy.eps_upper_bound > 0.0)) {
        throw std::invalid_argument("disk_radius: invalid policy parameters");
    }

    if (policy.format == MessageFormat::SnmacBaseline) {
        return policy.af_max;
    }

    const double mobility = msg.velocity.norm() * dt;
    switch (policy.format) {
        case MessageFormat::Standard:
            return policy.af_max + policy.eps_upper_bound + mobility;
        case MessageFormat::Candidate1: {
            if (!msg.loc_error) throw MalformedMessage("candidate1 policy needs loc_error");
            if (*msg.loc_error < 0.0) throw MalformedMessage("negative loc_error");
            return policy.af_max + *msg.loc_error + mobility;
        }
        case MessageFormat::Candidate2: {
            if (!msg.loc_error) throw MalformedMessage("candidate2 policy needs loc_error");
            if (!msg.airframe) throw MalformedMessage("candidate2 policy needs airframe");
            if (*msg.loc_error < 0.0) throw MalformedMessage("negative loc_error");
            if (!(*msg.airframe > 0.0)) throw MalformedMessage("non-positive airframe");
            return 0.5 * *msg.airframe + *msg.loc_error + mobility;
        }
        case MessageFormat::SnmacBaseline: break;
    }
    throw std::invalid_argument("disk_radius: unknown policy format");
}

} // namespace uavsep::rid
