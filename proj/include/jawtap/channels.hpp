// channels.hpp
// Which earpiece's gyro columns take part in classification.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace jawtap {

struct ChannelMask {
    bool left = true;
    bool right = true;

    static constexpr ChannelMask both() { return {true, true}; }
    static constexpr ChannelMask left_only() { return {true, false}; }
    static constexpr ChannelMask right_only() { return {false, true}; }

    bool any() const { return left || right; }
    // Gyro matrix columns selected by the mask (0-2 left ear, 3-5 right ear).
    std::vector<std::size_t> columns() const;

    friend bool operator==(const ChannelMask&, const ChannelMask&) = default;
};

// "both", "left", "right"; parse throws InvalidArgument.
std::string to_string(ChannelMask mask);
ChannelMask parse_channel_mask(std::string_view text);

}  // namespace jawtap
