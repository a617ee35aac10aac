#include "jawtap/channels.hpp"

#include "jawtap/error.hpp"

namespace jawtap {

std::vector<std::size_t> ChannelMask::columns() const {
    std::vector<std::size_t> cols;
    if (left) cols.insert(cols.end(), {0, 1, 2});
    if (right) cols.insert(cols.end(), {3, 4, 5});
    return cols;
}

std::string to_string(ChannelMask mask) {
    if (mask.left && mask.right) return "both";
    if (mask.left) return "left";
    if (mask.right) return "right";
    return "none";
}

ChannelMask parse_channel_mask(std::string_view text) {
    if (text == "both") return ChannelMask::both();
    if (text == "left" || text == "left_only") return ChannelMask::left_only();
    if (text == "right" || text == "right_only") return ChannelMask::right_only();
    throw Error(ErrorCode::InvalidArgument, "unknown channel mask '" + std::string(text) + "'");
}

}  // namespace jawtap
