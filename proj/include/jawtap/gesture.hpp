// gesture.hpp
// The 13-gesture vocabulary (place x manner, plus back triple) and noise kinds.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace jawtap {

enum class Place { Front, Back, Left, Right };
enum class Manner { Single, Double, Hold, Triple };
enum class NoiseKind { Talking, Walking, Eating, Static };

// Only the 13 valid combinations can be constructed; Triple requires Back.
class GestureLabel {
public:
    static std::optional<GestureLabel> make(Place place, Manner manner);
    static GestureLabel from_index(std::size_t index);

    Place place() const noexcept { return place_; }
    Manner manner() const noexcept { return manner_; }
    bool is_hold() const noexcept { return manner_ == Manner::Hold; }

    // Position in all_labels(), 0..12.
    std::size_t index() const noexcept;

    friend auto operator<=>(const GestureLabel& a, const GestureLabel& b) {
        return a.index() <=> b.index();
    }
    friend bool operator==(const GestureLabel&, const GestureLabel&) = default;

private:
    GestureLabel(Place p, Manner m) : place_(p), manner_(m) {}
    Place place_;
    Manner manner_;
};

inline constexpr std::size_t kLabelCount = 13;

const std::array<GestureLabel, kLabelCount>& all_labels();

// "front_single", ..., "back_triple". parse_label throws UnknownLabel.
std::string to_string(GestureLabel label);
GestureLabel parse_label(std::string_view text);

std::string_view to_string(Place place);
std::string_view to_string(Manner manner);

// "noise_talking", ... parse_noise_kind throws UnknownLabel.
std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);
inline constexpr std::array<NoiseKind, 4> kNoiseKinds = {NoiseKind::Talking, NoiseKind::Walking,
                                                         NoiseKind::Eating, NoiseKind::Static};

using AnnotationLabel = std::variant<GestureLabel, NoiseKind>;
std::string to_string(const AnnotationLabel& label);
AnnotationLabel parse_annotation_label(std::string_view text);

}  // namespace jawtap
