#include "jawtap/gesture.hpp"

#include "jawtap/error.hpp"

#include <utility>

namespace jawtap {

namespace {

constexpr std::array<Place, 4> kPlaces = {Place::Front, Place::Back, Place::Left, Place::Right};
constexpr std::array<Manner, 3> kCommonManners = {Manner::Single, Manner::Double, Manner::Hold};

}  // namespace

std::optional<GestureLabel> GestureLabel::make(Place place, Manner manner) {
    if (manner == Manner::Triple && place != Place::Back) return std::nullopt;
    return GestureLabel(place, manner);
}

GestureLabel GestureLabel::from_index(std::size_t index) {
    if (index >= kLabelCount) throw Error(ErrorCode::UnknownLabel, "label index out of range");
    return all_labels()[index];
}

// Order: place-major over {single, double, hold}, then back_triple last.
std::size_t GestureLabel::index() const noexcept {
    if (manner_ == Manner::Triple) return 12;
    return static_cast<std::size_t>(place_) * 3 + static_cast<std::size_t>(manner_);
}

const std::array<GestureLabel, kLabelCount>& all_labels() {
    static const auto labels = [] {
        auto at = [](std::size_t i) {
            if (i == 12) return *GestureLabel::make(Place::Back, Manner::Triple);
            return *GestureLabel::make(kPlaces[i / 3], kCommonManners[i % 3]);
        };
        return [&]<std::size_t... I>(std::index_sequence<I...>) {
            return std::array<GestureLabel, kLabelCount>{at(I)...};
        }(std::make_index_sequence<kLabelCount>{});
    }();
    return labels;
}

std::string_view to_string(Place place) {
    switch (place) {
        case Place::Front: return "front";
        case Place::Back: return "back";
        case Place::Left: return "left";
        case Place::Right: return "right";
    }
    return "?";
}

std::string_view to_string(Manner manner) {
    switch (manner) {
        case Manner::Single: return "single";
        case Manner::Double: return "double";
        case Manner::Hold: return "hold";
        case Manner::Triple: return "triple";
    }
    return "?";
}

std::string to_string(GestureLabel label) {
    return std::string(to_string(label.place())) + "_" + std::string(to_string(label.manner()));
}

GestureLabel parse_label(std::string_view text) {
    for (const auto& label : all_labels())
        if (to_string(label) == text) return label;
    throw Error(ErrorCode::UnknownLabel, std::string(text));
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Talking: return "noise_talking";
        case NoiseKind::Walking: return "noise_walking";
        case NoiseKind::Eating: return "noise_eating";
        case NoiseKind::Static: return "noise_static";
    }
    return "noise_?";
}

NoiseKind parse_noise_kind(std::string_view text) {
    for (NoiseKind k : kNoiseKinds)
        if (to_string(k) == text) return k;
    throw Error(ErrorCode::UnknownLabel, std::string(text));
}

std::string to_string(const AnnotationLabel& label) {
    return std::visit([](const auto& l) { return to_string(l); }, label);
}

AnnotationLabel parse_annotation_label(std::string_view text) {
    if (text.starts_with("noise_")) return parse_noise_kind(text);
    return parse_label(text);
}

}  // namespace jawtap
