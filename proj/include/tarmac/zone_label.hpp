#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tarmac {

// Tarmac partition. Parking is the slow-moving cargo/patrolling area.
enum class ZoneLabel : std::uint8_t { Apron = 0, Runway = 1, Parking = 2 };

inline constexpr std::array<ZoneLabel, 3> kAllZones{ZoneLabel::Apron, ZoneLabel::Runway, ZoneLabel::Parking};

std::string_view zone_name(ZoneLabel z);
// Accepts "Apron", "Runway", "Parking" and the alias "Patrol"/"Patrolling".
std::optional<ZoneLabel> parse_zone_name(std::string_view name);

// Small bitset over ZoneLabel.
class ZoneSet {
public:
    constexpr ZoneSet() = default;

    constexpr void insert(ZoneLabel z) { bits_ |= bit(z); }
    constexpr bool contains(ZoneLabel z) const { return (bits_ & bit(z)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return ((bits_ >> 0) & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1); }
    constexpr std::uint8_t bits() const { return bits_; }

    friend constexpr bool operator==(ZoneSet, ZoneSet) = default;

private:
    static constexpr std::uint8_t bit(ZoneLabel z) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(z)); }
    std::uint8_t bits_ = 0;
};

}  // namespace tarmac
