#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vplague {

template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

using ZoneId = Id<struct ZoneTag>;
using AvatarId = Id<struct AvatarTag>;
using PetId = Id<struct PetTag>;

enum class ChannelKind : std::uint8_t { Proximity, ZoneChat, GlobalChat, DirectMessage, PetVector };

inline constexpr std::size_t kChannelCount = 5;
inline constexpr std::array<ChannelKind, kChannelCount> kAllChannels = {
    ChannelKind::Proximity, ChannelKind::ZoneChat, ChannelKind::GlobalChat,
    ChannelKind::DirectMessage, ChannelKind::PetVector};

std::string_view to_string(ChannelKind c);
std::optional<ChannelKind> parse_channel(std::string_view s);

inline constexpr std::size_t channel_index(ChannelKind c) { return static_cast<std::size_t>(c); }

/// Raised when a configuration object violates its invariants. Carries every
/// violation found, not only the first.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

private:
  std::vector<std::string> problems_;
};

}  // namespace vplague
