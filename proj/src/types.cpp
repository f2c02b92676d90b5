#include "vplague/types.hpp"

namespace vplague {

namespace {
constexpr std::array<std::string_view, kChannelCount> kChannelNames = {
    "Proximity", "ZoneChat", "GlobalChat", "DirectMessage", "PetVector"};

std::string join(const std::vector<std::string>& problems) {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}
}  // namespace

std::string_view to_string(ChannelKind c) { return kChannelNames[channel_index(c)]; }

std::optional<ChannelKind> parse_channel(std::string_view s) {
  for (std::size_t i = 0; i < kChannelCount; ++i)
    if (kChannelNames[i] == s) return kAllChannels[i];
  return std::nullopt;
}

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

}  // namespace vplague
