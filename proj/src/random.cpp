#include "coldstandby/random.hpp"

namespace coldstandby {

namespace {
std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }
}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(stream), hi32(stream), lo32(chunk), hi32(chunk)};
  engine_.seed(seq);
}

}  // namespace coldstandby
