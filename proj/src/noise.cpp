#include "mrsim/noise.hpp"

namespace mrsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_id) {
    // Two dependent rounds: hashing the base before the id is folded in keeps
    // the pair ordered, so (a, b) and (b, a) name different streams.
    return splitmix64(splitmix64(base) ^ stream_id);
}

} // namespace mrsim
