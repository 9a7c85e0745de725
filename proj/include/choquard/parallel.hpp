#pragma once

#include <cstddef>
#include <functional>

namespace chq::parallel {

//! Process-wide worker count, fixed once at startup.
void set_threads(int count);
int threads();

//! Calls body(begin, end) on contiguous chunks of [0, n).
//! Chunk boundaries depend only on n and threads(), so any per-index work is
//! independent of scheduling.
void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace chq::parallel
