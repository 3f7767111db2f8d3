#pragma once

namespace gnm::detail {

// Exact intermediate for counts whose 64-bit overflow must be detected.
__extension__ typedef unsigned __int128 u128;

}  // namespace gnm::detail
