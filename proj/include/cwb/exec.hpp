#pragma once

namespace cwb {

// Selects between the OpenMP kernel and its serial reference. Both produce
// identical results; Serial exists for testing and benchmarking.
enum class Exec { Serial, Parallel };

}  // namespace cwb
