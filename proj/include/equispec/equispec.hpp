#pragma once

#include "equispec/block_structure.hpp"
#include "equispec/cavity.hpp"
#include "equispec/comparison.hpp"
#include "equispec/core_periphery.hpp"
#include "equispec/errors.hpp"
#include "equispec/generate.hpp"
#include "equispec/graph.hpp"
#include "equispec/io.hpp"
#include "equispec/spectrum.hpp"

namespace equispec {

inline constexpr const char* version = "0.1.0";

}  // namespace equispec
