#pragma once

// Umbrella header for the cardinal simulation library.

#include "cardinal/compare.hpp"
#include "cardinal/config.hpp"
#include "cardinal/epidemic.hpp"
#include "cardinal/host_state.hpp"
#include "cardinal/lymph_node.hpp"
#include "cardinal/metrics.hpp"
#include "cardinal/peer_interaction.hpp"
#include "cardinal/periphery.hpp"
#include "cardinal/responder.hpp"
#include "cardinal/rng.hpp"
#include "cardinal/topology.hpp"
#include "cardinal/types.hpp"
#include "cardinal/world.hpp"
