#pragma once

#include "spikegate/blocks.hpp"
#include "spikegate/circuit.hpp"
#include "spikegate/gate_test.hpp"
#include "spikegate/netlist.hpp"
#include "spikegate/oracle.hpp"
#include "spikegate/repro.hpp"
#include "spikegate/sim.hpp"
#include "spikegate/trace_io.hpp"
