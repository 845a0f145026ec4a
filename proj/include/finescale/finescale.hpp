#pragma once

#include "finescale/eft.hpp"
#include "finescale/energy.hpp"
#include "finescale/error.hpp"
#include "finescale/experiments.hpp"
#include "finescale/io.hpp"
#include "finescale/measure_mu.hpp"
#include "finescale/moments.hpp"
#include "finescale/parallel.hpp"
#include "finescale/selberg.hpp"
#include "finescale/sequences.hpp"
#include "finescale/statistics.hpp"
