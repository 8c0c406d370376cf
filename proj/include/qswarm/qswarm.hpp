#pragma once

#include "commands.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "mission.hpp"
#include "paper_check.hpp"
#include "qcore.hpp"
#include "swarm.hpp"
#include "tolerances.hpp"
