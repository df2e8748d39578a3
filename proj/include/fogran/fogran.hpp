#pragma once

#include "fogran/baselines.hpp"
#include "fogran/channel.hpp"
#include "fogran/config.hpp"
#include "fogran/context.hpp"
#include "fogran/coordinated.hpp"
#include "fogran/core.hpp"
#include "fogran/d2d.hpp"
#include "fogran/decision.hpp"
#include "fogran/experiment.hpp"
#include "fogran/graphs.hpp"
#include "fogran/ia_idnc.hpp"
#include "fogran/joint.hpp"
#include "fogran/model.hpp"
#include "fogran/nc.hpp"
#include "fogran/power.hpp"
#include "fogran/schemes.hpp"
#include "fogran/sim.hpp"
#include "fogran/slot_channel.hpp"
