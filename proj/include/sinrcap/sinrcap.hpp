#pragma once

#include "sinrcap/metric.hpp"
#include "sinrcap/sinr.hpp"
#include "sinrcap/game.hpp"
#include "sinrcap/baselines.hpp"
#include "sinrcap/instances.hpp"
#include "sinrcap/verify.hpp"
#include "sinrcap/experiment.hpp"
