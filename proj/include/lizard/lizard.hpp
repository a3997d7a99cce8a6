#pragma once

#include "lizard/common.hpp"
#include "lizard/core.hpp"
#include "lizard/fivebar.hpp"
#include "lizard/fourbar.hpp"
#include "lizard/gait.hpp"
#include "lizard/robot.hpp"
#include "lizard/synthesis.hpp"
