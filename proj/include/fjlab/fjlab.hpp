#pragma once

#include "fjlab/bounds.hpp"
#include "fjlab/config.hpp"
#include "fjlab/decay.hpp"
#include "fjlab/distributions.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/io.hpp"
#include "fjlab/optimizer.hpp"
#include "fjlab/power_series.hpp"
#include "fjlab/rate_models.hpp"
#include "fjlab/rng.hpp"
#include "fjlab/simulator.hpp"
#include "fjlab/strategies.hpp"
#include "fjlab/system.hpp"
