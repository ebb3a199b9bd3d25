// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "trackdiv/compensated_sum.hpp"
#include "trackdiv/decomposition.hpp"
#include "trackdiv/divergence.hpp"
#include "trackdiv/errors.hpp"
#include "trackdiv/geometry.hpp"
#include "trackdiv/hungarian.hpp"
#include "trackdiv/io/mot_csv.hpp"
#include "trackdiv/io/report.hpp"
#include "trackdiv/io/scenario_file.hpp"
#include "trackdiv/io/top.hpp"
#include "trackdiv/mota.hpp"
#include "trackdiv/random.hpp"
#include "trackdiv/raster_oracle.hpp"
#include "trackdiv/scenario.hpp"
