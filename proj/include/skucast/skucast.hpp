#pragma once

#include "skucast/amplitude.hpp"
#include "skucast/calendar.hpp"
#include "skucast/errors.hpp"
#include "skucast/evaluate.hpp"
#include "skucast/hierarchy.hpp"
#include "skucast/ingest.hpp"
#include "skucast/issm.hpp"
#include "skucast/negbin.hpp"
#include "skucast/pipeline.hpp"
#include "skucast/rng.hpp"
#include "skucast/simulate.hpp"
