#pragma once

#include "lowdeg/exact.hpp"
#include "lowdeg/rng.hpp"
#include "lowdeg/graphs.hpp"
#include "lowdeg/catalog_io.hpp"
#include "lowdeg/models.hpp"
#include "lowdeg/moments.hpp"
#include "lowdeg/rvalues.hpp"
#include "lowdeg/advantage.hpp"
#include "lowdeg/oracle.hpp"
#include "lowdeg/stats.hpp"
#include "lowdeg/config.hpp"
#include "lowdeg/report_json.hpp"
