#pragma once

#include "labelagg/annotations_io.hpp"
#include "labelagg/crowdtruth.hpp"
#include "labelagg/dawid_skene.hpp"
#include "labelagg/experiment.hpp"
#include "labelagg/majority_vote.hpp"
#include "labelagg/metrics.hpp"
#include "labelagg/random.hpp"
#include "labelagg/simulate.hpp"
#include "labelagg/special_functions.hpp"
#include "labelagg/types.hpp"
