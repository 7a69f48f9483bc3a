#pragma once

#include "ganet/dataset.hpp"
#include "ganet/errors.hpp"
#include "ganet/ga.hpp"
#include "ganet/genome.hpp"
#include "ganet/graph.hpp"
#include "ganet/knng.hpp"
#include "ganet/metrics.hpp"
#include "ganet/model.hpp"
#include "ganet/preprocess.hpp"
#include "ganet/rng.hpp"
#include "ganet/split.hpp"
#include "ganet/synthetic.hpp"
