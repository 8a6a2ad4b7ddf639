#pragma once

#include "roadnet/edge_list.hpp"
#include "roadnet/errors.hpp"
#include "roadnet/graph.hpp"
#include "roadnet/kmeans.hpp"
#include "roadnet/pagerank.hpp"
#include "roadnet/parallel.hpp"
#include "roadnet/report.hpp"
#include "roadnet/stream.hpp"
#include "roadnet/topk.hpp"
