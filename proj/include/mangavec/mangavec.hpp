#pragma once

#include "mangavec/action_file.hpp"
#include "mangavec/doc.hpp"
#include "mangavec/geometry.hpp"
#include "mangavec/image.hpp"
#include "mangavec/metrics.hpp"
#include "mangavec/parallel.hpp"
#include "mangavec/pipeline.hpp"
#include "mangavec/png_io.hpp"
#include "mangavec/prune.hpp"
#include "mangavec/raster.hpp"
#include "mangavec/reward.hpp"
#include "mangavec/search.hpp"
#include "mangavec/vectorize.hpp"
