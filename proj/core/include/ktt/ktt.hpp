#pragma once

#include "ktt/error.hpp"
#include "ktt/extractor.hpp"
#include "ktt/geometry.hpp"
#include "ktt/io.hpp"
#include "ktt/kernels.hpp"
#include "ktt/link.hpp"
#include "ktt/log.hpp"
#include "ktt/metrics.hpp"
#include "ktt/numeric.hpp"
#include "ktt/reconstructor.hpp"
#include "ktt/segmentation.hpp"
#include "ktt/synthetic.hpp"
#include "ktt/trajectory.hpp"
