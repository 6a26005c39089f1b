#pragma once

#include "shapedc/classifier.hpp"
#include "shapedc/io.hpp"
#include "shapedc/metrics.hpp"
#include "shapedc/mrf_dictionary.hpp"
#include "shapedc/parallel.hpp"
#include "shapedc/preprocess.hpp"
#include "shapedc/shapelets.hpp"
#include "shapedc/sparse_coding.hpp"
#include "shapedc/superpixel.hpp"
#include "shapedc/synthetic.hpp"
#include "shapedc/types.hpp"
