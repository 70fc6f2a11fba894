#pragma once

#include "readlab/adsem.hpp"
#include "readlab/annotation.hpp"
#include "readlab/discourse.hpp"
#include "readlab/error.hpp"
#include "readlab/extractor.hpp"
#include "readlab/hybrid.hpp"
#include "readlab/lda.hpp"
#include "readlab/lexicons.hpp"
#include "readlab/lexsem.hpp"
#include "readlab/ml/classifier.hpp"
#include "readlab/ml/folds.hpp"
#include "readlab/ml/grid_search.hpp"
#include "readlab/ml/metrics.hpp"
#include "readlab/preprocess.hpp"
#include "readlab/registry.hpp"
#include "readlab/shallow.hpp"
#include "readlab/syntax.hpp"
#include "readlab/tree.hpp"
