#pragma once

// Umbrella header for the contrastive transfer tagging library.

#include "cts/artifacts.hpp"
#include "cts/common.hpp"
#include "cts/corpus.hpp"
#include "cts/corpus_io.hpp"
#include "cts/embedder.hpp"
#include "cts/losses.hpp"
#include "cts/model.hpp"
#include "cts/pipeline.hpp"
#include "cts/reporting.hpp"
#include "cts/rng.hpp"
#include "cts/run_config.hpp"
#include "cts/similarity.hpp"
#include "cts/standoff.hpp"
#include "cts/synth.hpp"
#include "cts/templates.hpp"
