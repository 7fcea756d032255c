#pragma once

// Umbrella header.

#include "promor/artifacts.hpp"
#include "promor/banding.hpp"
#include "promor/corpus.hpp"
#include "promor/csv.hpp"
#include "promor/diversity.hpp"
#include "promor/engagement.hpp"
#include "promor/error.hpp"
#include "promor/lexical.hpp"
#include "promor/manifest.hpp"
#include "promor/pca.hpp"
#include "promor/pipeline.hpp"
#include "promor/regression.hpp"
#include "promor/report.hpp"
#include "promor/rng.hpp"
#include "promor/sequence.hpp"
#include "promor/specifiers.hpp"
#include "promor/stats.hpp"
#include "promor/stopwords.hpp"
#include "promor/text_prep.hpp"
#include "promor/thematic.hpp"
#include "promor/util.hpp"
#include "promor/version.hpp"
