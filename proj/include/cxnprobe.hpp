#pragma once

#include "cxnprobe/assignment.hpp"
#include "cxnprobe/builtin_stimuli.hpp"
#include "cxnprobe/clustering.hpp"
#include "cxnprobe/construction.hpp"
#include "cxnprobe/embedstore.hpp"
#include "cxnprobe/error.hpp"
#include "cxnprobe/jabberlab.hpp"
#include "cxnprobe/lexicon.hpp"
#include "cxnprobe/pca.hpp"
#include "cxnprobe/rng.hpp"
#include "cxnprobe/sortlab.hpp"
#include "cxnprobe/stats.hpp"
#include "cxnprobe/stimgen.hpp"
#include "cxnprobe/stimulus.hpp"
