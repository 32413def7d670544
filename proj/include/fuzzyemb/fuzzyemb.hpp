#pragma once

#include "fuzzyemb/core.hpp"
#include "fuzzyemb/corpus_io.hpp"
#include "fuzzyemb/evaluation.hpp"
#include "fuzzyemb/experiment.hpp"
#include "fuzzyemb/fcm.hpp"
#include "fuzzyemb/fgk.hpp"
#include "fuzzyemb/validity.hpp"
