// vocalrisk/vocalrisk.hpp

// Copyright 2026  The vocalrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#pragma once

#include "vocalrisk/audio.hpp"
#include "vocalrisk/errors.hpp"
#include "vocalrisk/features.hpp"
#include "vocalrisk/parallel.hpp"
#include "vocalrisk/pitch.hpp"
#include "vocalrisk/robustness.hpp"
#include "vocalrisk/spectral.hpp"
#include "vocalrisk/spectrum.hpp"
#include "vocalrisk/splice.hpp"
#include "vocalrisk/voice_quality.hpp"
#include "vocalrisk/stats/ancova.hpp"
#include "vocalrisk/stats/distributions.hpp"
#include "vocalrisk/stats/lda.hpp"
#include "vocalrisk/stats/ols.hpp"
#include "vocalrisk/stats/stepwise.hpp"
#include "vocalrisk/stats/svm.hpp"
#include "vocalrisk/pipeline/cohort.hpp"
#include "vocalrisk/pipeline/config.hpp"
#include "vocalrisk/pipeline/crossdb.hpp"
#include "vocalrisk/pipeline/csv.hpp"
#include "vocalrisk/pipeline/manifest.hpp"
#include "vocalrisk/pipeline/report.hpp"
#include "vocalrisk/pipeline/screening.hpp"
