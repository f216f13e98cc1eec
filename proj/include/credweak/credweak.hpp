// Copyright 2026 The credweak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header. manifest.hpp is excluded because it needs libcrypto.

#pragma once

#include "credweak/classifier.hpp"
#include "credweak/common.hpp"
#include "credweak/config.hpp"
#include "credweak/corpus.hpp"
#include "credweak/embedding.hpp"
#include "credweak/experiment.hpp"
#include "credweak/feature_vector.hpp"
#include "credweak/io.hpp"
#include "credweak/labeling.hpp"
#include "credweak/naive_bayes.hpp"
#include "credweak/report.hpp"
#include "credweak/svm.hpp"
#include "credweak/synth.hpp"
#include "credweak/text.hpp"
#include "credweak/tfidf.hpp"
