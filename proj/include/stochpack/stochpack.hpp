// Copyright 2026 The stochpack Authors
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

#pragma once

#include "stochpack/adapters.hpp"
#include "stochpack/common.hpp"
#include "stochpack/exact.hpp"
#include "stochpack/experiment.hpp"
#include "stochpack/generators.hpp"
#include "stochpack/instance.hpp"
#include "stochpack/instance_io.hpp"
#include "stochpack/lp.hpp"
#include "stochpack/matroid.hpp"
#include "stochpack/random.hpp"
#include "stochpack/sparsifier.hpp"
#include "stochpack/strategies.hpp"
#include "stochpack/witness.hpp"
