// Copyright 2026 The htglb Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "htglb/env.hpp"
#include "htglb/glm.hpp"
#include "htglb/harness/config.hpp"
#include "htglb/harness/experiments.hpp"
#include "htglb/harness/output.hpp"
#include "htglb/harness/runner.hpp"
#include "htglb/linalg.hpp"
#include "htglb/noise.hpp"
#include "htglb/policies/baselines.hpp"
#include "htglb/policies/common.hpp"
#include "htglb/policies/crmm.hpp"
#include "htglb/policies/crtm.hpp"
#include "htglb/policies/factory.hpp"
#include "htglb/policies/menu.hpp"
#include "htglb/policies/reference.hpp"
#include "htglb/policies/tofu.hpp"
#include "htglb/rng.hpp"
