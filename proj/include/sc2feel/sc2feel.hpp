// Copyright 2026 The sc2feel Authors
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

#include "sc2feel/numerics.hpp"
#include "sc2feel/units.hpp"
#include "sc2feel/channel.hpp"
#include "sc2feel/cost_model.hpp"
#include "sc2feel/allocator.hpp"
#include "sc2feel/batch_scheduler.hpp"
#include "sc2feel/audit.hpp"
#include "sc2feel/sensing.hpp"
#include "sc2feel/feel_sim.hpp"
#include "sc2feel/config.hpp"
#include "sc2feel/io.hpp"
