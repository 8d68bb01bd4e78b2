// Copyright 2026 the darkstate authors
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

#ifndef DARKSTATE_DARKSTATE_HPP
#define DARKSTATE_DARKSTATE_HPP

#include "darkstate/model.hpp"
#include "darkstate/rwa.hpp"
#include "darkstate/liouville.hpp"
#include "darkstate/classify.hpp"
#include "darkstate/dynamics.hpp"
#include "darkstate/presets.hpp"

#endif  // DARKSTATE_DARKSTATE_HPP
