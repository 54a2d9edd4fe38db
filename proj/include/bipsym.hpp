/*
 * Copyright 2026 The bipsym Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Everything in one include.

#pragma once

#include "bipsym/bdd.hpp"
#include "bipsym/bench.hpp"
#include "bipsym/causal_tree.hpp"
#include "bipsym/connector.hpp"
#include "bipsym/dsl.hpp"
#include "bipsym/engine.hpp"
#include "bipsym/enum_engine.hpp"
#include "bipsym/equivalence.hpp"
#include "bipsym/error.hpp"
#include "bipsym/generators.hpp"
#include "bipsym/interaction.hpp"
#include "bipsym/interaction_bool.hpp"
#include "bipsym/model.hpp"
#include "bipsym/rng.hpp"
#include "bipsym/symbolic_engine.hpp"
