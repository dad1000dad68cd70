// Copyright 2026 The shadowfalqon Authors
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

#include "shadowfalqon/errors.hpp"
#include "shadowfalqon/estimators.hpp"
#include "shadowfalqon/experiments.hpp"
#include "shadowfalqon/falqon.hpp"
#include "shadowfalqon/graph.hpp"
#include "shadowfalqon/hamiltonian.hpp"
#include "shadowfalqon/pauli.hpp"
#include "shadowfalqon/seeding.hpp"
#include "shadowfalqon/statevector.hpp"
