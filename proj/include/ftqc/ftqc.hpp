// Copyright 2026 The ftqc Authors
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

#include "ftqc/binary_word.hpp"
#include "ftqc/ccp.hpp"
#include "ftqc/circuit.hpp"
#include "ftqc/concatenated_code.hpp"
#include "ftqc/css_code.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/exact_executor.hpp"
#include "ftqc/experiment_config.hpp"
#include "ftqc/fault_enumeration.hpp"
#include "ftqc/fit.hpp"
#include "ftqc/frame_executor.hpp"
#include "ftqc/gadgets.hpp"
#include "ftqc/gates.hpp"
#include "ftqc/harness.hpp"
#include "ftqc/linear_code.hpp"
#include "ftqc/montecarlo.hpp"
#include "ftqc/parallel.hpp"
#include "ftqc/recovery.hpp"
#include "ftqc/sparse_state.hpp"
