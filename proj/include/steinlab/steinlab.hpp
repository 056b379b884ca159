// Copyright 2026 The steinlab Authors
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

// Everything in one include.
#pragma once

#include "steinlab/axioms.hpp"
#include "steinlab/composite.hpp"
#include "steinlab/divergences.hpp"
#include "steinlab/eigen.hpp"
#include "steinlab/error.hpp"
#include "steinlab/exponent_lab.hpp"
#include "steinlab/families.hpp"
#include "steinlab/harness.hpp"
#include "steinlab/lp.hpp"
#include "steinlab/matrix.hpp"
#include "steinlab/operator.hpp"
#include "steinlab/operator_json.hpp"
#include "steinlab/random.hpp"
#include "steinlab/report.hpp"
