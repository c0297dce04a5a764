// Copyright 2026 The bslab Authors
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

#ifndef BSLAB_BSLAB_HPP
#define BSLAB_BSLAB_HPP

#include "bslab/builders.hpp"
#include "bslab/circuit.hpp"
#include "bslab/code.hpp"
#include "bslab/decode.hpp"
#include "bslab/executor.hpp"
#include "bslab/experiments.hpp"
#include "bslab/fits.hpp"
#include "bslab/ftaudit.hpp"
#include "bslab/gf2.hpp"
#include "bslab/noise.hpp"
#include "bslab/pauli.hpp"
#include "bslab/rng.hpp"
#include "bslab/statevector.hpp"

#endif  // BSLAB_BSLAB_HPP
