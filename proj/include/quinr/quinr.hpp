// Copyright 2026 The quinr Authors
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

#include "quinr/adam.hpp"
#include "quinr/autodiff.hpp"
#include "quinr/codec.hpp"
#include "quinr/errors.hpp"
#include "quinr/gradcheck.hpp"
#include "quinr/half.hpp"
#include "quinr/image_io.hpp"
#include "quinr/metrics.hpp"
#include "quinr/model.hpp"
#include "quinr/qsim.hpp"
#include "quinr/quantize.hpp"
#include "quinr/rng.hpp"
#include "quinr/signal.hpp"
#include "quinr/sweep.hpp"
#include "quinr/train.hpp"
